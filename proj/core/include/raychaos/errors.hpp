/*
   Copyright 2026 The raychaos Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace raychaos {

/// Invalid cavity or run configuration. `key()` names the offending
/// parameter (or invariant) so front ends can report it.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string &what)
        : std::invalid_argument(what), key_(std::move(key))
    {
    }

    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A computation reached a state it cannot resolve deterministically
/// (ambiguous simultaneous hits, grazing tangent map, and so on).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mathematical precondition violated by a caller (e.g. magnification of
/// a stable sub-cavity).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace raychaos

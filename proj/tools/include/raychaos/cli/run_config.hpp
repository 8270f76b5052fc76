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

#include "raychaos/analysis.hpp"
#include "raychaos/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace raychaos::cli {

/// Everything a subcommand needs. Every field maps to one flat key of the
/// JSON config file and to one `--kebab-case` command-line flag.
struct RunConfig {
    std::string label;  // preset name, or empty
    CavityConfig cavity;
    std::int64_t cap = kDefaultBounceCap;

    // escape-time grid (y_min/y_max default to -b/+b)
    std::optional<double> y_min;
    std::optional<double> y_max;
    std::int64_t n_samples = 1000;
    double angle0 = 0.0;

    // single-orbit commands (sos, trace)
    double y0 = 1e-3;
    std::int64_t n_points = 1000;

    // Lyapunov estimation
    std::int64_t n_orbits = 10;
    std::int64_t bounces_per_orbit = 10000;
    std::int64_t transient = 100;
    TangentMethod method = TangentMethod::ExactTangent;
    bool exclude_regular = true;
    std::int64_t depth = 2;
    std::int64_t refine_factor = 10;
    std::int64_t seed_samples = 2000;

    std::int64_t workers = 0;
    std::string output;

    double scan_y_min() const { return y_min.value_or(-cavity.b); }
    double scan_y_max() const { return y_max.value_or(cavity.b); }

    ScanParams scan_params() const;
    LyapunovParams lyapunov_params() const;

    /// Checks the cavity and every run parameter; throws ConfigError naming
    /// the offending key.
    void validate() const;
};

enum class KeyType { Number, Integer, Boolean, String };

struct KeySpec {
    std::string_view name;
    KeyType type;
    std::string_view help;
};

/// All accepted config keys, in serialization order.
std::span<const KeySpec> config_keys();

/// "y_min" -> "y-min"
std::string flag_name(std::string_view key);

/// Named cavity presets: UU, US, SS, MM, SM, UM, fig2a, fig2b.
std::optional<CavityConfig> preset(std::string_view name);
std::span<const std::string_view> preset_names();

/// Flat JSON echo of a resolved config (y_min/y_max resolved), keys in
/// config_keys() order. Feeding it back through resolve_config reproduces
/// the config.
nlohmann::ordered_json to_json(const RunConfig &cfg);

/// Reads a flat JSON object from disk. Throws ConfigError on malformed
/// content (key "config").
nlohmann::json load_config_file(const std::filesystem::path &path);

/// Layers, lowest precedence first: built-in defaults, the file's "preset",
/// the remaining file keys, the preset flag, then individual flags. Unknown
/// keys, type mismatches and invariant violations throw ConfigError naming
/// the key.
RunConfig resolve_config(const nlohmann::json *file, std::string_view preset_flag,
                         const std::map<std::string, std::string> &flags);

} // namespace raychaos::cli

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
#include "raychaos/cli/run_config.hpp"
#include "raychaos/dynamics.hpp"
#include "raychaos/geometry.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace raychaos::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitIo = 2,
    kExitNumerical = 3,
};

enum class Subcommand { Stability, Trace, Sos, Lyapunov, Escape };

std::string_view to_string(Subcommand cmd);
std::optional<Subcommand> parse_subcommand(std::string_view name);

/// "stability.csv", "trace.csv", "sos.csv", "lyap.csv", "escape.csv".
std::string default_output(Subcommand cmd);

/// 17 significant digits, which round-trips every double.
std::string format_number(double v);

// CSV writers. Each emits a header row followed by one row per item.
void write_stability_csv(std::ostream &os, const ParaxialReport &report);
void write_trace_csv(std::ostream &os, const TraceResult &result);
void write_sos_csv(std::ostream &os, const std::vector<SosPoint> &points);
void write_escape_csv(std::ostream &os, const std::vector<EscapeRecord> &records);
void write_lyap_csv(std::ostream &os, std::string_view label, const LyapunovEstimate &est);

struct RunMetadata {
    std::string subcommand;
    nlohmann::ordered_json config;
    double wall_clock_s = 0.0;
    unsigned workers = 1;
    std::string output;
    std::vector<std::string> warnings;
};

nlohmann::ordered_json to_json(const RunMetadata &meta);

/// Sidecar path for an output file: "<output>.meta.json".
std::string metadata_path(const std::string &output);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string output;
    std::string message;
};

/// Runs one subcommand, writing its CSV (cfg.output, or the default name)
/// and the metadata sidecar. Progress goes to `log`, warnings and errors to
/// `err`. Failures do not throw; they come back as an ExitCode.
RunOutcome run_subcommand(Subcommand cmd, const RunConfig &cfg, std::ostream &log,
                          std::ostream &err);

} // namespace raychaos::cli

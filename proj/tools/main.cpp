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

// raychaos: ray dynamics and chaos diagnostics for the composite cavity.
//
//   raychaos stability --preset UU
//   raychaos escape --preset UU --n-samples 10000 --output escape.csv
//   raychaos lyapunov --config run.json --workers 8

#include "raychaos/cli/commands.hpp"
#include "raychaos/cli/run_config.hpp"
#include "raychaos/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using namespace raychaos;
using namespace raychaos::cli;

struct Inputs {
    std::string config_file;
    std::string preset;
    std::map<std::string, std::string> values;
};

void add_run_options(CLI::App &sub, Inputs &in)
{
    sub.add_option("--config", in.config_file, "flat JSON config file (flags override it)");
    std::string presets;
    for (std::string_view p : preset_names()) {
        presets += presets.empty() ? "" : " ";
        presets += p;
    }
    sub.add_option("--preset", in.preset, "cavity preset: " + presets);
    for (const KeySpec &k : config_keys()) {
        if (k.name == "preset") {
            continue;
        }
        // Values stay text here; resolve_config does typed parsing so that
        // errors name the config key.
        std::string &slot = in.values[std::string(k.name)];
        sub.add_option("--" + flag_name(k.name), slot, std::string(k.help));
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Ray chaos in a composite open optical cavity"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Inputs in;
    const std::array<std::pair<Subcommand, const char *>, 5> commands{{
        {Subcommand::Stability, "paraxial stability report (stability.csv)"},
        {Subcommand::Trace, "bounce-by-bounce trace of one ray (trace.csv)"},
        {Subcommand::Sos, "surface of section at the left mirror (sos.csv)"},
        {Subcommand::Lyapunov, "repeller Lyapunov exponent estimate (lyap.csv)"},
        {Subcommand::Escape, "escape-time function scan (escape.csv)"},
    }};
    std::map<CLI::App *, Subcommand> lookup;
    for (const auto &[cmd, help] : commands) {
        CLI::App *sub = app.add_subcommand(std::string(to_string(cmd)), help);
        add_run_options(*sub, in);
        lookup[sub] = cmd;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    CLI::App *chosen = app.get_subcommands().front();
    const Subcommand cmd = lookup.at(chosen);

    RunConfig cfg;
    try {
        std::map<std::string, std::string> flags;
        for (const auto &[key, text] : in.values) {
            if (chosen->count("--" + flag_name(key)) > 0) {
                flags[key] = text;
            }
        }
        nlohmann::json file;
        if (!in.config_file.empty()) {
            file = load_config_file(in.config_file);
        }
        cfg = resolve_config(in.config_file.empty() ? nullptr : &file, in.preset, flags);
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << " (key: " << e.key() << ")\n";
        return kExitConfig;
    }

    const RunOutcome outcome = run_subcommand(cmd, cfg, std::cout, std::cerr);
    if (outcome.exit_code == kExitOk) {
        std::cout << "wrote " << outcome.output << " and " << metadata_path(outcome.output)
                  << '\n';
    }
    return outcome.exit_code;
}

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

#include "raychaos/cli/commands.hpp"
#include "raychaos/cli/run_config.hpp"
#include "raychaos/errors.hpp"

#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace raychaos;
using namespace raychaos::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / "raychaos_cli_io_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string &s) { return s.substr(0, s.find('\n')); }

std::vector<std::string> split(const std::string &row)
{
    std::vector<std::string> out;
    std::istringstream in(row);
    for (std::string field; std::getline(in, field, ',');) {
        out.push_back(field);
    }
    return out;
}

std::string config_error_key(const nlohmann::json *file, std::string_view preset_name,
                             const std::map<std::string, std::string> &flags)
{
    try {
        resolve_config(file, preset_name, flags);
    } catch (const ConfigError &e) {
        return e.key();
    }
    return {};
}

RunOutcome run_quiet(Subcommand cmd, const RunConfig &cfg)
{
    std::ostringstream log;
    std::ostringstream err;
    return run_subcommand(cmd, cfg, log, err);
}

} // namespace

TEST_CASE("presets carry the reference parameters")
{
    const RunConfig uu = resolve_config(nullptr, "UU", {});
    CHECK(uu.cavity == CavityConfig{1.0, 0.25, 0.04, 0.04, 0.003, 0.025});
    CHECK(uu.label == "UU");
    CHECK(uu.cap == 60000);

    const RunConfig b = resolve_config(nullptr, "fig2b", {});
    CHECK(b.cavity.R == 1.0);
    CHECK(b.cavity.r == 0.9);
    CHECK(b.cavity.l_left == 0.45);
    CHECK(b.cavity.l_right == 0.45);

    CHECK(*preset("fig2a") == *preset("UU"));
    CHECK(preset_names().size() == 8);
    for (std::string_view name : preset_names()) {
        CHECK(preset(name).has_value());
    }
    CHECK_FALSE(preset("XX"));
    CHECK(config_error_key(nullptr, "XX", {}) == "preset");
}

TEST_CASE("layering: defaults, file, preset flag, individual flags")
{
    const nlohmann::json file = {{"preset", "SS"}, {"l_left", 0.3}, {"cap", 500}};
    const RunConfig from_file = resolve_config(&file, "", {});
    CHECK(from_file.cavity.r == 0.9);
    CHECK(from_file.cavity.l_left == 0.3);
    CHECK(from_file.cap == 500);

    const RunConfig flagged = resolve_config(&file, "", {{"cap", "700"}, {"y0", "2e-3"}});
    CHECK(flagged.cap == 700);
    CHECK(flagged.y0 == 2e-3);
    CHECK(flagged.cavity.l_left == 0.3);

    const RunConfig represet = resolve_config(&file, "UU", {});
    CHECK(represet.cavity == *preset("UU"));
    CHECK(represet.cap == 500);
}

TEST_CASE("rejected configurations name the key")
{
    const nlohmann::json unknown = {{"colour", 3}};
    CHECK(config_error_key(&unknown, "", {}) == "colour");
    CHECK(config_error_key(nullptr, "", {{"colour", "3"}}) == "colour");

    try {
        resolve_config(nullptr, "UU", {{"a", "0.03"}});
        FAIL("expected a ConfigError");
    } catch (const ConfigError &e) {
        CHECK(e.key() == "a");
        CHECK(std::string(e.what()).find("a < b") != std::string::npos);
    }

    CHECK(config_error_key(nullptr, "", {{"cap", "1.5"}}) == "cap");
    CHECK(config_error_key(nullptr, "", {{"R", "one"}}) == "R");
    CHECK(config_error_key(nullptr, "", {{"method", "rk4"}}) == "method");
    CHECK(config_error_key(nullptr, "", {{"exclude_regular", "maybe"}}) == "exclude_regular");
    CHECK(config_error_key(nullptr, "", {{"y0", "0.1"}}) == "y0");
    CHECK(config_error_key(nullptr, "", {{"bounces_per_orbit", "10"}}) == "bounces_per_orbit");
}

TEST_CASE("config files")
{
    const fs::path dir = scratch_dir();
    const fs::path good = dir / "good.json";
    std::ofstream(good) << R"({"preset": "UM", "n_samples": 10.0, "method": "shadow"})";
    const nlohmann::json j = load_config_file(good);
    const RunConfig cfg = resolve_config(&j, "", {});
    CHECK(cfg.cavity == *preset("UM"));
    CHECK(cfg.n_samples == 10);
    CHECK(cfg.method == TangentMethod::Shadow);

    const fs::path nested = dir / "nested.json";
    std::ofstream(nested) << R"({"cavity": {"R": 1}})";
    CHECK_THROWS_AS(load_config_file(nested), ConfigError);

    const fs::path broken = dir / "broken.json";
    std::ofstream(broken) << R"({"R": )";
    CHECK_THROWS_AS(load_config_file(broken), ConfigError);

    CHECK_THROWS_AS(load_config_file(dir / "missing.json"), ConfigError);
}

TEST_CASE("config echo reproduces the config")
{
    RunConfig cfg = resolve_config(nullptr, "US", {{"cap", "1234"}, {"method", "shadow"}});
    const nlohmann::json echo = to_json(cfg);
    const RunConfig again = resolve_config(&echo, "", {});
    CHECK(to_json(again) == to_json(cfg));
    CHECK(echo["y_min"] == -0.025);
    CHECK(echo["method"] == "shadow");
}

TEST_CASE("numbers round-trip through 17 significant digits")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        const std::string s = format_number(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_number(0.0) == "0");
}

TEST_CASE("CSV headers")
{
    std::ostringstream a, b, c, d, e;
    write_stability_csv(a, classify(*preset("UU")));
    write_trace_csv(b, TraceResult{});
    write_sos_csv(c, {});
    write_escape_csv(d, {});
    write_lyap_csv(e, "UU", LyapunovEstimate{});
    CHECK(first_line(a.str()) == "config_label,m_left,m_right,M_left,M_right,lambda0_left,lambda0_right");
    CHECK(first_line(b.str()) == "event_index,t,z,y,vz,vy,surface_id");
    CHECK(first_line(c.str()) == "bounce_index,y,vy");
    CHECK(first_line(d.str()) == "y0,angle0,n_bounces,escape_time_s,capped");
    CHECK(first_line(e.str()) == "label,lambda1,stderr,exponent_sum,n_orbits,bounces");
}

TEST_CASE("stability subcommand")
{
    RunConfig cfg = resolve_config(nullptr, "UU", {});
    cfg.output = (scratch_dir() / "stability.csv").string();
    const RunOutcome out = run_quiet(Subcommand::Stability, cfg);
    REQUIRE(out.exit_code == kExitOk);

    std::istringstream rows(slurp(cfg.output));
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    const std::vector<std::string> f = split(row);
    REQUIRE(f.size() == 7);
    CHECK(f[0] == "UU");
    CHECK(std::stod(f[1]) == doctest::Approx(1.2272).epsilon(1e-15));
    CHECK(std::stod(f[3]) == doctest::Approx(1.93855071518906903).epsilon(1e-14));
    CHECK(std::stod(f[5]) == doctest::Approx(8.27425799831340389).epsilon(1e-14));

    const nlohmann::json meta = nlohmann::json::parse(slurp(metadata_path(cfg.output)));
    CHECK(meta["tool"] == "raychaos");
    CHECK(meta["version"] == std::string(kToolVersion));
    CHECK(meta["subcommand"] == "stability");
    CHECK(meta["config"]["r"] == 0.25);
    CHECK(meta.contains("wall_clock_s"));
    CHECK(meta.contains("workers"));

    // The sidecar is enough to rerun the job.
    const nlohmann::json echo = meta["config"];
    CHECK(to_json(resolve_config(&echo, "", {})) == to_json(cfg));
}

TEST_CASE("sos subcommand on the fixed point")
{
    RunConfig cfg = resolve_config(nullptr, "fig2b", {{"y0", "0"}, {"angle0", "0"}, {"n_points", "100"}});
    cfg.output = (scratch_dir() / "sos.csv").string();
    REQUIRE(run_quiet(Subcommand::Sos, cfg).exit_code == kExitOk);
    std::istringstream rows(slurp(cfg.output));
    std::string line;
    std::getline(rows, line);
    int n = 0;
    while (std::getline(rows, line)) {
        CHECK(line.substr(line.find(',')) == ",0,0");
        ++n;
    }
    CHECK(n == 100);
}

TEST_CASE("trace subcommand")
{
    RunConfig cfg = resolve_config(nullptr, "UU", {{"y0", "0"}, {"cap", "3"}});
    cfg.output = (scratch_dir() / "trace.csv").string();
    REQUIRE(run_quiet(Subcommand::Trace, cfg).exit_code == kExitOk);
    std::istringstream rows(slurp(cfg.output));
    std::string line;
    std::getline(rows, line);
    std::vector<std::vector<std::string>> events;
    while (std::getline(rows, line)) {
        events.push_back(split(line));
    }
    REQUIRE(events.size() == 3);
    CHECK(events[0][0] == "1");
    CHECK(std::stod(events[0][2]) == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(events[0][4] == "-1");
    CHECK(events[0][6] == "1");
    CHECK(events[1][6] == "0");
    CHECK(std::stod(events[2][1]) == doctest::Approx(0.12).epsilon(1e-15));
}

TEST_CASE("exit codes")
{
    RunConfig cfg = resolve_config(nullptr, "UU", {});
    cfg.output = (scratch_dir() / "no_such_dir" / "x.csv").string();
    CHECK(run_quiet(Subcommand::Stability, cfg).exit_code == kExitIo);

    // A scan confined to a prompt-escape window finds nothing to average.
    RunConfig window = resolve_config(
        nullptr, "UU",
        {{"y_min", "0.018"}, {"y_max", "0.0225"}, {"seed_samples", "50"}, {"depth", "1"},
         {"bounces_per_orbit", "1000"}});
    window.output = (scratch_dir() / "lyap.csv").string();
    std::ostringstream log, err;
    const RunOutcome out = run_subcommand(Subcommand::Lyapunov, window, log, err);
    CHECK(out.exit_code == kExitNumerical);
    CHECK_FALSE(err.str().empty());
}

TEST_CASE("output is byte-identical across worker counts")
{
    const fs::path dir = scratch_dir();
    std::string previous;
    for (const char *workers : {"1", "2", "4"}) {
        RunConfig cfg = resolve_config(
            nullptr, "UU", {{"n_samples", "200"}, {"cap", "20000"}, {"workers", workers}});
        cfg.output = (dir / (std::string("escape_") + workers + ".csv")).string();
        REQUIRE(run_quiet(Subcommand::Escape, cfg).exit_code == kExitOk);
        const std::string csv = slurp(cfg.output);
        if (!previous.empty()) {
            CHECK(csv == previous);
        }
        previous = csv;
    }
}

TEST_CASE("subcommand names")
{
    CHECK(parse_subcommand("lyapunov") == Subcommand::Lyapunov);
    CHECK_FALSE(parse_subcommand("plot"));
    CHECK(default_output(Subcommand::Lyapunov) == "lyap.csv");
    CHECK(default_output(Subcommand::Escape) == "escape.csv");
    CHECK(flag_name("bounces_per_orbit") == "bounces-per-orbit");
}

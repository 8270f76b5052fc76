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

#include "raychaos/cli/run_config.hpp"

#include "raychaos/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

namespace raychaos::cli {

namespace {

constexpr std::array kKeys = {
    KeySpec{"preset", KeyType::String, "cavity preset (UU US SS MM SM UM fig2a fig2b)"},
    KeySpec{"R", KeyType::Number, "end-mirror radius of curvature (m)"},
    KeySpec{"r", KeyType::Number, "central-element radius of curvature (m)"},
    KeySpec{"l_left", KeyType::Number, "left sub-cavity length, vertex to vertex (m)"},
    KeySpec{"l_right", KeyType::Number, "right sub-cavity length, vertex to vertex (m)"},
    KeySpec{"a", KeyType::Number, "central-element half-aperture (m)"},
    KeySpec{"b", KeyType::Number, "end-mirror half-aperture (m)"},
    KeySpec{"cap", KeyType::Integer, "bounce cap per trace"},
    KeySpec{"y_min", KeyType::Number, "escape scan lower bound (m, default -b)"},
    KeySpec{"y_max", KeyType::Number, "escape scan upper bound (m, default +b)"},
    KeySpec{"n_samples", KeyType::Integer, "escape scan grid size"},
    KeySpec{"angle0", KeyType::Number, "launch direction from +z (rad)"},
    KeySpec{"y0", KeyType::Number, "launch height on the left mirror (m)"},
    KeySpec{"n_points", KeyType::Integer, "surface-of-section points to collect"},
    KeySpec{"n_orbits", KeyType::Integer, "orbits averaged for lambda1"},
    KeySpec{"bounces_per_orbit", KeyType::Integer, "bounces accumulated per orbit"},
    KeySpec{"transient", KeyType::Integer, "bounces discarded before accumulating"},
    KeySpec{"method", KeyType::String, "tangent method: exact-tangent or shadow"},
    KeySpec{"exclude_regular", KeyType::Boolean, "drop regular (island) orbits from the average"},
    KeySpec{"depth", KeyType::Integer, "repeller search refinement depth"},
    KeySpec{"refine_factor", KeyType::Integer, "resolution gain per refinement level"},
    KeySpec{"seed_samples", KeyType::Integer, "repeller search seed grid size"},
    KeySpec{"workers", KeyType::Integer, "worker threads (0 = all cores)"},
    KeySpec{"output", KeyType::String, "output CSV path"},
};

struct Preset {
    std::string_view name;
    CavityConfig cavity;
};

constexpr double kA = 0.003;
constexpr double kB = 0.025;

constexpr std::array kPresets = {
    Preset{"UU", {1.0, 0.25, 0.04, 0.04, kA, kB}},
    Preset{"US", {1.0, 0.90, 0.05, 0.30, kA, kB}},
    Preset{"SS", {1.0, 0.90, 0.45, 0.45, kA, kB}},
    Preset{"MM", {1.0, 0.80, 0.20, 0.20, kA, kB}},
    Preset{"SM", {1.0, 0.80, 0.40, 0.20, kA, kB}},
    Preset{"UM", {1.0, 0.80, 0.01, 0.20, kA, kB}},
    Preset{"fig2a", {1.0, 0.25, 0.04, 0.04, kA, kB}},
    Preset{"fig2b", {1.0, 0.90, 0.45, 0.45, kA, kB}},
};

constexpr std::array<std::string_view, kPresets.size()> kPresetNames = [] {
    std::array<std::string_view, kPresets.size()> names{};
    for (std::size_t i = 0; i < kPresets.size(); ++i) {
        names[i] = kPresets[i].name;
    }
    return names;
}();

const KeySpec *find_key(std::string_view name)
{
    for (const KeySpec &k : kKeys) {
        if (k.name == name) {
            return &k;
        }
    }
    return nullptr;
}

[[noreturn]] void bad_value(const std::string &key, const std::string &why)
{
    throw ConfigError(key, "invalid value for '" + key + "': " + why);
}

double as_number(const std::string &key, const nlohmann::json &v)
{
    if (!v.is_number()) {
        bad_value(key, "expected a number");
    }
    return v.get<double>();
}

std::int64_t as_integer(const std::string &key, const nlohmann::json &v)
{
    if (v.is_number_integer()) {
        return v.get<std::int64_t>();
    }
    // Accept integral floating values such as 6e4.
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::trunc(d) && std::abs(d) < 9.0e15) {
            return static_cast<std::int64_t>(d);
        }
    }
    bad_value(key, "expected an integer");
}

std::string as_string(const std::string &key, const nlohmann::json &v)
{
    if (!v.is_string()) {
        bad_value(key, "expected a string");
    }
    return v.get<std::string>();
}

void apply_preset(RunConfig &cfg, const std::string &name)
{
    const std::optional<CavityConfig> cavity = preset(name);
    if (!cavity) {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    cfg.cavity = *cavity;
    cfg.label = name;
}

void apply_key(RunConfig &cfg, const std::string &key, const nlohmann::json &v)
{
    if (key == "preset") {
        apply_preset(cfg, as_string(key, v));
    } else if (key == "R") {
        cfg.cavity.R = as_number(key, v);
    } else if (key == "r") {
        cfg.cavity.r = as_number(key, v);
    } else if (key == "l_left") {
        cfg.cavity.l_left = as_number(key, v);
    } else if (key == "l_right") {
        cfg.cavity.l_right = as_number(key, v);
    } else if (key == "a") {
        cfg.cavity.a = as_number(key, v);
    } else if (key == "b") {
        cfg.cavity.b = as_number(key, v);
    } else if (key == "cap") {
        cfg.cap = as_integer(key, v);
    } else if (key == "y_min") {
        cfg.y_min = as_number(key, v);
    } else if (key == "y_max") {
        cfg.y_max = as_number(key, v);
    } else if (key == "n_samples") {
        cfg.n_samples = as_integer(key, v);
    } else if (key == "angle0") {
        cfg.angle0 = as_number(key, v);
    } else if (key == "y0") {
        cfg.y0 = as_number(key, v);
    } else if (key == "n_points") {
        cfg.n_points = as_integer(key, v);
    } else if (key == "n_orbits") {
        cfg.n_orbits = as_integer(key, v);
    } else if (key == "bounces_per_orbit") {
        cfg.bounces_per_orbit = as_integer(key, v);
    } else if (key == "transient") {
        cfg.transient = as_integer(key, v);
    } else if (key == "method") {
        const std::string s = as_string(key, v);
        const std::optional<TangentMethod> m = parse_tangent_method(s);
        if (!m) {
            bad_value(key, "expected exact-tangent or shadow");
        }
        cfg.method = *m;
    } else if (key == "exclude_regular") {
        if (!v.is_boolean()) {
            bad_value(key, "expected true or false");
        }
        cfg.exclude_regular = v.get<bool>();
    } else if (key == "depth") {
        cfg.depth = as_integer(key, v);
    } else if (key == "refine_factor") {
        cfg.refine_factor = as_integer(key, v);
    } else if (key == "seed_samples") {
        cfg.seed_samples = as_integer(key, v);
    } else if (key == "workers") {
        cfg.workers = as_integer(key, v);
    } else if (key == "output") {
        cfg.output = as_string(key, v);
    } else {
        throw ConfigError(key, "unknown key '" + key + "'");
    }
}

nlohmann::json flag_to_json(const KeySpec &spec, const std::string &text)
{
    const std::string key(spec.name);
    if (spec.type == KeyType::String) {
        return text;
    }
    if (spec.type == KeyType::Boolean) {
        if (text == "true" || text == "1") {
            return true;
        }
        if (text == "false" || text == "0") {
            return false;
        }
        bad_value(key, "'" + text + "' is not true or false");
    }
    double value = 0.0;
    const char *first = text.data();
    const char *last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        bad_value(key, "'" + text + "' is not a number");
    }
    if (spec.type == KeyType::Integer) {
        return as_integer(key, nlohmann::json(value));
    }
    return value;
}

void require(bool ok, const char *key, const char *invariant)
{
    if (!ok) {
        throw ConfigError(key, std::string(invariant) + " violated");
    }
}

} // namespace

std::span<const KeySpec> config_keys() { return kKeys; }

std::string flag_name(std::string_view key)
{
    std::string out(key);
    for (char &c : out) {
        if (c == '_') {
            c = '-';
        }
    }
    return out;
}

std::optional<CavityConfig> preset(std::string_view name)
{
    for (const Preset &p : kPresets) {
        if (p.name == name) {
            return p.cavity;
        }
    }
    return std::nullopt;
}

std::span<const std::string_view> preset_names() { return kPresetNames; }

ScanParams RunConfig::scan_params() const
{
    ScanParams p;
    p.y_min = scan_y_min();
    p.y_max = scan_y_max();
    p.n_samples = static_cast<std::size_t>(n_samples);
    p.angle0 = angle0;
    p.cap = cap;
    return p;
}

LyapunovParams RunConfig::lyapunov_params() const
{
    LyapunovParams p;
    p.bounces = bounces_per_orbit;
    p.transient = transient;
    p.max_orbits = static_cast<std::size_t>(n_orbits);
    p.method = method;
    p.exclude_regular = exclude_regular;
    return p;
}

void RunConfig::validate() const
{
    cavity.validate();
    const double b = cavity.b;
    require(cap >= 1, "cap", "cap >= 1");
    require(n_samples >= 2, "n_samples", "n_samples >= 2");
    require(scan_y_min() >= -b, "y_min", "y_min >= -b");
    require(scan_y_max() <= b, "y_max", "y_max <= b");
    require(scan_y_min() <= scan_y_max(), "y_max", "y_min <= y_max");
    require(std::abs(angle0) < std::numbers::pi / 2, "angle0", "|angle0| < pi/2");
    require(std::abs(y0) <= b, "y0", "|y0| <= b");
    require(n_points >= 1, "n_points", "n_points >= 1");
    require(n_orbits >= 1, "n_orbits", "n_orbits >= 1");
    require(bounces_per_orbit >= 1000, "bounces_per_orbit", "bounces_per_orbit >= 1000");
    require(transient >= 0, "transient", "transient >= 0");
    require(depth >= 1, "depth", "depth >= 1");
    require(refine_factor >= 2, "refine_factor", "refine_factor >= 2");
    require(seed_samples >= 2, "seed_samples", "seed_samples >= 2");
    require(workers >= 0, "workers", "workers >= 0");
}

nlohmann::ordered_json to_json(const RunConfig &cfg)
{
    nlohmann::ordered_json j;
    j["preset"] = cfg.label;
    j["R"] = cfg.cavity.R;
    j["r"] = cfg.cavity.r;
    j["l_left"] = cfg.cavity.l_left;
    j["l_right"] = cfg.cavity.l_right;
    j["a"] = cfg.cavity.a;
    j["b"] = cfg.cavity.b;
    j["cap"] = cfg.cap;
    j["y_min"] = cfg.scan_y_min();
    j["y_max"] = cfg.scan_y_max();
    j["n_samples"] = cfg.n_samples;
    j["angle0"] = cfg.angle0;
    j["y0"] = cfg.y0;
    j["n_points"] = cfg.n_points;
    j["n_orbits"] = cfg.n_orbits;
    j["bounces_per_orbit"] = cfg.bounces_per_orbit;
    j["transient"] = cfg.transient;
    j["method"] = std::string(to_string(cfg.method));
    j["exclude_regular"] = cfg.exclude_regular;
    j["depth"] = cfg.depth;
    j["refine_factor"] = cfg.refine_factor;
    j["seed_samples"] = cfg.seed_samples;
    j["workers"] = cfg.workers;
    j["output"] = cfg.output;
    if (cfg.label.empty()) {
        j.erase("preset");
    }
    return j;
}

nlohmann::json load_config_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open config file '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config", "malformed config file '" + path.string() + "': " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config", "config file must hold a flat JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (value.is_object() || value.is_array()) {
            throw ConfigError(key, "config key '" + key + "' must be a scalar");
        }
    }
    return j;
}

RunConfig resolve_config(const nlohmann::json *file, std::string_view preset_flag,
                         const std::map<std::string, std::string> &flags)
{
    RunConfig cfg;

    if (file != nullptr) {
        if (const auto it = file->find("preset"); it != file->end()) {
            apply_key(cfg, "preset", *it);
        }
        for (const auto &[key, value] : file->items()) {
            if (key != "preset") {
                apply_key(cfg, key, value);
            }
        }
    }
    if (!preset_flag.empty()) {
        apply_preset(cfg, std::string(preset_flag));
    }
    for (const auto &[key, text] : flags) {
        const KeySpec *spec = find_key(key);
        if (spec == nullptr) {
            throw ConfigError(key, "unknown key '" + key + "'");
        }
        apply_key(cfg, key, flag_to_json(*spec, text));
    }

    cfg.validate();
    return cfg;
}

} // namespace raychaos::cli

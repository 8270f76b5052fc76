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

#include "raychaos/errors.hpp"
#include "raychaos/parallel.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace raychaos::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string optional_number(const std::optional<double> &v)
{
    return v ? format_number(*v) : std::string();
}

void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

} // namespace

std::string_view to_string(Subcommand cmd)
{
    switch (cmd) {
    case Subcommand::Stability:
        return "stability";
    case Subcommand::Trace:
        return "trace";
    case Subcommand::Sos:
        return "sos";
    case Subcommand::Lyapunov:
        return "lyapunov";
    case Subcommand::Escape:
        return "escape";
    }
    return "?";
}

std::optional<Subcommand> parse_subcommand(std::string_view name)
{
    for (Subcommand c : {Subcommand::Stability, Subcommand::Trace, Subcommand::Sos,
                         Subcommand::Lyapunov, Subcommand::Escape}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

std::string default_output(Subcommand cmd)
{
    if (cmd == Subcommand::Lyapunov) {
        return "lyap.csv";
    }
    return std::string(to_string(cmd)) + ".csv";
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

void write_stability_csv(std::ostream &os, const ParaxialReport &report)
{
    os << "config_label,m_left,m_right,M_left,M_right,lambda0_left,lambda0_right\n";
    os << report.label() << ',' << format_number(report.left.m) << ','
       << format_number(report.right.m) << ',' << optional_number(report.left.magnification)
       << ',' << optional_number(report.right.magnification) << ','
       << optional_number(report.left.lambda0) << ',' << optional_number(report.right.lambda0)
       << '\n';
}

void write_trace_csv(std::ostream &os, const TraceResult &result)
{
    os << "event_index,t,z,y,vz,vy,surface_id\n";
    std::size_t i = 0;
    for (const BounceEvent &ev : result.events) {
        os << ++i << ',' << format_number(ev.t) << ',' << format_number(ev.point.z) << ','
           << format_number(ev.point.y) << ',' << format_number(ev.v_out.z) << ','
           << format_number(ev.v_out.y) << ',' << static_cast<int>(ev.surface) << '\n';
    }
}

void write_sos_csv(std::ostream &os, const std::vector<SosPoint> &points)
{
    os << "bounce_index,y,vy\n";
    for (const SosPoint &p : points) {
        os << p.bounce_index << ',' << format_number(p.y) << ',' << format_number(p.vy) << '\n';
    }
}

void write_escape_csv(std::ostream &os, const std::vector<EscapeRecord> &records)
{
    os << "y0,angle0,n_bounces,escape_time_s,capped\n";
    for (const EscapeRecord &r : records) {
        os << format_number(r.y0) << ',' << format_number(r.angle0) << ',' << r.n_bounces << ','
           << format_number(r.escape_time) << ',' << (r.capped ? 1 : 0) << '\n';
    }
}

void write_lyap_csv(std::ostream &os, std::string_view label, const LyapunovEstimate &est)
{
    os << "label,lambda1,stderr,exponent_sum,n_orbits,bounces\n";
    os << label << ',' << format_number(est.lambda1) << ',' << format_number(est.stderr_) << ','
       << format_number(est.exponent_sum) << ',' << est.n_orbits << ','
       << est.bounces_per_orbit << '\n';
}

nlohmann::ordered_json to_json(const RunMetadata &meta)
{
    nlohmann::ordered_json j;
    j["tool"] = "raychaos";
    j["version"] = std::string(kToolVersion);
    j["subcommand"] = meta.subcommand;
    j["output"] = meta.output;
    j["workers"] = meta.workers;
    j["wall_clock_s"] = meta.wall_clock_s;
    j["config"] = meta.config;
    j["warnings"] = meta.warnings;
    return j;
}

std::string metadata_path(const std::string &output) { return output + ".meta.json"; }

RunOutcome run_subcommand(Subcommand cmd, const RunConfig &cfg, std::ostream &log,
                          std::ostream &err)
{
    RunOutcome outcome;
    outcome.output = cfg.output.empty() ? default_output(cmd) : cfg.output;

    const auto started = std::chrono::steady_clock::now();
    const unsigned workers = resolve_workers(static_cast<unsigned>(cfg.workers));
    std::vector<std::string> warnings;
    std::ostringstream csv;

    try {
        const CavityGeometry geom = build_cavity(cfg.cavity);
        const std::string label = cfg.label.empty() ? classify(cfg.cavity).label() : cfg.label;

        switch (cmd) {
        case Subcommand::Stability: {
            const ParaxialReport report = classify(cfg.cavity);
            write_stability_csv(csv, report);
            log << "label " << report.label() << "  m_left " << format_number(report.left.m)
                << "  m_right " << format_number(report.right.m) << '\n';
            break;
        }
        case Subcommand::Trace: {
            const TraceResult res =
                trace(launch_from_left_mirror(geom, cfg.y0, cfg.angle0), geom, cfg.cap);
            write_trace_csv(csv, res);
            log << res.events.size() << " bounces, "
                << (res.escaped() ? "escaped" : "bounce cap reached") << '\n';
            break;
        }
        case Subcommand::Sos: {
            const std::vector<SosPoint> pts = sos_collect(
                geom, cfg.y0, cfg.angle0, static_cast<std::size_t>(cfg.n_points));
            write_sos_csv(csv, pts);
            log << pts.size() << " section points\n";
            break;
        }
        case Subcommand::Escape: {
            const std::vector<EscapeRecord> recs =
                escape_scan(geom, cfg.scan_params(), workers);
            write_escape_csv(csv, recs);
            std::size_t capped = 0;
            for (const EscapeRecord &r : recs) {
                capped += r.capped ? 1 : 0;
            }
            log << recs.size() << " samples, " << capped << " capped\n";
            break;
        }
        case Subcommand::Lyapunov: {
            ScanParams seed;
            seed.y_min = cfg.scan_y_min();
            seed.y_max = cfg.scan_y_max();
            seed.n_samples = static_cast<std::size_t>(cfg.seed_samples);
            seed.angle0 = cfg.angle0;
            seed.cap = cfg.transient + cfg.bounces_per_orbit;
            RefineParams refine;
            refine.depth = static_cast<std::size_t>(cfg.depth);
            refine.factor = static_cast<std::size_t>(cfg.refine_factor);

            const RepellerSample sample = find_long_lived(geom, seed, refine, workers);
            if (sample.empty()) {
                throw NumericalError("no long-lived orbit found in the seed scan");
            }
            const LyapunovEstimate est =
                lyapunov_estimate(geom, sample, cfg.lyapunov_params(), workers);
            warnings = est.warnings;
            write_lyap_csv(csv, label, est);
            log << label << "  lambda1 " << format_number(est.lambda1) << " +- "
                << format_number(est.stderr_) << "  sum " << format_number(est.exponent_sum)
                << "  (" << est.n_orbits << " orbits)\n";
            break;
        }
        }

        for (const std::string &w : warnings) {
            err << "warning: " << w << '\n';
        }

        write_file(outcome.output, csv.str());

        RunMetadata meta;
        meta.subcommand = std::string(to_string(cmd));
        meta.config = to_json(cfg);
        meta.workers = workers;
        meta.output = outcome.output;
        meta.warnings = warnings;
        meta.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_file(metadata_path(outcome.output), to_json(meta).dump(2) + "\n");
    } catch (const ConfigError &e) {
        outcome.exit_code = kExitConfig;
        outcome.message = e.what();
    } catch (const IoError &e) {
        outcome.exit_code = kExitIo;
        outcome.message = e.what();
    } catch (const NumericalError &e) {
        outcome.exit_code = kExitNumerical;
        outcome.message = e.what();
    } catch (const DomainError &e) {
        outcome.exit_code = kExitNumerical;
        outcome.message = e.what();
    }

    if (outcome.exit_code != kExitOk) {
        err << "error: " << outcome.message << '\n';
    }
    return outcome;
}

} // namespace raychaos::cli

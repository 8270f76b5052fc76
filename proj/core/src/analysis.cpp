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

#include "raychaos/analysis.hpp"

#include "raychaos/errors.hpp"
#include "raychaos/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace raychaos {

// -- Surface of section -------------------------------------------------

std::vector<SosPoint> sos_collect(const CavityGeometry &geom, double y0, double angle0,
                                  std::size_t n_points, std::int64_t max_bounces)
{
    std::vector<SosPoint> points;
    if (n_points == 0) {
        return points;
    }
    if (max_bounces <= 0) {
        max_bounces = std::max<std::int64_t>(1'000'000, 1000 * static_cast<std::int64_t>(n_points));
    }
    points.reserve(n_points);

    const RayState start = launch_from_left_mirror(geom, y0, angle0);
    trace_visit(start, geom, max_bounces, [&](const RayState &before, const BounceEvent &ev) {
        if (ev.surface == SurfaceId::LeftConcave) {
            points.push_back({before.bounces + 1, ev.point.y, ev.v_out.y});
        }
        return points.size() < n_points;
    });
    return points;
}

BirkhoffPoint to_birkhoff(const CavityGeometry &geom, const RayState &at_left_mirror)
{
    const double R = geom.arc(SurfaceId::LeftConcave).radius;
    const Vec2 p = at_left_mirror.pos;
    const double phi = std::atan2(p.y, R - p.z);
    const Vec2 tangent{std::sin(phi), std::cos(phi)};
    return {R * phi, dot(at_left_mirror.vel, tangent)};
}

RayState from_birkhoff(const CavityGeometry &geom, BirkhoffPoint bp)
{
    const double R = geom.arc(SurfaceId::LeftConcave).radius;
    const double phi = bp.s / R;
    const double half = std::sin(0.5 * phi);
    const Vec2 tangent{std::sin(phi), std::cos(phi)};
    const Vec2 normal{std::cos(phi), -std::sin(phi)};

    RayState s;
    s.pos = {2.0 * R * half * half, R * std::sin(phi)};
    s.vel = bp.p * tangent + std::sqrt((1.0 - bp.p) * (1.0 + bp.p)) * normal;
    return s;
}

std::optional<BirkhoffPoint> left_mirror_return(const CavityGeometry &geom, BirkhoffPoint from,
                                                std::int64_t max_bounces)
{
    std::optional<RayState> hit;
    trace_visit(from_birkhoff(geom, from), geom, max_bounces,
                [&](const RayState &before, const BounceEvent &ev) {
                    if (ev.surface != SurfaceId::LeftConcave) {
                        return true;
                    }
                    RayState after;
                    after.pos = ev.point;
                    after.vel = ev.v_out;
                    after.t = ev.t;
                    after.bounces = before.bounces + 1;
                    hit = after;
                    return false;
                });
    if (!hit) {
        return std::nullopt;
    }
    return to_birkhoff(geom, *hit);
}

namespace {

/// Runs fn, prefixing any NumericalError with the initial condition.
template <class Fn>
auto echo_initial_condition(double y0, double angle0, Fn &&fn)
{
    try {
        return fn();
    } catch (const NumericalError &e) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "initial condition y0=" << y0 << " angle0=" << angle0 << ": " << e.what();
        throw NumericalError(msg.str());
    }
}

} // namespace

// -- Escape-time function -----------------------------------------------

double grid_point(double lo, double hi, std::size_t i, std::size_t n)
{
    if (i == 0) {
        return lo;
    }
    if (i + 1 == n) {
        return hi;
    }
    const auto last = static_cast<double>(n - 1);
    return (lo * static_cast<double>(n - 1 - i) + hi * static_cast<double>(i)) / last;
}

EscapeRecord escape_one(const CavityGeometry &geom, double y0, double angle0, std::int64_t cap)
{
    const RayState start = launch_from_left_mirror(geom, y0, angle0);
    const TraceSummary sum = echo_initial_condition(y0, angle0, [&] {
        return trace_visit(start, geom, cap,
                           [](const RayState &, const BounceEvent &) { return true; });
    });

    EscapeRecord rec;
    rec.y0 = y0;
    rec.angle0 = angle0;
    rec.n_bounces = sum.final_state.bounces;
    rec.escape_time = sum.last_bounce_time;
    rec.capped = !sum.escaped;
    return rec;
}

std::vector<EscapeRecord> escape_scan(const CavityGeometry &geom, const ScanParams &params,
                                      unsigned workers)
{
    const double b = geom.config.b;
    if (params.n_samples < 2) {
        throw ConfigError("n_samples", "n_samples >= 2 violated");
    }
    if (!(params.y_min >= -b && params.y_max <= b && params.y_min <= params.y_max)) {
        throw ConfigError("y_min", "-b <= y_min <= y_max <= b violated");
    }
    if (params.cap < 1) {
        throw ConfigError("cap", "cap >= 1 violated");
    }

    std::vector<EscapeRecord> out(params.n_samples);
    parallel_for(params.n_samples, workers, [&](std::size_t i) {
        const double y0 = grid_point(params.y_min, params.y_max, i, params.n_samples);
        out[i] = escape_one(geom, y0, params.angle0, params.cap);
    });
    return out;
}

// -- Repeller search ----------------------------------------------------

namespace {

/// Indices of local maxima of escape time in a y-ordered record list,
/// highest first (ties broken by index).
std::vector<std::size_t> local_maxima(const std::vector<EscapeRecord> &recs)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const double t = recs[i].escape_time;
        const bool left_ok = i == 0 || t >= recs[i - 1].escape_time;
        const bool right_ok = i + 1 == recs.size() || t >= recs[i + 1].escape_time;
        if (left_ok && right_ok) {
            idx.push_back(i);
        }
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return recs[x].escape_time > recs[y].escape_time;
    });
    return idx;
}

bool by_y(const EscapeRecord &x, const EscapeRecord &y) { return x.y0 < y.y0; }
bool same_y(const EscapeRecord &x, const EscapeRecord &y) { return x.y0 == y.y0; }

} // namespace

RepellerSample find_long_lived(const CavityGeometry &geom, const ScanParams &seed,
                               const RefineParams &refine, unsigned workers)
{
    if (refine.depth < 1) {
        throw ConfigError("depth", "depth >= 1 violated");
    }
    if (refine.factor < 2) {
        throw ConfigError("factor", "refinement factor >= 2 violated");
    }

    std::vector<EscapeRecord> level = escape_scan(geom, seed, workers);
    std::vector<EscapeRecord> found;
    double spacing = (seed.y_max - seed.y_min) / static_cast<double>(seed.n_samples - 1);

    auto harvest = [&](const std::vector<EscapeRecord> &recs) {
        for (const EscapeRecord &r : recs) {
            if (r.capped) {
                found.push_back(r);
            }
        }
    };
    harvest(level);

    for (std::size_t d = 1; d < refine.depth && spacing > 0.0; ++d) {
        const std::vector<std::size_t> peaks = local_maxima(level);
        const std::size_t n_windows = std::min(peaks.size(), refine.windows_per_level);

        std::vector<EscapeRecord> next;
        for (std::size_t w = 0; w < n_windows; ++w) {
            const double centre = level[peaks[w]].y0;
            ScanParams sub = seed;
            sub.y_min = std::max(seed.y_min, centre - spacing);
            sub.y_max = std::min(seed.y_max, centre + spacing);
            sub.n_samples = 2 * refine.factor + 1;
            if (!(sub.y_max > sub.y_min)) {
                continue;
            }
            const std::vector<EscapeRecord> recs = escape_scan(geom, sub, workers);
            next.insert(next.end(), recs.begin(), recs.end());
        }
        std::stable_sort(next.begin(), next.end(), by_y);
        next.erase(std::unique(next.begin(), next.end(), same_y), next.end());
        harvest(next);
        level = std::move(next);
        spacing /= static_cast<double>(refine.factor);
    }

    std::stable_sort(found.begin(), found.end(), by_y);
    found.erase(std::unique(found.begin(), found.end(), same_y), found.end());

    RepellerSample sample;
    sample.refinement_depth = refine.depth;
    sample.cap = seed.cap;
    for (const EscapeRecord &r : found) {
        sample.members.push_back({r.y0, r.angle0});
        sample.survival_times.push_back(r.escape_time);
    }
    return sample;
}

// -- Lyapunov exponents -------------------------------------------------

std::string_view to_string(TangentMethod m)
{
    return m == TangentMethod::ExactTangent ? "exact-tangent" : "shadow";
}

std::optional<TangentMethod> parse_tangent_method(std::string_view s)
{
    if (s == "exact-tangent" || s == "exact") {
        return TangentMethod::ExactTangent;
    }
    if (s == "shadow") {
        return TangentMethod::Shadow;
    }
    return std::nullopt;
}

namespace {

using Basis = std::array<TangentVector, 4>;

/// Fixed, generic orthonormal starting frame (no vector aligned with the
/// neutral flow or energy directions of any particular orbit).
Basis initial_basis()
{
    const double raw[4][4] = {
        {0.11, 0.93, 0.07, 0.35},
        {0.52, -0.21, 0.66, 0.13},
        {-0.38, 0.17, 0.29, 0.81},
        {0.74, 0.05, -0.58, 0.31},
    };
    Basis basis;
    for (std::size_t i = 0; i < 4; ++i) {
        basis[i] = {{raw[i][0], raw[i][1]}, {raw[i][2], raw[i][3]}};
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            basis[i] = basis[i] - dot(basis[j], basis[i]) * basis[j];
        }
        basis[i] = (1.0 / basis[i].norm()) * basis[i];
    }
    return basis;
}

/// Reorders items so that every prefix is spread over the whole list
/// (radical-inverse order of positions).
template <class T>
std::vector<T> spread_order(const std::vector<T> &items)
{
    const std::size_t n = items.size();
    std::vector<T> out;
    out.reserve(n);
    std::vector<bool> used(n, false);
    for (std::uint64_t k = 0; out.size() < n; ++k) {
        double inv = 0.0;
        double scale = 0.5;
        for (std::uint64_t bits = k; bits != 0; bits >>= 1, scale *= 0.5) {
            inv += (bits & 1U) != 0 ? scale : 0.0;
        }
        const auto idx = static_cast<std::size_t>(inv * static_cast<double>(n));
        if (!used[idx]) {
            used[idx] = true;
            out.push_back(items[idx]);
        }
    }
    return out;
}

/// Modified Gram-Schmidt in place; returns the diagonal of R.
std::array<double, 4> orthonormalize(Basis &v)
{
    std::array<double, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            v[i] = v[i] - dot(v[j], v[i]) * v[j];
        }
        r[i] = v[i].norm();
        v[i] = (1.0 / r[i]) * v[i];
    }
    return r;
}

} // namespace

std::optional<OrbitLyapunov> orbit_lyapunov(const CavityGeometry &geom, InitialCondition ic,
                                            const LyapunovParams &params)
{
    RayState state = launch_from_left_mirror(geom, ic.y0, ic.angle0);
    Basis basis = initial_basis();

    std::vector<ShadowTangent> shadows;
    if (params.method == TangentMethod::Shadow) {
        for (const TangentVector &e : basis) {
            shadows.emplace_back(geom, state, e, params.shadow_separation);
        }
    }

    std::array<double, 4> log_growth{};
    double first_half = 0.0;
    double t_start = state.t;
    const std::int64_t total = params.transient + params.bounces;
    const std::int64_t midpoint = params.transient + params.bounces / 2;

    for (std::int64_t k = 0; k < total; ++k) {
        const StepResult next = step(state, geom);
        if (!next.event) {
            return std::nullopt;
        }
        Basis images;
        for (std::size_t i = 0; i < 4; ++i) {
            images[i] = params.method == TangentMethod::Shadow
                            ? shadows[i].advance(state, *next.event)
                            : tangent_step(state, basis[i], *next.event);
        }
        const std::array<double, 4> r = orthonormalize(images);
        basis = images;
        state = next.state;

        for (std::size_t i = 0; i < shadows.size(); ++i) {
            shadows[i].rebase(state, basis[i]);
        }
        if (k + 1 == params.transient) {
            t_start = state.t;
        } else if (k + 1 > params.transient) {
            for (std::size_t i = 0; i < 4; ++i) {
                log_growth[i] += std::log(r[i]);
            }
        }
        if (k + 1 == midpoint) {
            first_half = log_growth[0];
        }
    }

    OrbitLyapunov out;
    out.ic = ic;
    out.flow_time = state.t - t_start;
    out.growth_ratio = first_half > 0.0 ? (log_growth[0] - first_half) / first_half : 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        out.spectrum[i] = log_growth[i] / out.flow_time;
    }
    std::sort(out.spectrum.begin(), out.spectrum.end(), std::greater<>());
    return out;
}

LyapunovEstimate lyapunov_estimate(const CavityGeometry &geom, const RepellerSample &sample,
                                   const LyapunovParams &params, unsigned workers)
{
    if (sample.empty()) {
        throw DomainError("empty repeller sample");
    }
    if (params.bounces < 1000) {
        throw ConfigError("bounces_per_orbit", "bounces >= 1000 violated");
    }
    if (params.transient < 0 || params.max_orbits < 1) {
        throw ConfigError("n_orbits", "n_orbits >= 1 violated");
    }

    // Fold mirror images onto y0 >= 0.
    std::vector<InitialCondition> canon;
    canon.reserve(sample.size());
    for (InitialCondition ic : sample.members) {
        if (ic.y0 < 0.0 || (ic.y0 == 0.0 && ic.angle0 < 0.0)) {
            ic = {-ic.y0, -ic.angle0};
        }
        ic.angle0 += 0.0;  // no negative zero
        canon.push_back(ic);
    }
    std::sort(canon.begin(), canon.end(), [](const InitialCondition &x, const InitialCondition &y) {
        return x.y0 != y.y0 ? x.y0 < y.y0 : x.angle0 < y.angle0;
    });
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    const std::vector<InitialCondition> candidates = spread_order(canon);
    const std::size_t wanted = std::min(params.max_orbits, candidates.size());

    LyapunovEstimate est;
    est.bounces_per_orbit = params.bounces;

    // Batches of `wanted` candidates keep the choice independent of the
    // worker count: acceptance is decided in candidate order.
    std::size_t next = 0;
    while (est.orbits.size() < wanted && next < candidates.size()) {
        const std::size_t batch = std::min(wanted, candidates.size() - next);
        std::vector<std::optional<OrbitLyapunov>> results(batch);
        parallel_for(batch, workers, [&](std::size_t i) {
            const InitialCondition ic = candidates[next + i];
            results[i] = echo_initial_condition(
                ic.y0, ic.angle0, [&] { return orbit_lyapunov(geom, ic, params); });
        });

        for (std::size_t i = 0; i < batch && est.orbits.size() < wanted; ++i) {
            const InitialCondition ic = candidates[next + i];
            std::ostringstream msg;
            msg.precision(17);
            msg << "orbit y0=" << ic.y0 << " angle0=" << ic.angle0;
            if (!results[i]) {
                msg << " escaped before " << params.transient + params.bounces
                    << " bounces; dropped";
                est.warnings.push_back(msg.str());
            } else if (params.exclude_regular && results[i]->regular()) {
                msg << " is regular (growth ratio " << results[i]->growth_ratio << "); dropped";
                est.warnings.push_back(msg.str());
            } else {
                est.orbits.push_back(*results[i]);
            }
        }
        next += batch;
    }
    if (est.orbits.empty()) {
        throw DomainError("no orbit of the sample qualified for averaging");
    }

    est.n_orbits = est.orbits.size();
    const auto count = static_cast<double>(est.n_orbits);
    double sum = 0.0;
    double exp_sum = 0.0;
    for (const OrbitLyapunov &o : est.orbits) {
        sum += o.lambda1();
        exp_sum += o.sum();
    }
    est.lambda1 = sum / count;
    est.exponent_sum = exp_sum / count;

    if (est.n_orbits > 1) {
        double ss = 0.0;
        for (const OrbitLyapunov &o : est.orbits) {
            ss += (o.lambda1() - est.lambda1) * (o.lambda1() - est.lambda1);
        }
        est.stderr_ = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
    return est;
}

double axial_orbit_rate(const CavityGeometry &geom, Side side, std::int64_t bounces,
                        std::int64_t transient)
{
    RayState state;
    if (side == Side::Left) {
        state.pos = geom.arc(SurfaceId::LeftConcave).vertex;
        state.vel = {1.0, 0.0};
    } else {
        state.pos = geom.arc(SurfaceId::RightConcave).vertex;
        state.vel = {-1.0, 0.0};
    }

    TangentVector tv{{0.0, 1.0}, {0.0, 0.0}};
    double log_growth = 0.0;
    double t_start = state.t;
    for (std::int64_t k = 0; k < transient + bounces; ++k) {
        const StepResult next = step(state, geom);
        if (!next.event) {
            throw NumericalError("axial orbit escaped");
        }
        const TangentVector image = tangent_step(state, tv, *next.event);
        const double growth = image.norm();
        tv = (1.0 / growth) * image;
        state = next.state;
        if (k + 1 == transient) {
            t_start = state.t;
        } else if (k + 1 > transient) {
            log_growth += std::log(growth);
        }
    }
    return log_growth / (state.t - t_start);
}

bool pairs_check(const LyapunovEstimate &estimate, double tol)
{
    if (estimate.n_orbits == 0) {
        throw DomainError("no data");
    }
    return std::abs(estimate.exponent_sum) <= tol;
}

bool pairs_check(const LyapunovEstimate &estimate)
{
    return pairs_check(estimate, kDefaultPairsFraction * estimate.lambda1);
}

// -- Survival -----------------------------------------------------------

std::vector<SurvivalPoint> survival_curve(const std::vector<EscapeRecord> &records)
{
    if (records.empty()) {
        throw DomainError("survival curve of an empty record set");
    }
    const auto total = static_cast<double>(records.size());

    std::vector<double> escapes;
    double capped_extent = 0.0;
    for (const EscapeRecord &r : records) {
        if (r.capped) {
            capped_extent = std::max(capped_extent, r.escape_time);
        } else {
            escapes.push_back(r.escape_time);
        }
    }
    std::sort(escapes.begin(), escapes.end());

    std::vector<SurvivalPoint> curve{{0.0, 1.0}};
    std::size_t gone = 0;
    while (gone < escapes.size()) {
        const double t = escapes[gone];
        while (gone < escapes.size() && escapes[gone] == t) {
            ++gone;
        }
        curve.push_back({t, (total - static_cast<double>(gone)) / total});
    }
    if (capped_extent > curve.back().t) {
        curve.push_back({capped_extent, curve.back().fraction});
    }
    return curve;
}

} // namespace raychaos

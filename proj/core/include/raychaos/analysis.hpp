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

#include "raychaos/dynamics.hpp"
#include "raychaos/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace raychaos {

// -- Poincare surface of section -----------------------------------------

/// State just after a reflection at the left concave mirror.
struct SosPoint {
    std::int64_t bounce_index = 0;
    double y = 0.0;
    double vy = 0.0;

    friend bool operator==(const SosPoint &, const SosPoint &) = default;
};

/// Records (y, v_y) after each reflection at the left concave mirror until
/// `n_points` are collected, the ray escapes, or `max_bounces` bounces in
/// total have happened (0 picks a generous default).
std::vector<SosPoint> sos_collect(const CavityGeometry &geom, double y0, double angle0,
                                  std::size_t n_points, std::int64_t max_bounces = 0);

/// Birkhoff coordinates on the left concave mirror: arc length from the
/// vertex (positive toward +y) and tangential velocity component.
struct BirkhoffPoint {
    double s = 0.0;
    double p = 0.0;
};

BirkhoffPoint to_birkhoff(const CavityGeometry &geom, const RayState &at_left_mirror);
RayState from_birkhoff(const CavityGeometry &geom, BirkhoffPoint bp);

/// Next return to the left concave mirror, or nothing if the ray escapes
/// first or `max_bounces` pass without a return.
std::optional<BirkhoffPoint> left_mirror_return(const CavityGeometry &geom, BirkhoffPoint from,
                                                std::int64_t max_bounces = 100000);

// -- Escape-time function -----------------------------------------------

struct EscapeRecord {
    double y0 = 0.0;
    double angle0 = 0.0;
    std::int64_t n_bounces = 0;
    /// Time of the last bounce; for capped rays the time of bounce `cap`.
    double escape_time = 0.0;
    bool capped = false;

    friend bool operator==(const EscapeRecord &, const EscapeRecord &) = default;
};

inline constexpr std::int64_t kDefaultBounceCap = 60000;

struct ScanParams {
    double y_min = -0.025;
    double y_max = 0.025;
    std::size_t n_samples = 1000;
    double angle0 = 0.0;
    std::int64_t cap = kDefaultBounceCap;
};

/// Uniform grid point i of n over [lo, hi], endpoints exact. The formula is
/// symmetric, so a reversed grid produces bit-identical points.
double grid_point(double lo, double hi, std::size_t i, std::size_t n);

EscapeRecord escape_one(const CavityGeometry &geom, double y0, double angle0, std::int64_t cap);

/// One trace per grid sample, results in grid order.
std::vector<EscapeRecord> escape_scan(const CavityGeometry &geom, const ScanParams &params,
                                      unsigned workers = 0);

// -- Repeller search ----------------------------------------------------

struct InitialCondition {
    double y0 = 0.0;
    double angle0 = 0.0;

    friend bool operator==(const InitialCondition &, const InitialCondition &) = default;
};

struct RepellerSample {
    std::vector<InitialCondition> members;
    std::vector<double> survival_times;
    std::size_t refinement_depth = 0;
    std::int64_t cap = 0;

    bool empty() const { return members.empty(); }
    std::size_t size() const { return members.size(); }
};

struct RefineParams {
    std::size_t depth = 3;
    /// Local resolution gain per refinement level.
    std::size_t factor = 10;
    /// Local maxima refined per level.
    std::size_t windows_per_level = 8;
};

/// Seed scan, then repeated zooms around the highest local maxima of the
/// escape time. Returns every initial condition (over all levels) that
/// reached the cap, ordered by y0. Refinement never leaves the seed range.
RepellerSample find_long_lived(const CavityGeometry &geom, const ScanParams &seed,
                               const RefineParams &refine = {}, unsigned workers = 0);

// -- Lyapunov exponents -------------------------------------------------

enum class TangentMethod { ExactTangent, Shadow };

std::string_view to_string(TangentMethod m);
std::optional<TangentMethod> parse_tangent_method(std::string_view s);

/// An orbit counts as regular when the log growth of its leading tangent
/// vector over the second half of the run is below this fraction of the
/// growth over the first half (chaotic orbits give ~1, orbits on invariant
/// curves grow only linearly and give ~ln 2 / ln(T / t0)).
inline constexpr double kRegularGrowthRatio = 0.5;

struct LyapunovParams {
    std::int64_t bounces = 10000;
    std::int64_t transient = 100;
    std::size_t max_orbits = 10;
    TangentMethod method = TangentMethod::ExactTangent;
    double shadow_separation = ShadowTangent::kDefaultSeparation;
    /// Skip orbits classified as regular (KAM islands are non-escaping but
    /// not part of the chaotic repeller).
    bool exclude_regular = true;
};

/// Spectrum of one orbit, sorted in descending order, per unit flow time.
struct OrbitLyapunov {
    InitialCondition ic;
    std::array<double, 4> spectrum{};
    double flow_time = 0.0;
    /// Leading-vector log growth, second half over first half.
    double growth_ratio = 0.0;

    double lambda1() const { return spectrum[0]; }
    double sum() const { return spectrum[0] + spectrum[1] + spectrum[2] + spectrum[3]; }
    bool regular() const { return growth_ratio < kRegularGrowthRatio; }
};

struct LyapunovEstimate {
    double lambda1 = 0.0;
    double stderr_ = 0.0;
    double exponent_sum = 0.0;
    std::size_t n_orbits = 0;
    std::int64_t bounces_per_orbit = 0;
    std::vector<OrbitLyapunov> orbits;
    std::vector<std::string> warnings;
};

/// Four-vector tangent evolution along one orbit with Gram-Schmidt
/// renormalization after every bounce. Returns nothing if the orbit escapes
/// before transient + bounces bounces.
std::optional<OrbitLyapunov> orbit_lyapunov(const CavityGeometry &geom, InitialCondition ic,
                                            const LyapunovParams &params);

/// Mean of per-orbit spectra over up to `max_orbits` members of the sample.
///
/// Mirror images (y0, angle0) ~ (-y0, -angle0) have identical exponents and
/// are folded first. Candidates are then taken in a low-discrepancy order
/// over the sample so that the chosen orbits spread across it. Orbits that
/// escape early (or are regular, when excluded) are dropped with a warning
/// and replaced by the next candidate. Throws DomainError if the sample is
/// empty or no orbit qualifies.
LyapunovEstimate lyapunov_estimate(const CavityGeometry &geom, const RepellerSample &sample,
                                   const LyapunovParams &params, unsigned workers = 0);

/// Largest-exponent growth rate of the tangent map along the axial periodic
/// orbit of one sub-cavity (concave end mirror <-> central element).
enum class Side { Left, Right };
double axial_orbit_rate(const CavityGeometry &geom, Side side, std::int64_t bounces = 10000,
                        std::int64_t transient = 100);

inline constexpr double kDefaultPairsFraction = 0.05;

/// True iff |exponent_sum| <= tol. Throws DomainError("no data") on an
/// estimate with no orbits.
bool pairs_check(const LyapunovEstimate &estimate, double tol);

/// pairs_check with tolerance kDefaultPairsFraction * lambda1.
bool pairs_check(const LyapunovEstimate &estimate);

// -- Survival -----------------------------------------------------------

struct SurvivalPoint {
    double t = 0.0;
    double fraction = 0.0;
};

/// Fraction of records with escape_time > t (capped records always
/// survive), as a step function starting at (0, 1).
std::vector<SurvivalPoint> survival_curve(const std::vector<EscapeRecord> &records);

} // namespace raychaos

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

#include "raychaos/geometry.hpp"

#include "raychaos/errors.hpp"

#include <cmath>

namespace raychaos {

namespace {

void require(bool ok, const char *key, const char *invariant)
{
    if (!ok) {
        throw ConfigError(key, std::string(invariant) + " violated");
    }
}

} // namespace

void CavityConfig::validate() const
{
    // NaN fails every comparison and is rejected here as well.
    require(R > 0.0, "R", "R > 0");
    require(r > 0.0, "r", "r > 0");
    require(l_left > 0.0, "l_left", "l_left > 0");
    require(l_right > 0.0, "l_right", "l_right > 0");
    require(a > 0.0, "a", "a > 0");
    require(b > 0.0, "b", "b > 0");
    require(a < r, "a", "a < r");
    require(b < R, "b", "b < R");
    require(a < b, "a", "a < b");
    require(l_left < R, "l_left", "l_left < R");
    require(l_right < R, "l_right", "l_right < R");
    const double L = l_left + l_right + 2.0 * sagitta(r, a);
    require(L < 2.0 * R, "L", "L < 2R");
}

std::string_view to_string(SurfaceId id)
{
    switch (id) {
    case SurfaceId::LeftConcave:
        return "LeftConcave";
    case SurfaceId::LeftConvex:
        return "LeftConvex";
    case SurfaceId::RightConvex:
        return "RightConvex";
    case SurfaceId::RightConcave:
        return "RightConcave";
    }
    return "?";
}

ArcMirror ArcMirror::make(SurfaceId id, Vec2 vertex, double radius, double aperture_half,
                          int facing)
{
    ArcMirror m;
    m.id = id;
    m.vertex = vertex;
    m.radius = radius;
    m.aperture_half = aperture_half;
    m.facing = facing;
    m.center = vertex - radius * m.axis();
    return m;
}

double sagitta(double radius, double aperture_half)
{
    // r - sqrt(r^2 - a^2) rewritten as a^2 / (r + sqrt(r^2 - a^2)) to avoid
    // cancellation for a << r.
    const double root = std::sqrt((radius - aperture_half) * (radius + aperture_half));
    return aperture_half * aperture_half / (radius + root);
}

CavityGeometry build_cavity(const CavityConfig &config)
{
    config.validate();

    CavityGeometry g;
    g.config = config;
    g.sagitta = sagitta(config.r, config.a);
    g.total_length = config.l_left + config.l_right + 2.0 * g.sagitta;

    const double L = g.total_length;
    const double lens_left_vertex = config.l_left;
    const double lens_right_vertex = config.l_left + 2.0 * g.sagitta;

    g.arcs[0] = ArcMirror::make(SurfaceId::LeftConcave, {0.0, 0.0}, config.R, config.b, +1);
    g.arcs[1] =
        ArcMirror::make(SurfaceId::LeftConvex, {lens_left_vertex, 0.0}, config.r, config.a, -1);
    g.arcs[2] =
        ArcMirror::make(SurfaceId::RightConvex, {lens_right_vertex, 0.0}, config.r, config.a, +1);
    g.arcs[3] = ArcMirror::make(SurfaceId::RightConcave, {L, 0.0}, config.R, config.b, -1);
    return g;
}

double half_trace(double R, double r, double l)
{
    return 2.0 * (1.0 - l / R) * (1.0 + l / r) - 1.0;
}

double magnification(double m)
{
    if (m < 1.0) {
        throw DomainError("stable sub-cavity: magnification undefined");
    }
    return m + std::sqrt((m - 1.0) * (m + 1.0));
}

double lyapunov_axial(double M, double l, double v)
{
    return v / (2.0 * l) * std::log(M);
}

Stability stability_of(double m)
{
    if (std::abs(m - 1.0) <= kMarginalTolerance) {
        return Stability::Marginal;
    }
    return m > 1.0 ? Stability::Unstable : Stability::Stable;
}

std::string ParaxialReport::label() const
{
    return {static_cast<char>(left.stability), static_cast<char>(right.stability)};
}

namespace {

SubCavityReport analyse(double R, double r, double l)
{
    SubCavityReport rep;
    rep.m = half_trace(R, r, l);
    rep.stability = stability_of(rep.m);
    if (rep.stability == Stability::Unstable) {
        rep.magnification = magnification(rep.m);
        rep.lambda0 = lyapunov_axial(*rep.magnification, l);
    }
    return rep;
}

} // namespace

ParaxialReport classify(const CavityConfig &config)
{
    return {analyse(config.R, config.r, config.l_left),
            analyse(config.R, config.r, config.l_right)};
}

} // namespace raychaos

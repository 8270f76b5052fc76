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

#include "raychaos/vec2.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace raychaos {

/// Geometric parameters of the composite cavity, all lengths in meters.
///
/// Two concave end mirrors (radius `R`, half-aperture `b`) enclose a
/// biconvex central element (radius `r` on both faces, half-aperture `a`).
/// `l_left` and `l_right` are the vertex-to-vertex lengths of the two
/// sub-cavities.
struct CavityConfig {
    double R = 1.0;
    double r = 0.25;
    double l_left = 0.04;
    double l_right = 0.04;
    double a = 0.003;
    double b = 0.025;

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;

    friend bool operator==(const CavityConfig &, const CavityConfig &) = default;
};

enum class SurfaceId : int {
    LeftConcave = 0,
    LeftConvex = 1,
    RightConvex = 2,
    RightConcave = 3,
};

inline constexpr std::array<SurfaceId, 4> kAllSurfaces = {
    SurfaceId::LeftConcave, SurfaceId::LeftConvex, SurfaceId::RightConvex,
    SurfaceId::RightConcave};

std::string_view to_string(SurfaceId id);

/// One reflective circular arc.
///
/// `facing` is +1 when the reflective side looks toward +z, -1 otherwise.
/// The arc is the part of the circle on the vertex side of the center whose
/// transverse coordinate satisfies |y| <= aperture_half. The vertex is
/// stored alongside the center so that vertex positions stay exact; all
/// intersection arithmetic is done relative to it.
struct ArcMirror {
    SurfaceId id = SurfaceId::LeftConcave;
    Vec2 center;
    Vec2 vertex;
    double radius = 1.0;
    double aperture_half = 0.0;
    int facing = +1;

    static ArcMirror make(SurfaceId id, Vec2 vertex, double radius, double aperture_half,
                          int facing);

    bool concave() const
    {
        return id == SurfaceId::LeftConcave || id == SurfaceId::RightConcave;
    }

    /// Unit vector from the circle center to the arc vertex.
    Vec2 axis() const
    {
        const double s = concave() ? -facing : facing;
        return {s, 0.0};
    }

    /// Unit normal at a point of the circle, pointing out of the reflective
    /// side (into the cavity).
    Vec2 normal_at(Vec2 p) const
    {
        const Vec2 radial = normalized(p - center);
        return concave() ? -radial : radial;
    }

    /// +1 for convex arcs, -1 for concave ones: sign relating the normal to
    /// the outward radial direction of the circle.
    double curvature_sign() const { return concave() ? -1.0 : 1.0; }

    /// True if a point of the circle lies on the mirror itself. The aperture
    /// is closed: |y| == aperture_half counts as on the mirror.
    bool covers(Vec2 p) const
    {
        return dot(p - center, axis()) > 0.0 && std::abs(p.y) <= aperture_half;
    }
};

struct CavityGeometry {
    CavityConfig config;
    std::array<ArcMirror, 4> arcs;
    double total_length = 0.0;
    double sagitta = 0.0;

    const ArcMirror &arc(SurfaceId id) const
    {
        return arcs[static_cast<std::size_t>(id)];
    }
};

/// Places the four arcs with the origin at the left concave vertex and the
/// z-axis along the optical axis. The two convex arcs meet at
/// (l_left + s_r, +-a) and form a closed lens.
CavityGeometry build_cavity(const CavityConfig &config);

/// Axial depth r - sqrt(r^2 - a^2) of an arc of radius r and half-aperture a.
double sagitta(double radius, double aperture_half);

// -- Paraxial analysis --------------------------------------------------

/// Half-trace of the round-trip ABCD matrix of a concave (R) / convex (r)
/// resonator of length l.
double half_trace(double R, double r, double l);

/// Round-trip magnification M = m + sqrt(m^2 - 1). Throws DomainError for
/// m < 1 (stable sub-cavity).
double magnification(double m);

/// Lyapunov exponent of the axial periodic orbit: (v / 2l) ln M.
double lyapunov_axial(double M, double l, double v = 1.0);

enum class Stability : char {
    Unstable = 'U',
    Marginal = 'M',
    Stable = 'S',
};

inline constexpr double kMarginalTolerance = 1e-9;

Stability stability_of(double m);

struct SubCavityReport {
    double m = 0.0;
    Stability stability = Stability::Stable;
    std::optional<double> magnification;
    std::optional<double> lambda0;
};

struct ParaxialReport {
    SubCavityReport left;
    SubCavityReport right;

    /// Two-letter label such as "UU" or "SM", left sub-cavity first.
    std::string label() const;
};

ParaxialReport classify(const CavityConfig &config);

} // namespace raychaos

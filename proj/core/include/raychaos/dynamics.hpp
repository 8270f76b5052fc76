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

#include "raychaos/geometry.hpp"
#include "raychaos/vec2.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace raychaos {

/// Minimum flight time before a new hit is accepted. The surface just left
/// stays eligible: a concave arc can send a ray back onto itself.
inline constexpr double kHitEpsilon = 1e-12;

/// Tangent-map cutoff on |n.v|; the nonlinear map has no grazing cutoff.
inline constexpr double kGrazingEpsilon = 1e-10;

/// Point ray of unit speed. `t` is elapsed time in seconds, which equals
/// path length in meters at v = 1 m/s.
struct RayState {
    Vec2 pos;
    Vec2 vel{1.0, 0.0};
    double t = 0.0;
    std::int64_t bounces = 0;

    friend bool operator==(const RayState &, const RayState &) = default;
};

/// Ray leaving the left concave mirror at transverse position `y0` with
/// direction `angle0` (radians, measured from +z toward +y).
RayState launch_from_left_mirror(const CavityGeometry &geom, double y0, double angle0);

struct BounceEvent {
    SurfaceId surface = SurfaceId::LeftConcave;
    double t = 0.0;
    Vec2 point;
    Vec2 normal;
    Vec2 v_in;
    Vec2 v_out;
    /// Signed curvature: +1/radius for convex arcs, -1/radius for concave.
    double curvature = 0.0;

    friend bool operator==(const BounceEvent &, const BounceEvent &) = default;
};

struct ArcHit {
    double t = 0.0;
    Vec2 point;
    Vec2 normal;
};

/// Earliest hit t > kHitEpsilon of the ray pos + t*vel on the reflective side
/// of `arc`, inside its aperture and with the ray approaching (n.vel < 0).
std::optional<ArcHit> intersect_ray_arc(Vec2 pos, Vec2 vel, const ArcMirror &arc);

/// Specular reflection v - 2(n.v)n. Throws DomainError unless n.v < 0.
Vec2 reflect(Vec2 v_in, Vec2 n);

struct StepResult {
    RayState state;
    std::optional<BounceEvent> event;
};

/// Advances to the earliest hit over the four arcs and reflects. With no
/// hit the state comes back unchanged and `event` is empty (escape).
StepResult step(const RayState &state, const CavityGeometry &geom);

struct Escaped {
    double t_last_bounce = 0.0;
};

struct CapReached {
    std::int64_t cap = 0;
};

using TraceOutcome = std::variant<Escaped, CapReached>;

struct TraceResult {
    std::vector<BounceEvent> events;
    TraceOutcome outcome;
    double path_length = 0.0;

    bool escaped() const { return std::holds_alternative<Escaped>(outcome); }
};

/// Iterates `step` until escape or `cap` bounces, recording every event.
TraceResult trace(const RayState &initial, const CavityGeometry &geom, std::int64_t cap);

/// Summary of a trace that does not keep its events.
struct TraceSummary {
    RayState final_state;
    bool escaped = false;
    /// Time of the last bounce (the initial time if there was none).
    double last_bounce_time = 0.0;
};

/// Event-streaming form of `trace`. `on_event(const RayState &before,
/// const BounceEvent &)` is called for each bounce and returns false to stop
/// early; a stop is reported as not escaped.
template <class OnEvent>
TraceSummary trace_visit(const RayState &initial, const CavityGeometry &geom, std::int64_t cap,
                         OnEvent &&on_event)
{
    TraceSummary out;
    RayState s = initial;
    out.last_bounce_time = initial.t;
    while (s.bounces - initial.bounces < cap) {
        StepResult next = step(s, geom);
        if (!next.event) {
            out.escaped = true;
            break;
        }
        const bool keep_going = on_event(static_cast<const RayState &>(s),
                                         static_cast<const BounceEvent &>(*next.event));
        s = next.state;
        out.last_bounce_time = s.t;
        if (!keep_going) {
            break;
        }
    }
    out.final_state = s;
    return out;
}

// -- Tangent dynamics ---------------------------------------------------

struct TangentVector {
    Vec2 d_pos;
    Vec2 d_vel;

    double norm() const
    {
        return std::sqrt(dot(d_pos, d_pos) + dot(d_vel, d_vel));
    }

    friend TangentVector operator*(double s, TangentVector v)
    {
        return {s * v.d_pos, s * v.d_vel};
    }
    friend TangentVector operator+(TangentVector a, TangentVector b)
    {
        return {a.d_pos + b.d_pos, a.d_vel + b.d_vel};
    }
    friend TangentVector operator-(TangentVector a, TangentVector b)
    {
        return {a.d_pos - b.d_pos, a.d_vel - b.d_vel};
    }
};

inline double dot(const TangentVector &a, const TangentVector &b)
{
    return dot(a.d_pos, b.d_pos) + dot(a.d_vel, b.d_vel);
}

/// Exact linearization of the free flight from `before` to `event` followed
/// by the reflection, including the shift of the collision time and the
/// curvature of the arc. Both input and output are synchronous perturbations
/// (taken at equal times), the output just after the reflection. Throws
/// NumericalError on grazing incidence.
TangentVector tangent_step(const RayState &before, const TangentVector &tv,
                           const BounceEvent &event);

/// Finite-difference oracle for the tangent dynamics: a companion trajectory
/// kept at distance `separation` from the reference and renormalized after
/// every bounce (two-trajectory method).
class ShadowTangent {
public:
    static constexpr double kDefaultSeparation = 1e-9;

    ShadowTangent(const CavityGeometry &geom, const RayState &reference, const TangentVector &tv,
                  double separation = kDefaultSeparation);

    /// Advances the companion over the flight `before -> event` and returns
    /// the measured displacement divided by the separation, i.e. the image of
    /// the current unit direction. The companion is then reset along the new
    /// direction at the same separation.
    TangentVector advance(const RayState &before, const BounceEvent &event);

    /// Places the companion at `separation` from `reference` along
    /// `direction` (used when an orthonormalization changes the direction).
    void rebase(const RayState &reference, const TangentVector &direction);

    double separation() const { return separation_; }

private:
    const CavityGeometry *geom_;
    RayState companion_;
    double separation_;
};

} // namespace raychaos

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

#include "raychaos/dynamics.hpp"

#include "raychaos/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace raychaos {

namespace {

// Double-double helpers (error-free transformations via fma). Reflection is
// evaluated in this extended precision and rounded once per component;
// plain double evaluation rounds in a correlated way along near-periodic
// orbits and lets |v| drift systematically over long runs.
struct DD {
    double hi;
    double lo;
};

DD two_prod(double a, double b)
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD dot_dd(Vec2 a, Vec2 b)
{
    const DD x = two_prod(a.z, b.z);
    const DD y = two_prod(a.y, b.y);
    const DD s = two_sum(x.hi, y.hi);
    return two_sum(s.hi, s.lo + x.lo + y.lo);
}

DD div_dd(DD a, DD b)
{
    const double q1 = a.hi / b.hi;
    const DD p = two_prod(q1, b.hi);
    const double r = ((a.hi - p.hi) - p.lo) + a.lo - q1 * b.lo;
    return two_sum(q1, r / b.hi);
}

// x - c * n, rounded once.
double sub_scaled(double x, DD c, double n)
{
    const DD p = two_prod(c.hi, n);
    const DD s = two_sum(x, -p.hi);
    return s.hi + (s.lo - (p.lo + c.lo * n));
}

} // namespace

RayState launch_from_left_mirror(const CavityGeometry &geom, double y0, double angle0)
{
    const ArcMirror &mirror = geom.arc(SurfaceId::LeftConcave);
    if (!(std::abs(y0) <= mirror.aperture_half)) {
        throw ConfigError("y0", "|y0| <= b violated");
    }
    RayState s;
    s.pos = {sagitta(mirror.radius, std::abs(y0)), y0};
    s.vel = {std::cos(angle0), std::sin(angle0)};
    if (!(dot(mirror.normal_at(s.pos), s.vel) > 0.0)) {
        throw ConfigError("angle0", "initial direction must point into the cavity");
    }
    return s;
}

std::optional<ArcHit> intersect_ray_arc(Vec2 pos, Vec2 vel, const ArcMirror &arc)
{
    // Circle equation |w + t v|^2 = rho^2 with w = pos - center, expressed
    // through d = pos - vertex so that points near the mirror do not lose
    // precision: w = d + rho*e, |w|^2 - rho^2 = |d|^2 + 2 rho d.e.
    const Vec2 e = arc.axis();
    const double rho = arc.radius;
    const Vec2 d = pos - arc.vertex;

    const double qa = dot(vel, vel);
    const double qb = dot(d, vel) + rho * dot(e, vel);
    const double qc = dot(d, d) + 2.0 * rho * dot(d, e);

    const double disc = qb * qb - qa * qc;
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double q = -(qb + std::copysign(std::sqrt(disc), qb));

    std::array<double, 2> roots{q / qa, q != 0.0 ? qc / q : q / qa};
    if (roots[1] < roots[0]) {
        std::swap(roots[0], roots[1]);
    }

    for (double t : roots) {
        if (!(t > kHitEpsilon)) {
            continue;
        }
        const Vec2 rel = d + t * vel;
        const Vec2 point = arc.vertex + rel;
        const Vec2 radial = rel + rho * e;
        if (!(dot(radial, e) > 0.0) || std::abs(point.y) > arc.aperture_half) {
            continue;
        }
        const Vec2 outward = normalized(radial);
        const Vec2 normal = arc.concave() ? -outward : outward;
        if (!(dot(normal, vel) < 0.0)) {
            continue;
        }
        return ArcHit{t, point, normal};
    }
    return std::nullopt;
}

Vec2 reflect(Vec2 v_in, Vec2 n)
{
    const double vn = dot(v_in, n);
    if (!(vn < 0.0)) {
        throw DomainError("reflection from non-approaching ray");
    }
    // v - 2 (v.n / n.n) n: dividing by n.n keeps |v| exact in real arithmetic
    // even when n is off unit length by an ulp.
    DD c = div_dd(dot_dd(v_in, n), dot_dd(n, n));
    c = {2.0 * c.hi, 2.0 * c.lo};
    return {sub_scaled(v_in.z, c, n.z), sub_scaled(v_in.y, c, n.y)};
}

StepResult step(const RayState &state, const CavityGeometry &geom)
{
    std::optional<ArcHit> best;
    const ArcMirror *best_arc = nullptr;

    for (const ArcMirror &arc : geom.arcs) {
        const std::optional<ArcHit> hit = intersect_ray_arc(state.pos, state.vel, arc);
        if (!hit) {
            continue;
        }
        if (best && std::abs(hit->t - best->t) < kHitEpsilon &&
            norm(hit->point - best->point) > kHitEpsilon) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "ambiguous simultaneous hits on " << to_string(best_arc->id) << " and "
                << to_string(arc.id) << " from pos=(" << state.pos.z << ", " << state.pos.y
                << ") vel=(" << state.vel.z << ", " << state.vel.y << ")";
            throw NumericalError(msg.str());
        }
        // Strict comparison: on an exact tie the lower surface id wins.
        if (!best || hit->t < best->t) {
            best = hit;
            best_arc = &arc;
        }
    }

    StepResult out{state, std::nullopt};
    if (!best) {
        return out;
    }

    BounceEvent ev;
    ev.surface = best_arc->id;
    ev.t = state.t + best->t;
    ev.point = best->point;
    ev.normal = best->normal;
    ev.v_in = state.vel;
    ev.v_out = reflect(state.vel, best->normal);
    ev.curvature = best_arc->curvature_sign() / best_arc->radius;

    out.state.pos = ev.point;
    out.state.vel = ev.v_out;
    out.state.t = ev.t;
    out.state.bounces = state.bounces + 1;
    out.event = ev;
    return out;
}

TraceResult trace(const RayState &initial, const CavityGeometry &geom, std::int64_t cap)
{
    TraceResult result;
    const TraceSummary summary =
        trace_visit(initial, geom, cap, [&](const RayState &, const BounceEvent &ev) {
            result.events.push_back(ev);
            return true;
        });
    if (summary.escaped) {
        result.outcome = Escaped{summary.last_bounce_time};
    } else {
        result.outcome = CapReached{cap};
    }
    result.path_length = (summary.final_state.t - initial.t) * norm(initial.vel);
    return result;
}

TangentVector tangent_step(const RayState &before, const TangentVector &tv,
                           const BounceEvent &event)
{
    const Vec2 n = event.normal;
    const Vec2 v = event.v_in;
    const double vn = dot(n, v);
    if (std::abs(vn) < kGrazingEpsilon) {
        throw NumericalError("tangent map ill-conditioned");
    }

    // Free flight up to the collision time of the reference ray.
    const double flight = event.t - before.t;
    const Vec2 dq = tv.d_pos + flight * tv.d_vel;
    const Vec2 dv = tv.d_vel;

    // The perturbed ray meets the surface dt later, at a point displaced
    // along the tangent by dq_c; there the normal has turned by
    // curvature * dq_c.
    const double dt = -dot(n, dq) / vn;
    const Vec2 dq_c = dq + dt * v;
    const Vec2 dn = event.curvature * dq_c;

    TangentVector out;
    out.d_pos = dq - (2.0 * dot(n, dq)) * n;
    out.d_vel = dv - (2.0 * dot(n, dv)) * n - 2.0 * (dot(dn, v) * n + vn * dn);
    return out;
}

ShadowTangent::ShadowTangent(const CavityGeometry &geom, const RayState &reference,
                             const TangentVector &tv, double separation)
    : geom_(&geom), separation_(separation)
{
    rebase(reference, tv);
}

void ShadowTangent::rebase(const RayState &reference, const TangentVector &direction)
{
    const double scale = separation_ / direction.norm();
    companion_ = reference;
    companion_.pos += scale * direction.d_pos;
    companion_.vel += scale * direction.d_vel;
}

TangentVector ShadowTangent::advance(const RayState &before, const BounceEvent &event)
{
    if (companion_.t != before.t) {
        throw NumericalError("shadow trajectory out of sync with its reference");
    }
    const StepResult next = step(companion_, *geom_);
    if (!next.event || next.event->surface != event.surface) {
        throw NumericalError("shadow trajectory left the reference orbit");
    }

    // Bring the companion to the reference collision time by free flight with
    // its post-collision velocity (backward when it collided later). Flight
    // times are recomputed from the geometry: the absolute clocks carry
    // rounding of order ulp(t), far above the separation.
    const Vec2 v_ref = before.vel;
    const Vec2 v_cmp = companion_.vel;
    const double flight_ref = dot(event.point - before.pos, v_ref) / dot(v_ref, v_ref);
    const double flight_cmp =
        dot(next.event->point - companion_.pos, v_cmp) / dot(v_cmp, v_cmp);
    const Vec2 pos = next.event->point + (flight_ref - flight_cmp) * next.state.vel;
    const TangentVector image{(1.0 / separation_) * (pos - event.point),
                              (1.0 / separation_) * (next.state.vel - event.v_out)};

    RayState reference;
    reference.pos = event.point;
    reference.vel = event.v_out;
    reference.t = event.t;
    reference.bounces = next.state.bounces;
    rebase(reference, image);
    return image;
}

} // namespace raychaos

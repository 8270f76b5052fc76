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
#include "raychaos/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace raychaos;

namespace {

const CavityConfig kUU{1.0, 0.25, 0.04, 0.04, 0.003, 0.025};
const CavityConfig kSS{1.0, 0.90, 0.45, 0.45, 0.003, 0.025};
const CavityConfig kUM{1.0, 0.80, 0.01, 0.20, 0.003, 0.025};

// Plain bisection for the crossing of a horizontal ray y = h with the circle
// of radius R centered at (cz, 0), on the branch z > cz.
double bisect_circle_crossing(double cz, double R, double h, double lo, double hi)
{
    auto f = [&](double z) { return (z - cz) * (z - cz) + h * h - R * R; };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) < 0.0) == (f(mid) < 0.0) ? lo = mid : hi = mid;
    }
    return 0.5 * (lo + hi);
}

RayState at(Vec2 pos, Vec2 vel)
{
    RayState s;
    s.pos = pos;
    s.vel = vel;
    return s;
}

TangentVector unit(TangentVector v) { return (1.0 / v.norm()) * v; }

} // namespace

TEST_CASE("axial ray hits the left convex vertex")
{
    const CavityGeometry g = build_cavity(kUU);
    const auto hit = intersect_ray_arc({0.0, 0.0}, {1.0, 0.0}, g.arc(SurfaceId::LeftConvex));
    REQUIRE(hit);
    CHECK(hit->t == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(hit->point.z == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(hit->point.y == 0.0);
    CHECK(hit->normal == Vec2{-1.0, 0.0});
}

TEST_CASE("off-axis ray passes the lens and hits the right end mirror")
{
    const CavityGeometry g = build_cavity(kUU);
    const double h = 0.01;
    CHECK_FALSE(intersect_ray_arc({0.0, h}, {1.0, 0.0}, g.arc(SurfaceId::LeftConvex)));
    CHECK_FALSE(intersect_ray_arc({0.0, h}, {1.0, 0.0}, g.arc(SurfaceId::RightConvex)));

    const ArcMirror &rc = g.arc(SurfaceId::RightConcave);
    const auto hit = intersect_ray_arc({0.0, h}, {1.0, 0.0}, rc);
    REQUIRE(hit);
    const double oracle =
        bisect_circle_crossing(rc.center.z, kUU.R, h, rc.center.z, g.total_length);
    CHECK(hit->t == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(hit->point.z == doctest::Approx(0.0799860000460308165).epsilon(1e-14));
    CHECK(hit->point.y == h);
    CHECK(dot(hit->normal, Vec2{1.0, 0.0}) < 0.0);
}

TEST_CASE("ray leaving the cavity hits nothing")
{
    const CavityGeometry g = build_cavity(kUU);
    for (const ArcMirror &arc : g.arcs) {
        CHECK_FALSE(intersect_ray_arc({-0.01, 0.0}, {-1.0, 0.0}, arc));
        CHECK_FALSE(intersect_ray_arc({0.02, 0.03}, normalized({1.0, 1.0}), arc));
    }
}

TEST_CASE("reflection")
{
    CHECK(reflect({1.0, 0.0}, {-1.0, 0.0}) == Vec2{-1.0, 0.0});
    const double s = std::numbers::sqrt2 / 2.0;
    const Vec2 turned = reflect({1.0, 0.0}, {-s, s});
    CHECK(std::abs(turned.z) <= 1e-15);
    CHECK(turned.y == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_WITH_AS(reflect({1.0, 0.0}, {1.0, 0.0}), "reflection from non-approaching ray",
                         DomainError);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    int n = 0;
    while (n < 1000) {
        const double a = ang(rng);
        const double b = ang(rng);
        const Vec2 v{std::cos(a), std::sin(a)};
        const Vec2 nrm{std::cos(b), std::sin(b)};
        if (dot(nrm, v) >= 0.0) {
            continue;
        }
        const Vec2 out = reflect(v, nrm);
        CHECK(std::abs(norm(out) - 1.0) <= 1e-15);
        CHECK(dot(out, nrm) == doctest::Approx(-dot(v, nrm)).epsilon(1e-14));
        CHECK(cross(nrm, out) == doctest::Approx(cross(nrm, v)).epsilon(1e-14));
        ++n;
    }
}

TEST_CASE("axial ray retro-reflects from the lens")
{
    const CavityGeometry g = build_cavity(kUU);
    const StepResult r = step(launch_from_left_mirror(g, 0.0, 0.0), g);
    REQUIRE(r.event);
    CHECK(r.event->surface == SurfaceId::LeftConvex);
    CHECK(r.state.vel == Vec2{-1.0, 0.0});
    CHECK(r.state.bounces == 1);
}

TEST_CASE("ray beyond the end-mirror aperture escapes")
{
    const CavityGeometry g = build_cavity(kUU);
    const RayState s = at({0.01, 0.0}, normalized({1.0, 1.0}));
    const StepResult r = step(s, g);
    CHECK_FALSE(r.event);
    CHECK(r.state == s);
}

TEST_CASE("lens aperture edge is closed")
{
    const CavityGeometry g = build_cavity(kUU);
    const double a = kUU.a;

    const StepResult inside = step(at({0.001, a * (1.0 - 1e-9)}, {1.0, 0.0}), g);
    REQUIRE(inside.event);
    CHECK(inside.event->surface == SurfaceId::LeftConvex);

    const StepResult outside = step(at({0.001, a * (1.0 + 1e-9)}, {1.0, 0.0}), g);
    REQUIRE(outside.event);
    CHECK(outside.event->surface == SurfaceId::RightConcave);
}

TEST_CASE("launch validation")
{
    const CavityGeometry g = build_cavity(kUU);
    CHECK_THROWS_AS(launch_from_left_mirror(g, 0.03, 0.0), ConfigError);
    CHECK_THROWS_AS(launch_from_left_mirror(g, 0.0, 2.0), ConfigError);
    const RayState s = launch_from_left_mirror(g, 0.01, 0.0);
    CHECK(norm(s.pos - g.arc(SurfaceId::LeftConcave).center) ==
          doctest::Approx(kUU.R).epsilon(1e-15));
}

TEST_CASE("axial orbit never escapes")
{
    for (const CavityConfig &c : {kUU, kSS, kUM}) {
        const CavityGeometry g = build_cavity(c);
        const TraceResult res = trace(launch_from_left_mirror(g, 0.0, 0.0), g, 1000);
        CHECK_FALSE(res.escaped());
        CHECK(std::get<CapReached>(res.outcome).cap == 1000);
        CHECK(res.events.size() == 1000);
    }
}

TEST_CASE("escape time is the time of the last bounce")
{
    const CavityGeometry g = build_cavity(kUU);
    // This launch height lies in a prompt-escape window.
    const TraceResult res = trace(launch_from_left_mirror(g, 0.02, 0.0), g, 60000);
    REQUIRE(res.escaped());
    REQUIRE_FALSE(res.events.empty());
    CHECK(std::get<Escaped>(res.outcome).t_last_bounce == res.events.back().t);
    CHECK(res.events.back().t < 50.0);
}

TEST_CASE("tangent map is linear")
{
    const CavityGeometry g = build_cavity(kUU);
    RayState s = launch_from_left_mirror(g, 0.002, 0.001);
    const TangentVector tv{{1e-3, -2e-3}, {0.3, 0.7}};
    for (int k = 0; k < 20; ++k) {
        const StepResult r = step(s, g);
        REQUIRE(r.event);
        const TangentVector one = tangent_step(s, tv, *r.event);
        const TangentVector two = tangent_step(s, 2.0 * tv, *r.event);
        CHECK(two.d_pos == 2.0 * one.d_pos);
        CHECK(two.d_vel == 2.0 * one.d_vel);
        s = r.state;
    }
}

TEST_CASE("exact tangent map agrees with a shadow trajectory")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (const CavityConfig &c : {kUU, kSS, kUM}) {
        const CavityGeometry g = build_cavity(c);
        RayState s = launch_from_left_mirror(g, 0.0021, 0.0013);
        TangentVector u = unit({{gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}});
        ShadowTangent shadow(g, s, u, 1e-9);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const StepResult r = step(s, g);
            REQUIRE(r.event);
            const TangentVector exact = tangent_step(s, u, *r.event);
            const TangentVector measured = shadow.advance(s, *r.event);
            worst = std::max(worst, (exact - measured).norm() / exact.norm());
            s = r.state;
            u = unit(exact);
            shadow.rebase(s, u);
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("grazing incidence is rejected by the tangent map")
{
    const CavityGeometry g = build_cavity(kUU);
    const ArcMirror &lx = g.arc(SurfaceId::LeftConvex);
    // Tangent ray touching the lens at angle phi from its axis.
    const double phi = 0.005;
    const Vec2 radial{-std::cos(phi), std::sin(phi)};
    const Vec2 touch = lx.center + kUU.r * radial;
    const Vec2 dir{radial.y, -radial.z};  // perpendicular to the radius
    BounceEvent ev;
    ev.surface = SurfaceId::LeftConvex;
    ev.point = touch;
    ev.normal = radial;
    ev.v_in = dir;
    ev.v_out = dir;
    ev.curvature = 1.0 / kUU.r;
    ev.t = 0.01;
    const RayState before = at(touch - 0.01 * dir, dir);
    CHECK_THROWS_AS(tangent_step(before, {{1e-3, 0.0}, {0.0, 1e-3}}, ev), NumericalError);
}

TEST_CASE("speed is conserved over a million bounces")
{
    const CavityGeometry g = build_cavity(kSS);
    double worst = 0.0;
    const TraceSummary sum = trace_visit(
        launch_from_left_mirror(g, 1e-3, 0.0), g, 1000000, [&](const RayState &, const BounceEvent &ev) {
            worst = std::max(worst, std::abs(norm(ev.v_out) - 1.0));
            return true;
        });
    CHECK_FALSE(sum.escaped);
    CHECK(sum.final_state.bounces == 1000000);
    CHECK(worst < 1e-12);
}

TEST_CASE("reversed rays retrace their impact points")
{
    for (const CavityConfig &c : {kUU, kSS, kUM}) {
        const CavityGeometry g = build_cavity(c);
        const RayState start = launch_from_left_mirror(g, 0.0017, 0.0009);
        const TraceResult fwd = trace(start, g, 20);
        REQUIRE(fwd.events.size() == 20);

        // Impact points in reverse order, ending at the launch point.
        std::vector<Vec2> expected;
        for (int k = 18; k >= 0; --k) {
            expected.push_back(fwd.events[static_cast<std::size_t>(k)].point);
        }
        expected.push_back(start.pos);

        const RayState back = at(fwd.events.back().point, -fwd.events.back().v_in);
        const TraceResult rev = trace(back, g, 20);
        REQUIRE(rev.events.size() == 20);
        double worst = 0.0;
        for (std::size_t k = 0; k < 20; ++k) {
            worst = std::max(worst, norm(rev.events[k].point - expected[k]));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("mirror symmetries of a symmetric cavity")
{
    const CavityGeometry g = build_cavity(kUU);
    const RayState start = launch_from_left_mirror(g, 0.0013, 0.0007);
    const TraceResult ref = trace(start, g, 10);

    // y -> -y
    const TraceResult flipped = trace(at({start.pos.z, -start.pos.y}, {start.vel.z, -start.vel.y}), g, 10);
    REQUIRE(flipped.events.size() == ref.events.size());
    for (std::size_t k = 0; k < ref.events.size(); ++k) {
        CHECK(flipped.events[k].surface == ref.events[k].surface);
        CHECK(std::abs(flipped.events[k].point.y + ref.events[k].point.y) <= 1e-12);
        CHECK(std::abs(flipped.events[k].point.z - ref.events[k].point.z) <= 1e-12);
    }

    // z -> L - z
    const double L = g.total_length;
    const TraceResult swapped =
        trace(at({L - start.pos.z, start.pos.y}, {-start.vel.z, start.vel.y}), g, 10);
    REQUIRE(swapped.events.size() == ref.events.size());
    for (std::size_t k = 0; k < ref.events.size(); ++k) {
        const int mirrored = 3 - static_cast<int>(ref.events[k].surface);
        CHECK(static_cast<int>(swapped.events[k].surface) == mirrored);
        CHECK(std::abs((L - swapped.events[k].point.z) - ref.events[k].point.z) <= 1e-9);
        CHECK(std::abs(swapped.events[k].point.y - ref.events[k].point.y) <= 1e-9);
    }
}

TEST_CASE("traces are deterministic")
{
    const CavityGeometry g = build_cavity(kUM);
    const RayState start = launch_from_left_mirror(g, -0.0041, 0.0002);
    const TraceResult a = trace(start, g, 5000);
    const TraceResult b = trace(start, g, 5000);
    CHECK(a.events == b.events);
    CHECK(a.path_length == b.path_length);
    CHECK(a.escaped() == b.escaped());
}

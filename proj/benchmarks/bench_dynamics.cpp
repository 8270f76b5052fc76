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

#include <benchmark/benchmark.h>

namespace {

using namespace raychaos;

const CavityConfig kSS{1.0, 0.90, 0.45, 0.45, 0.003, 0.025};

void BM_IntersectArc(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(CavityConfig{});
    const ArcMirror &arc = g.arc(SurfaceId::RightConcave);
    const Vec2 pos{0.0, 0.004};
    const Vec2 vel = normalized({1.0, 0.01});
    for (auto _ : state) {
        benchmark::DoNotOptimize(intersect_ray_arc(pos, vel, arc));
    }
}
BENCHMARK(BM_IntersectArc);

void BM_Step(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(kSS);
    RayState s = launch_from_left_mirror(g, 1e-3, 0.0);
    for (auto _ : state) {
        s = step(s, g).state;
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step);

// Bounces per second on a confined orbit, with and without event storage.
void BM_TraceVisit(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(kSS);
    const RayState start = launch_from_left_mirror(g, 1e-3, 0.0);
    const std::int64_t cap = state.range(0);
    for (auto _ : state) {
        const TraceSummary sum =
            trace_visit(start, g, cap, [](const RayState &, const BounceEvent &) { return true; });
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * cap);
}
BENCHMARK(BM_TraceVisit)->Arg(1000)->Arg(100000);

void BM_Trace(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(kSS);
    const RayState start = launch_from_left_mirror(g, 1e-3, 0.0);
    const std::int64_t cap = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace(start, g, cap));
    }
    state.SetItemsProcessed(state.iterations() * cap);
}
BENCHMARK(BM_Trace)->Arg(1000)->Arg(100000);

void BM_TangentStep(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(CavityConfig{});
    const RayState s = launch_from_left_mirror(g, 0.002, 0.001);
    const StepResult r = step(s, g);
    const TangentVector tv{{1e-3, 2e-3}, {0.5, -0.5}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(tangent_step(s, tv, *r.event));
    }
}
BENCHMARK(BM_TangentStep);

} // namespace

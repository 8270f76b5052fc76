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

#include <benchmark/benchmark.h>

namespace {

using namespace raychaos;

void BM_EscapeScan(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(CavityConfig{});
    const ScanParams p{-0.025, 0.025, static_cast<std::size_t>(state.range(0)), 0.0, 20000};
    for (auto _ : state) {
        benchmark::DoNotOptimize(escape_scan(g, p, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EscapeScan)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OrbitLyapunov(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(CavityConfig{1.0, 0.90, 0.45, 0.45, 0.003, 0.025});
    LyapunovParams p;
    p.bounces = 10000;
    p.method = state.range(0) == 0 ? TangentMethod::ExactTangent : TangentMethod::Shadow;
    for (auto _ : state) {
        benchmark::DoNotOptimize(orbit_lyapunov(g, {1e-3, 0.0}, p));
    }
    state.SetLabel(std::string(to_string(p.method)));
}
BENCHMARK(BM_OrbitLyapunov)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SosCollect(benchmark::State &state)
{
    const CavityGeometry g = build_cavity(CavityConfig{1.0, 0.90, 0.45, 0.45, 0.003, 0.025});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sos_collect(g, 1e-3, 0.0, 1000));
    }
}
BENCHMARK(BM_SosCollect)->Unit(benchmark::kMillisecond);

} // namespace

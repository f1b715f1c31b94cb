/*
 * Copyright 2026 The mprlab Authors

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

#include <benchmark/benchmark.h>

#include "mprlab/mac_sim.hpp"
#include "mprlab/optimizer.hpp"
#include "mprlab/parallel.hpp"
#include "mprlab/phy.hpp"
#include "mprlab/slot_model.hpp"

using namespace mprlab;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_ExhaustiveDetect(benchmark::State& state) {
  const phy::CMatrix h = phy::random_channel(4, 2, 11);
  const phy::CMatrix x = phy::random_symbols(2, 8, phy::Alphabet::bpsk, 12);
  const phy::CMatrix y = phy::simulate_uplink(h, x, phy::noise_variance_for_snr_db(20), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(phy::exhaustive_fa_detect(y, 2, phy::Alphabet::bpsk, exec_of(state)));
  label(state);
}

void BM_Replications(benchmark::State& state) {
  sim::SimConfig c;
  c.n_stations = 50;
  c.mpr = 4;
  c.warmup_slots = 10'000;
  c.measure_slots = 100'000;
  c.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_replications(c, 4, exec_of(state)));
  label(state);
}

void BM_OptimalR(benchmark::State& state) {
  const auto s = slots::basic_slots(slots::PhyTimings{});
  for (auto _ : state)
    benchmark::DoNotOptimize(design::optimal_r(6, 32, s, 8184, design::Population::of(50), exec_of(state)));
  label(state);
}

void BM_SuperlinearityScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(design::superlinearity_scan(60, {}, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_ExhaustiveDetect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Replications)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimalR)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuperlinearityScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

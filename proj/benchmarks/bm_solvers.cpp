// Copyright 2026 The edgealloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "edgealloc/crl.hpp"
#include "edgealloc/edgesim.hpp"
#include "edgealloc/environment.hpp"
#include "edgealloc/generator.hpp"
#include "edgealloc/knapsack.hpp"

namespace edgealloc {
namespace {

SyntheticDataset dataset(int n_operations) {
  GenConfig c;
  c.n_days = 4;
  c.n_operations = n_operations;
  return gen_synthetic_dataset(c, 11);
}

EnvironmentMatrix env_of(const SyntheticDataset& ds, std::size_t day) {
  std::vector<double> caps;
  for (const auto& d : ds.devices) caps.push_back(d.capacity);
  return build_environment(ds.importances(day), caps, ds.contexts[day]);
}

void BM_BranchBound(benchmark::State& state) {
  const auto ds = dataset(static_cast<int>(state.range(0)));
  const auto in = ds.instance(0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_branch_bound(in).objective);
}
BENCHMARK(BM_BranchBound)->Arg(8)->Arg(16)->Arg(32);

void BM_Greedy(benchmark::State& state) {
  const auto ds = dataset(static_cast<int>(state.range(0)));
  const auto in = ds.instance(0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_greedy_density(in).objective);
}
BENCHMARK(BM_Greedy)->Arg(32);

void BM_TrainCrl(benchmark::State& state) {
  const auto ds = dataset(12);
  const auto in = ds.instance(0);
  const auto env = env_of(ds, 0);
  CrlHyperParams p;
  p.mode = state.range(0) == 0 ? QMode::kTabular : QMode::kApproximate;
  p.episodes = 500;
  for (auto _ : state) benchmark::DoNotOptimize(train_crl(env, in, p, 3).best_return);
}
BENCHMARK(BM_TrainCrl)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto ds = dataset(32);
  const auto in = ds.instance(0);
  const auto alloc = solve_branch_bound(in).allocation;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(alloc, in, ds.topology).pt_s);
}
BENCHMARK(BM_Simulate);

}  // namespace
}  // namespace edgealloc

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

#include <random>
#include <vector>

#include "edgealloc/chiller.hpp"

namespace edgealloc {
namespace {

void BM_Sequencing(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> cop(3.0, 7.0);
  Eigen::MatrixXd m(n, 24);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < 24; ++t) m(i, t) = cop(rng);
  std::vector<ChillerSpec> specs;
  for (int i = 0; i < n; ++i) specs.push_back({i, 400.0 + 100.0 * i});
  std::vector<double> demand;
  for (int t = 0; t < 24; ++t) demand.push_back(150.0 + 40.0 * (t % 12));
  for (auto _ : state) benchmark::DoNotOptimize(sequencing_optimize(m, specs, demand).total_kwh);
}
BENCHMARK(BM_Sequencing)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace edgealloc

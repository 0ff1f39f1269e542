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

// Benchmark protocol over a generated dataset.
//
// Days are split chronologically: the first days form the history (kNN
// library and SVM training rows), then n_validation_days tune the ensemble
// weights, and the last n_test_days are scored. CRL is trained per
// evaluated day on the kNN environment retrieved for that day's context.

#ifndef EDGEALLOC_EXPERIMENT_HPP_
#define EDGEALLOC_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgealloc/coop.hpp"
#include "edgealloc/crl.hpp"
#include "edgealloc/edgesim.hpp"
#include "edgealloc/generator.hpp"
#include "edgealloc/svm.hpp"

namespace edgealloc {

// Policy names in report order.
const std::vector<std::string>& known_policies();

struct BenchmarkConfig {
  int n_validation_days = 3;
  int n_test_days = 6;
  std::size_t knn_k = 3;
  CrlHyperParams crl = default_benchmark_crl();
  SvmTrainOptions svm{0.01, 200, 16};
  std::optional<EnsembleWeights> weights;  // nullopt: tune on validation days
  std::vector<std::string> policies{"oracle", "rm", "dml", "crl", "dcta"};
  // Adds "crl_matched" and "crl_permuted" rows: CRL trained on the day's true
  // environment and on a row-permuted copy of it.
  bool mismatch_probe = false;

  static CrlHyperParams default_benchmark_crl();
  void validate(int n_days) const;
};

struct DaySplit {
  std::vector<std::size_t> history;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};
DaySplit split_days(std::size_t n_days, const BenchmarkConfig& config);

// splitmix64 of (seed, tag, index); keeps per-day streams independent.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

struct TrainedArtifacts {
  SvmModel svm;
  std::vector<double> svm_epoch_loss;
  std::map<int, QPolicy> crl;  // keyed by day_id (validation and test days)
  std::map<int, double> crl_best_return;
  EnsembleWeights weights = EnsembleWeights::crl_only();
};

// The kNN environment used for `day`, built from the history days only.
EnvironmentMatrix day_environment(const SyntheticDataset& ds, const DaySplit& split,
                                  std::size_t day, std::size_t k);

// Feature rows of `day`, in task order.
std::vector<TaskFeatureRow> day_feature_rows(const SyntheticDataset& ds, std::size_t day);

// OM of an allocation on `day` against the day's ideal cost.
double day_merit(const SyntheticDataset& ds, std::size_t day, const AllocationMatrix& alloc);

TrainedArtifacts train_artifacts(const SyntheticDataset& ds, const BenchmarkConfig& config,
                                 std::uint64_t seed);

// One row per (test day, policy), sorted by day then policy order.
std::vector<ReportRow> evaluate_policies(const SyntheticDataset& ds,
                                         const BenchmarkConfig& config,
                                         const TrainedArtifacts& artifacts,
                                         std::uint64_t seed);

// Applied to every generated dataset before training, e.g. to swap the
// topology or deadline.
using DatasetHook = std::function<void(SyntheticDataset&)>;

// Generates, trains and evaluates each seed. Seeds run on up to `threads`
// workers; the returned rows are ordered by seed position regardless.
std::vector<ReportRow> run_benchmark(const GenConfig& gen, const BenchmarkConfig& config,
                                     std::span<const std::uint64_t> seeds,
                                     std::size_t threads = 1,
                                     const DatasetHook& adjust = {});

struct PolicySummary {
  std::size_t n_runs = 0;
  double om_mean = 0.0, om_std = 0.0;
  double pt_mean = 0.0, pt_std = 0.0;
  double ec_mean = 0.0, ec_std = 0.0;
  double objective_mean = 0.0, objective_std = 0.0;
};

// Sample standard deviations (0 for a single run).
std::map<std::string, PolicySummary> summarize(std::span<const ReportRow> rows);

// {"policies":{name:{n_runs,om_mean,om_std,...}},"ratios":{...}}; ratio keys
// are pt_ratio_<a>_over_<b>, ec_ratio_<a>_over_<b> and om_ratio_<a>_over_<b>
// for every ordered pair of distinct policies present.
std::string summary_to_json(std::span<const ReportRow> rows);

// Per-seed mean of `field` for `policy`, in order of first appearance of
// each seed. field is one of om, pt_s, ec_j, objective.
std::vector<double> per_seed_means(std::span<const ReportRow> rows,
                                   const std::string& policy, const std::string& field);

// Reads EDGEALLOC_THREADS; defaults to 1, capped at hardware concurrency.
std::size_t thread_budget();

}  // namespace edgealloc

#endif  // EDGEALLOC_EXPERIMENT_HPP_

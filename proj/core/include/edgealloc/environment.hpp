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

// Environment matrices e = [I_j * V_p] and their nearest-neighbour retrieval
// from a library of historical days.

#ifndef EDGEALLOC_ENVIRONMENT_HPP_
#define EDGEALLOC_ENVIRONMENT_HPP_

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "edgealloc/types.hpp"

namespace edgealloc {

// Sensing data, e.g. outdoor temperature and demand.
struct SensingContext {
  std::vector<double> features;
};

struct EnvironmentMatrix {
  Eigen::MatrixXd values;  // N x M, values(j, p) = max(I_j, 0) * V_p
  // max(I_j, 0) the matrix was built from (averaged for kNN mixtures);
  // empty for matrices read or assembled elsewhere.
  std::vector<double> importance;
  SensingContext context;
  int day_id = -1;

  Eigen::Index n_tasks() const { return values.rows(); }
  Eigen::Index n_devices() const { return values.cols(); }
};

/// Historical environments E = [e_1 ... e_N'].
class EnvironmentLibrary {
 public:
  EnvironmentLibrary() = default;
  // Throws std::invalid_argument if shapes or context sizes disagree.
  explicit EnvironmentLibrary(std::vector<EnvironmentMatrix> entries);

  const std::vector<EnvironmentMatrix>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t context_dim() const;

 private:
  std::vector<EnvironmentMatrix> entries_;
};

/// Throws std::invalid_argument on empty inputs. Negative importances are
/// clamped to zero.
EnvironmentMatrix build_environment(std::span<const double> importances,
                                    std::span<const double> capacities,
                                    SensingContext context, int day_id = -1);

/// Indices of the k library entries nearest to `query` in z-scored context
/// space (library mean and population standard deviation per feature;
/// constant features contribute nothing). Ties keep library order.
std::vector<std::size_t> knn_neighbors(const EnvironmentLibrary& library,
                                       const SensingContext& query,
                                       std::size_t k);

/// kNN(E, Z): k = 1 returns the nearest entry unchanged; k > 1 returns the
/// elementwise mean of the neighbours' matrices carrying the query context
/// and the nearest neighbour's day id.
EnvironmentMatrix knn_environment(const EnvironmentLibrary& library,
                                  const SensingContext& query, std::size_t k);

/// Per-task importance encoded in an environment: env.importance when set,
/// else sum_p e(j, p) / sum_p V_p (zero when the total capacity is zero).
std::vector<double> implied_importance(const EnvironmentMatrix& env,
                                       const DeviceSet& devices);

/// Environment library CSV: day_id,ctx_0..ctx_{D-1},I_0..I_{N-1}.
/// Capacities come from the DeviceSet.
EnvironmentLibrary read_environment_library(const std::filesystem::path& path,
                                            const DeviceSet& devices);
std::string environment_library_to_csv(
    std::span<const int> day_ids,
    std::span<const SensingContext> contexts,
    std::span<const std::vector<double>> importances);

}  // namespace edgealloc

#endif  // EDGEALLOC_ENVIRONMENT_HPP_

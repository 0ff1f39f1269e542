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

// Cooperative allocation: F = w1 * crl + w2 * svm, projected onto a
// feasible allocation, plus the RM and DML baselines.
//
// Score matrices use -infinity as the "never place here" sentinel. Finite
// entries are z-normalized so that the two predictors are on one scale.

#ifndef EDGEALLOC_COOP_HPP_
#define EDGEALLOC_COOP_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "edgealloc/environment.hpp"
#include "edgealloc/features.hpp"
#include "edgealloc/qpolicy.hpp"
#include "edgealloc/types.hpp"

namespace edgealloc {

inline constexpr double kExcluded = -std::numeric_limits<double>::infinity();

enum class ScoreSource { kCrl, kSvm, kCombined };

struct ScoreMatrix {
  Eigen::MatrixXd scores;  // N x M
  ScoreSource source = ScoreSource::kCombined;
};

class EnsembleWeights {
 public:
  // Throws std::invalid_argument unless both lie in [0,1] and sum to 1
  // within 1e-12.
  EnsembleWeights(double w1, double w2);
  static EnsembleWeights crl_only() { return {1.0, 0.0}; }

  double w1() const { return w1_; }
  double w2() const { return w2_; }

  friend bool operator==(const EnsembleWeights&, const EnsembleWeights&) = default;

 private:
  double w1_;
  double w2_;
};

// Scores Q(s_p, j) where s_p is the first state of the greedy rollout whose
// cursor sits on device p. A cell is excluded when p is never reached, j was
// already placed by then, or the environment gives j no value on p. Finite
// entries are z-normalized per device column (constant columns become 0).
ScoreMatrix crl_scores(const QPolicy& policy, const EnvironmentMatrix& env,
                       const Instance& instance);

// Per-task w^T x, z-normalized over tasks and broadcast to every device.
ScoreMatrix svm_scores(const SvmModel& model,
                       std::span<const TaskFeatureRow> rows,
                       std::size_t n_devices);

// w1 * s1 + w2 * s2; an excluded cell in either input stays excluded.
ScoreMatrix combine(const ScoreMatrix& s1, const ScoreMatrix& s2,
                    const EnsembleWeights& w);

// Repeatedly assigns the highest finite feasible cell (ties: lowest task,
// then lowest device) until no finite feasible cell remains.
AllocationMatrix project_feasible(const ScoreMatrix& scores,
                                  const Instance& instance);

AllocationMatrix allocate_dcta(const QPolicy& policy, const SvmModel& model,
                               const EnvironmentMatrix& env,
                               std::span<const TaskFeatureRow> rows,
                               const Instance& instance,
                               const EnsembleWeights& w);

struct ValidationCase {
  Instance instance;
  ScoreMatrix crl;
  ScoreMatrix svm;
  // Overall merit achieved by an allocation of `instance`.
  std::function<double(const AllocationMatrix&)> merit;
};

// w1 over {1.0, 0.9, ..., 0.0}; keeps the first strict improvement of the
// mean merit, so ties resolve to the larger w1. Throws on an empty set.
EnsembleWeights tune_weights(std::span<const ValidationCase> cases);

// Random order, uniformly random device, drop when it does not fit.
AllocationMatrix allocate_rm(const Instance& instance, std::uint64_t seed);

// Input order, feasible device with the most remaining time (ties: lowest
// index), drop when none fits.
AllocationMatrix allocate_dml(const Instance& instance);

}  // namespace edgealloc

#endif  // EDGEALLOC_COOP_HPP_

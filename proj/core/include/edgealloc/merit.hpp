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

// Task importance, overall merit and the TATIM constraint checker.

#ifndef EDGEALLOC_MERIT_HPP_
#define EDGEALLOC_MERIT_HPP_

#include <functional>
#include <span>
#include <vector>

#include "edgealloc/types.hpp"

namespace edgealloc {

/// Overall merit of a decision whose cost is `achieved` against the ideal
/// (minimum) cost: 1 - |ideal - achieved| / ideal. Not clamped; it goes
/// negative once the achieved cost exceeds twice the ideal.
/// Throws std::domain_error unless ideal > 0.
double overall_merit(double achieved, double ideal);

/// Merit drop caused by excluding a task. Negative for harmful tasks.
double task_importance(double merit_full, double merit_without);

/// Leave-one-out importance of each of `n` tasks. `merit` evaluates the
/// merit function on a subset given as an inclusion mask.
std::vector<double> leave_one_out_importances(
    std::size_t n,
    const std::function<double(std::span<const bool> included)>& merit);

/// Importance-weighted learning objective sum_j sum_p I_j * L_j * u_jp.
double weighted_mtl_objective(const TaskSet& tasks,
                              const AllocationMatrix& alloc);

/// TATIM objective sum_j sum_p I_j * u_jp, summed in task order.
double selected_importance(const TaskSet& tasks, const AllocationMatrix& alloc);

enum class AssignmentRule {
  kAtMostOne,   // select-or-drop (default)
  kExactlyOne,  // every task must be placed
};

struct FeasibilityReport {
  bool feasible = true;
  bool assignment_ok = true;
  bool time_ok = true;
  bool capacity_ok = true;
  std::vector<double> time_slack_s;    // T - sum_j t_j u_jp, per device
  std::vector<double> capacity_slack;  // V_p - sum_j v_j u_jp, per device
};

/// Checks the assignment rule, the per-device deadline and the per-device
/// resource capacity. Infeasibility is reported, never thrown; only a shape
/// mismatch throws std::invalid_argument.
FeasibilityReport check_feasible(
    const Instance& instance, const AllocationMatrix& alloc,
    AssignmentRule rule = AssignmentRule::kAtMostOne);

}  // namespace edgealloc

#endif  // EDGEALLOC_MERIT_HPP_

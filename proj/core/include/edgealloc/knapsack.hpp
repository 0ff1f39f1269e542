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

// Solvers for TATIM viewed as a 0-1 multiple knapsack with two budgets per
// device (deadline and resource capacity):
//
//   max  sum_j sum_p I_j u_jp
//   s.t. sum_p u_jp <= 1,  sum_j t_j u_jp <= T,  sum_j v_j u_jp <= V_p.
//
// All solvers drop tasks with I_j <= 0 up front. The exact solvers return the
// optimum whose per-task code vector (device index, or M for "dropped") is
// lexicographically smallest, which makes the two exact solvers agree
// allocation-for-allocation and not just in objective.

#ifndef EDGEALLOC_KNAPSACK_HPP_
#define EDGEALLOC_KNAPSACK_HPP_

#include <cstdint>

#include "edgealloc/types.hpp"

namespace edgealloc {

struct SolveResult {
  AllocationMatrix allocation;
  double objective = 0.0;  // sum of selected importances, task order
  bool optimal = false;
  std::int64_t nodes_explored = 0;
};

inline constexpr std::size_t kBruteForceMaxTasks = 14;
inline constexpr std::size_t kBruteForceMaxDevices = 3;

// Exhaustive search over all (M+1)^N code vectors. Throws std::length_error
// above kBruteForceMaxTasks tasks or kBruteForceMaxDevices devices.
SolveResult solve_bruteforce(const Instance& instance);

// Depth-first branch and bound with a per-device fractional relaxation bound.
SolveResult solve_branch_bound(const Instance& instance);

// Density-ordered greedy heuristic; optimal is always false.
SolveResult solve_greedy_density(const Instance& instance);

}  // namespace edgealloc

#endif  // EDGEALLOC_KNAPSACK_HPP_

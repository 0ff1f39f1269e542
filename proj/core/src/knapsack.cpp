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

#include "edgealloc/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgealloc/merit.hpp"

namespace edgealloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Indices of tasks with strictly positive importance, in task order.
std::vector<std::size_t> positive_tasks(const TaskSet& tasks) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    if (tasks[j].importance > 0.0) out.push_back(j);
  }
  return out;
}

double tie_tolerance(const TaskSet& tasks) {
  double total = 0.0;
  for (const Task& t : tasks) total += std::max(t.importance, 0.0);
  return 1e-12 * std::max(1.0, total);
}

SolveResult finish(const Instance& instance, const std::vector<std::size_t>& codes,
                   bool optimal, std::int64_t nodes) {
  SolveResult result;
  result.allocation =
      AllocationMatrix(instance.n_tasks(), instance.n_devices());
  for (std::size_t j = 0; j < codes.size(); ++j) {
    if (codes[j] < instance.n_devices()) result.allocation.assign(j, codes[j]);
  }
  result.objective = selected_importance(instance.tasks, result.allocation);
  result.optimal = optimal;
  result.nodes_explored = nodes;
  return result;
}

// Shared state of the two exact searches. Loads are carried per depth as
// prefix sums in task order, so a leaf's loads are bit-identical to what
// check_feasible computes.
class ExactSearch {
 public:
  explicit ExactSearch(const Instance& instance)
      : inst_(instance),
        items_(positive_tasks(instance.tasks)),
        m_(instance.n_devices()),
        tol_(tie_tolerance(instance.tasks)),
        codes_(instance.n_tasks(), instance.n_devices()),
        best_codes_(codes_),
        time_(m_, 0.0),
        cap_(m_, 0.0) {}

  SolveResult run(bool use_bound) {
    use_bound_ = use_bound;
    if (use_bound_) prepare_bound();
    visit(0, 0.0);
    return finish(inst_, best_codes_, true, nodes_);
  }

 private:
  void visit(std::size_t depth, double objective) {
    ++nodes_;
    if (depth == items_.size()) {
      if (objective > best_ + tol_) {
        best_ = objective;
        best_codes_ = codes_;
      }
      return;
    }
    if (use_bound_ && best_ > -kInf) {
      const double bound = objective + remaining_bound(depth);
      const double slack = 1e-9 * std::max(1.0, std::abs(bound));
      if (bound + slack <= best_ + tol_) return;
    }
    const std::size_t j = items_[depth];
    const Task& task = inst_.tasks[j];
    for (std::size_t p = 0; p < m_; ++p) {
      const double t = time_[p] + task.exec_time_s;
      const double v = cap_[p] + task.resource_demand;
      if (!fits_budget(t, inst_.deadline_s) ||
          !fits_budget(v, inst_.devices[p].capacity)) {
        continue;
      }
      const double saved_t = time_[p];
      const double saved_v = cap_[p];
      time_[p] = t;
      cap_[p] = v;
      codes_[j] = p;
      visit(depth + 1, objective + task.importance);
      time_[p] = saved_t;
      cap_[p] = saved_v;
    }
    codes_[j] = m_;
    visit(depth + 1, objective);
  }

  void prepare_bound() {
    by_time_ = items_;
    by_cap_ = items_;
    const auto density = [&](std::size_t j, double weight) {
      return weight > 0.0 ? inst_.tasks[j].importance / weight : kInf;
    };
    std::stable_sort(by_time_.begin(), by_time_.end(), [&](auto a, auto b) {
      return density(a, inst_.tasks[a].exec_time_s) >
             density(b, inst_.tasks[b].exec_time_s);
    });
    std::stable_sort(by_cap_.begin(), by_cap_.end(), [&](auto a, auto b) {
      return density(a, inst_.tasks[a].resource_demand) >
             density(b, inst_.tasks[b].resource_demand);
    });
    position_.assign(inst_.n_tasks(), 0);
    for (std::size_t k = 0; k < items_.size(); ++k) position_[items_[k]] = k;
  }

  // Fractional knapsack over the undecided items that individually fit on
  // device p, using one budget dimension.
  double fractional(std::size_t depth, std::size_t p, bool time_dim) const {
    const auto& order = time_dim ? by_time_ : by_cap_;
    const double budget = time_dim ? inst_.deadline_s - time_[p]
                                   : inst_.devices[p].capacity - cap_[p];
    double left = std::max(budget, 0.0);
    double value = 0.0;
    for (std::size_t j : order) {
      if (position_[j] < depth) continue;
      const Task& task = inst_.tasks[j];
      if (!fits_budget(time_[p] + task.exec_time_s, inst_.deadline_s) ||
          !fits_budget(cap_[p] + task.resource_demand,
                       inst_.devices[p].capacity)) {
        continue;
      }
      const double w = time_dim ? task.exec_time_s : task.resource_demand;
      if (w <= left) {
        value += task.importance;
        left -= w;
      } else {
        value += task.importance * (left / w);
        break;
      }
    }
    return value;
  }

  double remaining_bound(std::size_t depth) const {
    double rest = 0.0;
    for (std::size_t k = depth; k < items_.size(); ++k) {
      rest += inst_.tasks[items_[k]].importance;
    }
    double per_device = 0.0;
    for (std::size_t p = 0; p < m_; ++p) {
      per_device += std::min(fractional(depth, p, true),
                             fractional(depth, p, false));
    }
    return std::min(rest, per_device);
  }

  const Instance& inst_;
  std::vector<std::size_t> items_;
  std::size_t m_;
  double tol_;
  std::vector<std::size_t> codes_;
  std::vector<std::size_t> best_codes_;
  std::vector<double> time_;
  std::vector<double> cap_;
  double best_ = -kInf;
  std::int64_t nodes_ = 0;
  bool use_bound_ = false;
  std::vector<std::size_t> by_time_;
  std::vector<std::size_t> by_cap_;
  std::vector<std::size_t> position_;
};

void require_valid(const Instance& instance) {
  validate(instance.tasks);
  validate(instance.devices);
  if (!(instance.deadline_s >= 0.0)) {
    throw std::invalid_argument("deadline must be nonnegative");
  }
}

double ratio(double used, double budget) {
  if (used == 0.0) return 0.0;
  return budget > 0.0 ? used / budget : kInf;
}

}  // namespace

SolveResult solve_bruteforce(const Instance& instance) {
  require_valid(instance);
  if (instance.n_tasks() > kBruteForceMaxTasks ||
      instance.n_devices() > kBruteForceMaxDevices) {
    throw std::length_error(
        "solve_bruteforce: instance too large (" +
        std::to_string(instance.n_tasks()) + " tasks, " +
        std::to_string(instance.n_devices()) + " devices; limits " +
        std::to_string(kBruteForceMaxTasks) + "/" +
        std::to_string(kBruteForceMaxDevices) + ")");
  }
  // Infeasible prefixes are cut: budgets only grow along a branch, so no
  // completion of an infeasible prefix is feasible.
  return ExactSearch(instance).run(/*use_bound=*/false);
}

SolveResult solve_branch_bound(const Instance& instance) {
  require_valid(instance);
  return ExactSearch(instance).run(/*use_bound=*/true);
}

SolveResult solve_greedy_density(const Instance& instance) {
  require_valid(instance);
  const TaskSet& tasks = instance.tasks;
  const std::size_t m = instance.n_devices();
  std::vector<std::size_t> codes(tasks.size(), m);
  if (m == 0) return finish(instance, codes, false, 0);

  double mean_capacity = 0.0;
  for (const EdgeDevice& d : instance.devices) mean_capacity += d.capacity;
  mean_capacity /= static_cast<double>(m);

  std::vector<std::size_t> order = positive_tasks(tasks);
  std::vector<double> density(tasks.size(), 0.0);
  for (std::size_t j : order) {
    const double load =
        std::max(ratio(tasks[j].exec_time_s, instance.deadline_s),
                 ratio(tasks[j].resource_demand, mean_capacity));
    density[j] = load > 0.0 ? tasks[j].importance / load : kInf;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return density[a] > density[b]; });

  std::vector<double> time(m, 0.0);
  std::vector<double> cap(m, 0.0);
  std::int64_t steps = 0;
  for (std::size_t j : order) {
    ++steps;
    std::size_t best = m;
    double best_slack = -kInf;
    for (std::size_t p = 0; p < m; ++p) {
      if (!fits_budget(time[p] + tasks[j].exec_time_s, instance.deadline_s) ||
          !fits_budget(cap[p] + tasks[j].resource_demand,
                       instance.devices[p].capacity)) {
        continue;
      }
      const double slack = instance.deadline_s - time[p];
      if (slack > best_slack) {
        best_slack = slack;
        best = p;
      }
    }
    if (best == m) continue;
    time[best] += tasks[j].exec_time_s;
    cap[best] += tasks[j].resource_demand;
    codes[j] = best;
  }
  return finish(instance, codes, false, steps);
}

}  // namespace edgealloc

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

#include "edgealloc/merit.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace edgealloc {

namespace {

void require_shape(const TaskSet& tasks, std::size_t n_devices,
                   const AllocationMatrix& alloc) {
  if (alloc.n_tasks() != tasks.size() || alloc.n_devices() != n_devices) {
    throw std::invalid_argument("allocation shape does not match instance");
  }
}

}  // namespace

double overall_merit(double achieved, double ideal) {
  if (!(ideal > 0.0)) {
    throw std::domain_error("overall_merit: ideal performance must be > 0");
  }
  return 1.0 - std::abs(ideal - achieved) / ideal;
}

double task_importance(double merit_full, double merit_without) {
  return merit_full - merit_without;
}

std::vector<double> leave_one_out_importances(
    std::size_t n,
    const std::function<double(std::span<const bool> included)>& merit) {
  // std::vector<bool> has no contiguous storage, hence the raw array.
  auto mask = std::make_unique<bool[]>(n);
  std::fill_n(mask.get(), n, true);
  const double full = merit(std::span<const bool>(mask.get(), n));
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    mask[j] = false;
    out[j] = task_importance(full, merit(std::span<const bool>(mask.get(), n)));
    mask[j] = true;
  }
  return out;
}

double weighted_mtl_objective(const TaskSet& tasks,
                              const AllocationMatrix& alloc) {
  require_shape(tasks, alloc.n_devices(), alloc);
  double total = 0.0;
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    for (std::size_t p = 0; p < alloc.n_devices(); ++p) {
      if (alloc.at(j, p)) {
        total += tasks[j].importance * tasks[j].learning_loss;
      }
    }
  }
  return total;
}

double selected_importance(const TaskSet& tasks,
                           const AllocationMatrix& alloc) {
  require_shape(tasks, alloc.n_devices(), alloc);
  double total = 0.0;
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    for (std::size_t p = 0; p < alloc.n_devices(); ++p) {
      if (alloc.at(j, p)) total += tasks[j].importance;
    }
  }
  return total;
}

FeasibilityReport check_feasible(const Instance& instance,
                                 const AllocationMatrix& alloc,
                                 AssignmentRule rule) {
  const TaskSet& tasks = instance.tasks;
  const DeviceSet& devices = instance.devices;
  require_shape(tasks, devices.size(), alloc);

  FeasibilityReport report;
  report.time_slack_s.assign(devices.size(), instance.deadline_s);
  report.capacity_slack.resize(devices.size());
  std::vector<double> time_used(devices.size(), 0.0);
  std::vector<double> capacity_used(devices.size(), 0.0);

  for (std::size_t j = 0; j < tasks.size(); ++j) {
    const std::size_t count = alloc.assigned_count(j);
    if (count > 1 || (rule == AssignmentRule::kExactlyOne && count != 1)) {
      report.assignment_ok = false;
    }
    for (std::size_t p = 0; p < devices.size(); ++p) {
      if (!alloc.at(j, p)) continue;
      time_used[p] += tasks[j].exec_time_s;
      capacity_used[p] += tasks[j].resource_demand;
    }
  }
  for (std::size_t p = 0; p < devices.size(); ++p) {
    report.time_slack_s[p] = instance.deadline_s - time_used[p];
    report.capacity_slack[p] = devices[p].capacity - capacity_used[p];
    if (!fits_budget(time_used[p], instance.deadline_s)) report.time_ok = false;
    if (!fits_budget(capacity_used[p], devices[p].capacity)) {
      report.capacity_ok = false;
    }
  }
  report.feasible = report.assignment_ok && report.time_ok && report.capacity_ok;
  return report;
}

}  // namespace edgealloc

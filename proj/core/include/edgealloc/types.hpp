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

#ifndef EDGEALLOC_TYPES_HPP_
#define EDGEALLOC_TYPES_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edgealloc {

// Raised when input files or serialized artifacts cannot be parsed or are
// inconsistent with each other. Numeric precondition violations use the
// standard std::domain_error / std::invalid_argument / std::length_error.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One data-driven learning task.
struct Task {
  int id = 0;
  double exec_time_s = 0.0;      // t_j
  double resource_demand = 0.0;  // v_j
  double importance = 0.0;       // I_j, may be negative before clamping
  std::int64_t data_bits = 0;
  double learning_loss = 0.0;  // L_j, supplied externally

  friend bool operator==(const Task&, const Task&) = default;
};

struct EdgeDevice {
  int id = 0;
  double capacity = 0.0;  // V_p
  double proc_speed_s_per_bit = 0.0;
  double proc_energy_j_per_bit = 0.0;
  double tx_energy_j_per_bit = 0.0;
  double rx_energy_j_per_bit = 0.0;
  double bandwidth_bits_per_s = 0.0;

  friend bool operator==(const EdgeDevice&, const EdgeDevice&) = default;
};

using TaskSet = std::vector<Task>;
using DeviceSet = std::vector<EdgeDevice>;

// Throws std::invalid_argument on negative fields or duplicate ids.
void validate(const TaskSet& tasks);
void validate(const DeviceSet& devices);

// A TATIM instance: tasks, devices and the common per-device deadline T.
struct Instance {
  TaskSet tasks;
  DeviceSet devices;
  double deadline_s = 0.0;

  std::size_t n_tasks() const { return tasks.size(); }
  std::size_t n_devices() const { return devices.size(); }
};

// Binary task-to-device assignment u[j][p]. Devices are addressed by their
// position in the DeviceSet, not by EdgeDevice::id.
class AllocationMatrix {
 public:
  AllocationMatrix() = default;
  AllocationMatrix(std::size_t n_tasks, std::size_t n_devices);

  std::size_t n_tasks() const { return n_tasks_; }
  std::size_t n_devices() const { return n_devices_; }

  bool at(std::size_t task, std::size_t device) const;
  // Raw write; may produce a matrix that violates the one-device-per-task
  // rule so that check_feasible can report it.
  void set(std::size_t task, std::size_t device, bool value);
  // Assigns `task` to `device`, clearing any previous assignment of the task.
  void assign(std::size_t task, std::size_t device);
  void clear(std::size_t task);

  // Device of `task`, or nullopt when dropped. Undefined which one is
  // returned if the task is (infeasibly) assigned more than once.
  std::optional<std::size_t> device_of(std::size_t task) const;
  std::size_t assigned_count(std::size_t task) const;
  std::size_t n_assigned() const;

  // (task, device) pairs in task-major order.
  std::vector<std::pair<std::size_t, std::size_t>> assignment() const;
  // Per-task code: device index, or n_devices() when dropped.
  std::vector<std::size_t> codes() const;

  friend bool operator==(const AllocationMatrix&,
                         const AllocationMatrix&) = default;

 private:
  std::size_t n_tasks_ = 0;
  std::size_t n_devices_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct MeritReport {
  double overall_merit = 0.0;      // OM, <= 1
  double processing_time_s = 0.0;  // PT
  double energy_j = 0.0;           // EC
  int n_tasks_executed = 0;
};

// Relative slack used by every budget comparison in the library so that
// solvers and the feasibility checker agree on boundary cases.
inline constexpr double kBudgetTolerance = 1e-9;

inline bool fits_budget(double used, double budget) {
  const double scale = budget > 1.0 ? budget : 1.0;
  return used <= budget + kBudgetTolerance * scale;
}

}  // namespace edgealloc

#endif  // EDGEALLOC_TYPES_HPP_

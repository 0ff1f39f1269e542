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

#include "edgealloc/types.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace edgealloc {

namespace {

void require_nonnegative(double value, const char* field, int id) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(field) + " must be a finite "
                                "nonnegative value (id " +
                                std::to_string(id) + ")");
  }
}

}  // namespace

void validate(const TaskSet& tasks) {
  std::unordered_set<int> seen;
  for (const Task& t : tasks) {
    require_nonnegative(t.exec_time_s, "exec_time_s", t.id);
    require_nonnegative(t.resource_demand, "resource_demand", t.id);
    require_nonnegative(t.learning_loss, "learning_loss", t.id);
    if (!std::isfinite(t.importance)) {
      throw std::invalid_argument("importance must be finite (task " +
                                  std::to_string(t.id) + ")");
    }
    if (t.data_bits < 0) {
      throw std::invalid_argument("data_bits must be nonnegative (task " +
                                  std::to_string(t.id) + ")");
    }
    if (!seen.insert(t.id).second) {
      throw std::invalid_argument("duplicate task id " + std::to_string(t.id));
    }
  }
}

void validate(const DeviceSet& devices) {
  std::unordered_set<int> seen;
  for (const EdgeDevice& d : devices) {
    require_nonnegative(d.capacity, "capacity", d.id);
    require_nonnegative(d.proc_energy_j_per_bit, "proc_energy_j_per_bit", d.id);
    require_nonnegative(d.tx_energy_j_per_bit, "tx_energy_j_per_bit", d.id);
    require_nonnegative(d.rx_energy_j_per_bit, "rx_energy_j_per_bit", d.id);
    if (!(d.proc_speed_s_per_bit > 0.0) || !(d.bandwidth_bits_per_s > 0.0)) {
      throw std::invalid_argument(
          "proc_speed_s_per_bit and bandwidth_bits_per_s must be positive "
          "(device " + std::to_string(d.id) + ")");
    }
    if (!seen.insert(d.id).second) {
      throw std::invalid_argument("duplicate device id " +
                                  std::to_string(d.id));
    }
  }
}

AllocationMatrix::AllocationMatrix(std::size_t n_tasks, std::size_t n_devices)
    : n_tasks_(n_tasks), n_devices_(n_devices), bits_(n_tasks * n_devices, 0) {}

bool AllocationMatrix::at(std::size_t task, std::size_t device) const {
  return bits_.at(task * n_devices_ + device) != 0;
}

void AllocationMatrix::set(std::size_t task, std::size_t device, bool value) {
  bits_.at(task * n_devices_ + device) = value ? 1 : 0;
}

void AllocationMatrix::assign(std::size_t task, std::size_t device) {
  clear(task);
  set(task, device, true);
}

void AllocationMatrix::clear(std::size_t task) {
  for (std::size_t p = 0; p < n_devices_; ++p) set(task, p, false);
}

std::optional<std::size_t> AllocationMatrix::device_of(std::size_t task) const {
  for (std::size_t p = 0; p < n_devices_; ++p) {
    if (at(task, p)) return p;
  }
  return std::nullopt;
}

std::size_t AllocationMatrix::assigned_count(std::size_t task) const {
  std::size_t count = 0;
  for (std::size_t p = 0; p < n_devices_; ++p) count += at(task, p) ? 1 : 0;
  return count;
}

std::size_t AllocationMatrix::n_assigned() const {
  std::size_t count = 0;
  for (std::uint8_t b : bits_) count += b;
  return count;
}

std::vector<std::pair<std::size_t, std::size_t>>
AllocationMatrix::assignment() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < n_tasks_; ++j) {
    for (std::size_t p = 0; p < n_devices_; ++p) {
      if (at(j, p)) out.emplace_back(j, p);
    }
  }
  return out;
}

std::vector<std::size_t> AllocationMatrix::codes() const {
  std::vector<std::size_t> out(n_tasks_, n_devices_);
  for (std::size_t j = 0; j < n_tasks_; ++j) {
    if (auto p = device_of(j)) out[j] = *p;
  }
  return out;
}

}  // namespace edgealloc

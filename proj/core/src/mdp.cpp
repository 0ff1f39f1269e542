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

#include "edgealloc/mdp.hpp"

#include <stdexcept>
#include <string>

namespace edgealloc {

TatimMdp::TatimMdp(const EnvironmentMatrix& env, const Instance& instance)
    : env_(&env), instance_(&instance) {
  if (static_cast<std::size_t>(env.n_tasks()) != instance.n_tasks() ||
      static_cast<std::size_t>(env.n_devices()) != instance.n_devices()) {
    throw std::invalid_argument("environment shape does not match instance");
  }
  importance_ = implied_importance(env, instance.devices);
}

MdpState TatimMdp::initial_state() const {
  MdpState s;
  s.selected = AllocationMatrix(n_tasks(), n_devices());
  s.cursor_device = 0;
  s.remaining_time.assign(n_devices(), instance_->deadline_s);
  s.remaining_capacity.resize(n_devices());
  for (std::size_t p = 0; p < n_devices(); ++p) {
    s.remaining_capacity[p] = instance_->devices[p].capacity;
  }
  return s;
}

namespace {

bool fits_remaining(double remaining, double budget, double demand) {
  // Compare on used amounts so that boundary cases match check_feasible.
  return fits_budget((budget - remaining) + demand, budget);
}

}  // namespace

bool TatimMdp::can_place(const MdpState& state, std::size_t task) const {
  const std::size_t p = state.cursor_device;
  if (p >= n_devices() || task >= n_tasks()) return false;
  if (state.selected.device_of(task)) return false;
  const Task& t = instance_->tasks[task];
  return fits_remaining(state.remaining_time[p], instance_->deadline_s,
                        t.exec_time_s) &&
         fits_remaining(state.remaining_capacity[p],
                        instance_->devices[p].capacity, t.resource_demand);
}

bool TatimMdp::is_terminal(const MdpState& state) const {
  if (state.cursor_device >= n_devices()) return true;
  for (std::size_t j = 0; j < n_tasks(); ++j) {
    if (state.selected.device_of(j)) continue;
    const Task& t = instance_->tasks[j];
    for (std::size_t p = state.cursor_device; p < n_devices(); ++p) {
      if (fits_remaining(state.remaining_time[p], instance_->deadline_s,
                         t.exec_time_s) &&
          fits_remaining(state.remaining_capacity[p],
                         instance_->devices[p].capacity, t.resource_demand)) {
        return false;
      }
    }
  }
  return true;
}

double TatimMdp::terminal_reward(const MdpState& state) const {
  double total = 0.0;
  for (std::size_t j = 0; j < n_tasks(); ++j) {
    if (state.selected.device_of(j)) total += importance_[j];
  }
  return total;
}

StepResult TatimMdp::step(const MdpState& state, std::size_t action) const {
  if (action > n_tasks()) {
    throw std::out_of_range("mdp action " + std::to_string(action) +
                            " outside [0, " + std::to_string(n_tasks()) + "]");
  }
  StepResult result{state, 0.0, false};
  MdpState& next = result.next;
  if (action < n_tasks() && can_place(state, action)) {
    const std::size_t p = state.cursor_device;
    const Task& t = instance_->tasks[action];
    next.selected.assign(action, p);
    next.remaining_time[p] -= t.exec_time_s;
    next.remaining_capacity[p] -= t.resource_demand;
  } else {
    next.cursor_device = std::min(state.cursor_device + 1, n_devices());
  }
  result.done = is_terminal(next);
  if (result.done) result.reward = terminal_reward(next);
  return result;
}

StepResult mdp_step(const MdpState& state, std::size_t action,
                    const EnvironmentMatrix& env, const Instance& instance) {
  return TatimMdp(env, instance).step(state, action);
}

}  // namespace edgealloc

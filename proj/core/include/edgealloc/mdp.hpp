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

// The TATIM Markov decision process.
//
// A device cursor walks the devices in order. Actions 0..N-1 place task j on
// the cursor device; action N ("advance") moves the cursor on. A task action
// that cannot be honoured (task already placed, or it does not fit the
// cursor device's remaining budgets) behaves exactly like advance, which
// keeps the action space linear in N and guarantees termination within N+M
// steps. The episode ends when the cursor passes the last device or no
// unplaced task fits any device at or after the cursor. The reward is zero
// on every transition except the terminal one, which pays the summed
// importance of the placed tasks. Importances are the ones encoded in the
// environment matrix (see implied_importance), so a mismatched environment
// changes what the agent is rewarded for.

#ifndef EDGEALLOC_MDP_HPP_
#define EDGEALLOC_MDP_HPP_

#include <cstdint>
#include <vector>

#include "edgealloc/environment.hpp"
#include "edgealloc/types.hpp"

namespace edgealloc {

struct MdpState {
  AllocationMatrix selected;  // s_ij
  std::size_t cursor_device = 0;
  std::vector<double> remaining_time;
  std::vector<double> remaining_capacity;

  friend bool operator==(const MdpState&, const MdpState&) = default;
};

struct StepResult {
  MdpState next;
  double reward = 0.0;
  bool done = false;
};

class TatimMdp {
 public:
  // Throws std::invalid_argument when env and instance shapes disagree.
  TatimMdp(const EnvironmentMatrix& env, const Instance& instance);

  std::size_t n_tasks() const { return instance_->n_tasks(); }
  std::size_t n_devices() const { return instance_->n_devices(); }
  std::size_t n_actions() const { return n_tasks() + 1; }
  std::size_t advance_action() const { return n_tasks(); }

  const Instance& instance() const { return *instance_; }
  const EnvironmentMatrix& environment() const { return *env_; }
  const std::vector<double>& reward_importance() const { return importance_; }

  MdpState initial_state() const;
  bool is_terminal(const MdpState& state) const;
  // Whether task j can be placed on the cursor device right now.
  bool can_place(const MdpState& state, std::size_t task) const;
  // Throws std::out_of_range for action > N.
  StepResult step(const MdpState& state, std::size_t action) const;
  // Summed reward importance of the placed tasks, in task order.
  double terminal_reward(const MdpState& state) const;

 private:
  const EnvironmentMatrix* env_;
  const Instance* instance_;
  std::vector<double> importance_;
};

StepResult mdp_step(const MdpState& state, std::size_t action,
                    const EnvironmentMatrix& env, const Instance& instance);

}  // namespace edgealloc

#endif  // EDGEALLOC_MDP_HPP_

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

// Clustered reinforcement learning allocator: Q-learning on the TATIM MDP of
// a (retrieved) environment, then a greedy rollout from the empty state.

#ifndef EDGEALLOC_CRL_HPP_
#define EDGEALLOC_CRL_HPP_

#include <cstdint>
#include <vector>

#include "edgealloc/environment.hpp"
#include "edgealloc/mdp.hpp"
#include "edgealloc/qpolicy.hpp"

namespace edgealloc {

struct CrlHyperParams {
  QMode mode = QMode::kTabular;
  double discount = 1.0;
  // Defaults to 0.1 for tabular and 1e-3 for approximate mode when <= 0.
  double learning_rate = 0.0;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Fraction of the episode budget over which epsilon decays linearly.
  double epsilon_decay_fraction = 0.5;
  std::size_t episodes = 20000;
  // Greedy rollout evaluated every eval_every episodes; training stops once
  // the best return has not improved for `patience` episodes (0 disables).
  std::size_t eval_every = 50;
  std::size_t patience = 0;
  std::size_t hidden_units = 64;
};

struct CrlTrainResult {
  QPolicy policy;  // snapshot with the best greedy-rollout return
  double best_return = 0.0;
  std::size_t episodes_run = 0;
  std::vector<double> td_loss;  // mean TD loss per evaluation window
};

/// Epsilon-greedy Q-learning episodes on the MDP defined by
/// `env` and `instance`. Deterministic given `seed`.
CrlTrainResult train_crl(const EnvironmentMatrix& env, const Instance& instance,
                         const CrlHyperParams& params, std::uint64_t seed);

/// States visited by the greedy (epsilon = 0) rollout, from s0 to terminal.
std::vector<MdpState> greedy_trajectory(const QPolicy& policy,
                                        const TatimMdp& mdp);

/// Terminal selection of the greedy rollout. Always feasible.
AllocationMatrix allocate_crl(const QPolicy& policy,
                              const EnvironmentMatrix& env,
                              const Instance& instance);

/// Return (terminal reward) of the greedy rollout.
double greedy_return(const QPolicy& policy, const TatimMdp& mdp);

}  // namespace edgealloc

#endif  // EDGEALLOC_CRL_HPP_

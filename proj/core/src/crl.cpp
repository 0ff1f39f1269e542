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

#include "edgealloc/crl.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace edgealloc {

namespace {

QPolicy initial_policy(const TatimMdp& mdp, const CrlHyperParams& params,
                       std::uint64_t seed) {
  if (params.mode == QMode::kTabular) {
    const double lr = params.learning_rate > 0.0 ? params.learning_rate : 0.1;
    return QPolicy::tabular(mdp.n_actions(), params.discount,
                            params.epsilon_start, lr);
  }
  const double lr = params.learning_rate > 0.0 ? params.learning_rate : 1e-3;
  QNetwork net(encoded_state_size(mdp.n_tasks(), mdp.n_devices()),
               params.hidden_units, mdp.n_actions(), seed ^ 0x9e3779b97f4a7c15ULL);
  return QPolicy::approximate(std::move(net), params.discount,
                              params.epsilon_start, lr);
}

double epsilon_at(const CrlHyperParams& params, std::size_t episode) {
  const double horizon =
      params.epsilon_decay_fraction * static_cast<double>(params.episodes);
  const double frac =
      horizon > 0.0 ? std::min(1.0, static_cast<double>(episode) / horizon) : 1.0;
  return params.epsilon_start + (params.epsilon_end - params.epsilon_start) * frac;
}

}  // namespace

std::vector<MdpState> greedy_trajectory(const QPolicy& policy,
                                        const TatimMdp& mdp) {
  std::vector<MdpState> states{mdp.initial_state()};
  while (!mdp.is_terminal(states.back())) {
    const std::size_t a = policy.greedy_action(states.back(), mdp.environment());
    states.push_back(mdp.step(states.back(), a).next);
  }
  return states;
}

double greedy_return(const QPolicy& policy, const TatimMdp& mdp) {
  const auto states = greedy_trajectory(policy, mdp);
  // A rollout that never leaves s0 collects nothing; otherwise the last
  // transition was terminal and paid the selection's importance.
  return states.size() == 1 ? 0.0 : mdp.terminal_reward(states.back());
}

AllocationMatrix allocate_crl(const QPolicy& policy,
                              const EnvironmentMatrix& env,
                              const Instance& instance) {
  const TatimMdp mdp(env, instance);
  return greedy_trajectory(policy, mdp).back().selected;
}

CrlTrainResult train_crl(const EnvironmentMatrix& env, const Instance& instance,
                         const CrlHyperParams& params, std::uint64_t seed) {
  if (params.episodes == 0) {
    throw std::invalid_argument("train_crl: episode budget must be > 0");
  }
  const TatimMdp mdp(env, instance);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  QPolicy policy = initial_policy(mdp, params, seed);
  CrlTrainResult result{policy, greedy_return(policy, mdp), 0, {}};
  const std::size_t eval_every = std::max<std::size_t>(1, params.eval_every);
  std::size_t since_improvement = 0;
  std::vector<std::size_t> valid;
  double window_loss = 0.0;
  std::size_t window_updates = 0;

  for (std::size_t episode = 0; episode < params.episodes; ++episode) {
    const double epsilon = epsilon_at(params, episode);
    policy.set_epsilon(std::clamp(epsilon, 0.0, 1.0));
    MdpState state = mdp.initial_state();
    while (!mdp.is_terminal(state)) {
      std::size_t action = mdp.advance_action();
      if (unit(rng) < policy.epsilon()) {
        // Explore among placeable tasks worth something here, and advance.
        valid.clear();
        const auto p = static_cast<Eigen::Index>(state.cursor_device);
        for (std::size_t j = 0; j < mdp.n_tasks(); ++j) {
          if (mdp.can_place(state, j) &&
              env.values(static_cast<Eigen::Index>(j), p) > 0.0) {
            valid.push_back(j);
          }
        }
        valid.push_back(mdp.advance_action());
        action = valid[static_cast<std::size_t>(unit(rng) * static_cast<double>(valid.size()))];
      } else {
        action = policy.greedy_action(state, env);
      }
      StepResult step = mdp.step(state, action);
      Transition t{std::move(state), action, step.reward, step.next, step.done};
      window_loss += policy.update(t, env);
      ++window_updates;
      state = std::move(step.next);
    }
    result.episodes_run = episode + 1;

    if ((episode + 1) % eval_every == 0 || episode + 1 == params.episodes) {
      result.td_loss.push_back(
          window_updates ? window_loss / static_cast<double>(window_updates) : 0.0);
      window_loss = 0.0;
      window_updates = 0;
      const double ret = greedy_return(policy, mdp);
      if (ret > result.best_return) {
        result.best_return = ret;
        result.policy = policy;
        since_improvement = 0;
      } else {
        since_improvement += eval_every;
      }
      if (params.patience > 0 && since_improvement >= params.patience) break;
    }
  }
  result.policy.set_epsilon(0.0);
  return result;
}

}  // namespace edgealloc

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

// Action-value functions for the TATIM MDP: an exact lookup table keyed by
// the placed-task bits plus the cursor, and a one-hidden-layer tanh network.

#ifndef EDGEALLOC_QPOLICY_HPP_
#define EDGEALLOC_QPOLICY_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "edgealloc/mdp.hpp"

namespace edgealloc {

enum class QMode { kTabular, kApproximate };

// Packed placed-task bits (task-major) followed by the cursor index.
using StateKey = std::string;
StateKey state_key(const MdpState& state);
std::string state_key_hex(const StateKey& key);
StateKey state_key_from_hex(const std::string& hex);

// Network input: placed-task bits, one-hot cursor, environment values scaled
// by their maximum.
Eigen::VectorXd encode_state(const MdpState& state, const EnvironmentMatrix& env);
std::size_t encoded_state_size(std::size_t n_tasks, std::size_t n_devices);

class QNetwork {
 public:
  QNetwork() = default;
  // Xavier-uniform weights from `seed`, zero biases.
  QNetwork(std::size_t inputs, std::size_t hidden, std::size_t outputs,
           std::uint64_t seed);

  std::size_t inputs() const { return static_cast<std::size_t>(w1_.cols()); }
  std::size_t hidden() const { return static_cast<std::size_t>(w1_.rows()); }
  std::size_t outputs() const { return static_cast<std::size_t>(w2_.rows()); }
  std::size_t parameter_count() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // Squared TD error (target - Q(x)[action])^2 with the target held fixed,
  // and its gradient with respect to parameters().
  double td_loss(const Eigen::VectorXd& x, std::size_t action,
                 double target) const;
  Eigen::VectorXd td_gradient(const Eigen::VectorXd& x, std::size_t action,
                              double target) const;

  // Flattened as W1 (row-major), b1, W2 (row-major), b2.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

 private:
  Eigen::MatrixXd w1_;
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;
  Eigen::VectorXd b2_;
};

struct Transition {
  MdpState state;
  std::size_t action = 0;
  double reward = 0.0;
  MdpState next;
  bool done = false;
};

class QPolicy {
 public:
  using Table = std::unordered_map<StateKey, std::vector<double>>;

  // Throws std::invalid_argument unless discount, epsilon in [0,1], lr > 0.
  static QPolicy tabular(std::size_t n_actions, double discount,
                         double epsilon, double lr);
  static QPolicy approximate(QNetwork network, double discount, double epsilon,
                             double lr);

  QMode mode() const { return mode_; }
  std::size_t n_actions() const { return n_actions_; }
  double discount() const { return discount_; }
  double epsilon() const { return epsilon_; }
  double learning_rate() const { return lr_; }
  void set_epsilon(double epsilon);

  const Table& table() const { return table_; }
  const QNetwork& network() const { return network_; }
  void set_q(const StateKey& key, std::size_t action, double value);

  std::vector<double> q_values(const MdpState& state,
                               const EnvironmentMatrix& env) const;
  // argmax Q; ties go to the advance action, then to the lowest task index.
  std::size_t greedy_action(const MdpState& state,
                            const EnvironmentMatrix& env) const;

  // One Q-learning step; returns the squared TD error before the update.
  double update(const Transition& t, const EnvironmentMatrix& env);

  std::string to_json() const;
  // Throws DataError on malformed input.
  static QPolicy from_json(const std::string& text);

  friend bool operator==(const QPolicy& a, const QPolicy& b);

 private:
  QPolicy() = default;

  QMode mode_ = QMode::kTabular;
  std::size_t n_actions_ = 0;
  double discount_ = 1.0;
  double epsilon_ = 0.0;
  double lr_ = 0.1;
  Table table_;
  QNetwork network_;
};

double q_update(QPolicy& policy, const Transition& t,
                const EnvironmentMatrix& env);

}  // namespace edgealloc

#endif  // EDGEALLOC_QPOLICY_HPP_

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

#include "edgealloc/qpolicy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace edgealloc {

using nlohmann::json;

StateKey state_key(const MdpState& state) {
  const std::size_t n = state.selected.n_tasks();
  const std::size_t m = state.selected.n_devices();
  StateKey key((n * m + 7) / 8 + 2, '\0');
  std::size_t bit = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < m; ++p, ++bit) {
      if (state.selected.at(j, p)) {
        key[bit / 8] = static_cast<char>(key[bit / 8] | (1 << (bit % 8)));
      }
    }
  }
  const std::size_t tail = key.size() - 2;
  key[tail] = static_cast<char>(state.cursor_device & 0xff);
  key[tail + 1] = static_cast<char>((state.cursor_device >> 8) & 0xff);
  return key;
}

std::string state_key_hex(const StateKey& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(key.size() * 2);
  for (char c : key) {
    const auto b = static_cast<unsigned char>(c);
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

StateKey state_key_from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw DataError("bad state key: " + hex);
  const auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw DataError("bad state key: " + hex);
  };
  StateKey key(hex.size() / 2, '\0');
  for (std::size_t i = 0; i < key.size(); ++i) {
    key[i] = static_cast<char>(nibble(hex[2 * i]) * 16 + nibble(hex[2 * i + 1]));
  }
  return key;
}

std::size_t encoded_state_size(std::size_t n_tasks, std::size_t n_devices) {
  return 2 * n_tasks * n_devices + n_devices;
}

Eigen::VectorXd encode_state(const MdpState& state,
                             const EnvironmentMatrix& env) {
  const std::size_t n = state.selected.n_tasks();
  const std::size_t m = state.selected.n_devices();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(encoded_state_size(n, m)));
  Eigen::Index k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < m; ++p) x(k++) = state.selected.at(j, p) ? 1.0 : 0.0;
  }
  if (state.cursor_device < m) {
    x(k + static_cast<Eigen::Index>(state.cursor_device)) = 1.0;
  }
  k += static_cast<Eigen::Index>(m);
  const double scale = env.values.size() > 0 ? env.values.maxCoeff() : 0.0;
  for (Eigen::Index j = 0; j < env.values.rows(); ++j) {
    for (Eigen::Index p = 0; p < env.values.cols(); ++p) {
      x(k++) = scale > 0.0 ? env.values(j, p) / scale : 0.0;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// QNetwork

QNetwork::QNetwork(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto init = [&](Eigen::MatrixXd& w, std::size_t rows, std::size_t cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    w.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
  };
  init(w1_, hidden, inputs);
  init(w2_, outputs, hidden);
  b1_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden));
  b2_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outputs));
}

std::size_t QNetwork::parameter_count() const {
  return static_cast<std::size_t>(w1_.size() + b1_.size() + w2_.size() +
                                  b2_.size());
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd h = (w1_ * x + b1_).array().tanh().matrix();
  return w2_ * h + b2_;
}

double QNetwork::td_loss(const Eigen::VectorXd& x, std::size_t action,
                         double target) const {
  const double err = target - forward(x)(static_cast<Eigen::Index>(action));
  return err * err;
}

Eigen::VectorXd QNetwork::td_gradient(const Eigen::VectorXd& x,
                                      std::size_t action, double target) const {
  const auto a = static_cast<Eigen::Index>(action);
  const Eigen::VectorXd h = (w1_ * x + b1_).array().tanh().matrix();
  const double q = w2_.row(a).dot(h) + b2_(a);
  const double g = -2.0 * (target - q);  // dL/dq_a

  const Eigen::VectorXd dz =
      (g * w2_.row(a).transpose()).cwiseProduct(
          (1.0 - h.array().square()).matrix());

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w1_.cols(); ++c) grad(k++) = dz(r) * x(c);
  }
  for (Eigen::Index r = 0; r < b1_.size(); ++r) grad(k++) = dz(r);
  for (Eigen::Index r = 0; r < w2_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w2_.cols(); ++c) {
      grad(k++) = r == a ? g * h(c) : 0.0;
    }
  }
  for (Eigen::Index r = 0; r < b2_.size(); ++r) grad(k++) = r == a ? g : 0.0;
  return grad;
}

Eigen::VectorXd QNetwork::parameters() const {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w1_.cols(); ++c) theta(k++) = w1_(r, c);
  }
  for (Eigen::Index r = 0; r < b1_.size(); ++r) theta(k++) = b1_(r);
  for (Eigen::Index r = 0; r < w2_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w2_.cols(); ++c) theta(k++) = w2_(r, c);
  }
  for (Eigen::Index r = 0; r < b2_.size(); ++r) theta(k++) = b2_(r);
  return theta;
}

void QNetwork::set_parameters(const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != parameter_count()) {
    throw std::invalid_argument("QNetwork: parameter vector size mismatch");
  }
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w1_.cols(); ++c) w1_(r, c) = theta(k++);
  }
  for (Eigen::Index r = 0; r < b1_.size(); ++r) b1_(r) = theta(k++);
  for (Eigen::Index r = 0; r < w2_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w2_.cols(); ++c) w2_(r, c) = theta(k++);
  }
  for (Eigen::Index r = 0; r < b2_.size(); ++r) b2_(r) = theta(k++);
}

// ---------------------------------------------------------------------------
// QPolicy

namespace {

void check_rates(double discount, double epsilon, double lr) {
  if (!(discount >= 0.0 && discount <= 1.0)) {
    throw std::invalid_argument("discount must lie in [0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be > 0");
}

}  // namespace

QPolicy QPolicy::tabular(std::size_t n_actions, double discount, double epsilon,
                         double lr) {
  check_rates(discount, epsilon, lr);
  QPolicy p;
  p.mode_ = QMode::kTabular;
  p.n_actions_ = n_actions;
  p.discount_ = discount;
  p.epsilon_ = epsilon;
  p.lr_ = lr;
  return p;
}

QPolicy QPolicy::approximate(QNetwork network, double discount, double epsilon,
                             double lr) {
  check_rates(discount, epsilon, lr);
  QPolicy p;
  p.mode_ = QMode::kApproximate;
  p.n_actions_ = network.outputs();
  p.discount_ = discount;
  p.epsilon_ = epsilon;
  p.lr_ = lr;
  p.network_ = std::move(network);
  return p;
}

void QPolicy::set_epsilon(double epsilon) {
  check_rates(discount_, epsilon, lr_);
  epsilon_ = epsilon;
}

void QPolicy::set_q(const StateKey& key, std::size_t action, double value) {
  if (mode_ != QMode::kTabular) {
    throw std::logic_error("set_q requires a tabular policy");
  }
  auto& row = table_[key];
  if (row.empty()) row.assign(n_actions_, 0.0);
  row.at(action) = value;
}

std::vector<double> QPolicy::q_values(const MdpState& state,
                                      const EnvironmentMatrix& env) const {
  if (mode_ == QMode::kTabular) {
    const auto it = table_.find(state_key(state));
    if (it == table_.end()) return std::vector<double>(n_actions_, 0.0);
    return it->second;
  }
  const Eigen::VectorXd q = network_.forward(encode_state(state, env));
  return {q.data(), q.data() + q.size()};
}

std::size_t QPolicy::greedy_action(const MdpState& state,
                                   const EnvironmentMatrix& env) const {
  const std::vector<double> q = q_values(state, env);
  const std::size_t advance = n_actions_ - 1;
  std::size_t best = advance;
  for (std::size_t a = 0; a < advance; ++a) {
    if (q[a] > q[best]) best = a;
  }
  return best;
}

double QPolicy::update(const Transition& t, const EnvironmentMatrix& env) {
  double target = t.reward;
  if (!t.done && discount_ > 0.0) {
    const std::vector<double> next = q_values(t.next, env);
    target += discount_ * *std::max_element(next.begin(), next.end());
  }
  if (mode_ == QMode::kTabular) {
    auto& row = table_[state_key(t.state)];
    if (row.empty()) row.assign(n_actions_, 0.0);
    double& q = row.at(t.action);
    const double err = target - q;
    q += lr_ * err;
    return err * err;
  }
  const Eigen::VectorXd x = encode_state(t.state, env);
  const double loss = network_.td_loss(x, t.action, target);
  network_.set_parameters(network_.parameters() -
                          lr_ * network_.td_gradient(x, t.action, target));
  return loss;
}

double q_update(QPolicy& policy, const Transition& t,
                const EnvironmentMatrix& env) {
  return policy.update(t, env);
}

bool operator==(const QPolicy& a, const QPolicy& b) {
  return a.mode_ == b.mode_ && a.n_actions_ == b.n_actions_ &&
         a.discount_ == b.discount_ && a.epsilon_ == b.epsilon_ &&
         a.lr_ == b.lr_ && a.table_ == b.table_ &&
         a.network_.parameters() == b.network_.parameters();
}

std::string QPolicy::to_json() const {
  json j;
  if (mode_ == QMode::kTabular) {
    j["mode"] = "tabular";
    j["discount"] = discount_;
    j["epsilon"] = epsilon_;
    j["lr"] = lr_;
    j["n_actions"] = n_actions_;
    // Sorted for byte-stable output.
    std::map<std::string, const std::vector<double>*> sorted;
    for (const auto& [key, row] : table_) sorted[state_key_hex(key)] = &row;
    json rows = json::array();
    for (const auto& [hex, row] : sorted) {
      for (std::size_t a = 0; a < row->size(); ++a) {
        rows.push_back(json::array({hex, a, (*row)[a]}));
      }
    }
    j["table"] = std::move(rows);
  } else {
    j["mode"] = "approx";
    j["discount"] = discount_;
    j["epsilon"] = epsilon_;
    j["lr"] = lr_;
    j["arch"] = {network_.inputs(), network_.hidden(), network_.outputs()};
    const Eigen::VectorXd theta = network_.parameters();
    j["weights"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  }
  return j.dump();
}

QPolicy QPolicy::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const std::string mode = j.at("mode").get<std::string>();
    const double discount = j.at("discount").get<double>();
    const double epsilon = j.value("epsilon", 0.0);
    if (mode == "tabular") {
      QPolicy p = tabular(j.at("n_actions").get<std::size_t>(), discount,
                          epsilon, j.value("lr", 0.1));
      for (const auto& row : j.at("table")) {
        p.set_q(state_key_from_hex(row.at(0).get<std::string>()),
                row.at(1).get<std::size_t>(), row.at(2).get<double>());
      }
      return p;
    }
    if (mode == "approx") {
      const auto arch = j.at("arch").get<std::vector<std::size_t>>();
      if (arch.size() != 3) throw DataError("approx policy: arch needs 3 entries");
      QNetwork net(arch[0], arch[1], arch[2], 0);
      const auto w = j.at("weights").get<std::vector<double>>();
      net.set_parameters(Eigen::Map<const Eigen::VectorXd>(
          w.data(), static_cast<Eigen::Index>(w.size())));
      return approximate(std::move(net), discount, epsilon, j.value("lr", 1e-3));
    }
    throw DataError("unknown policy mode '" + mode + "'");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed policy JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid policy JSON: ") + e.what());
  }
}

}  // namespace edgealloc

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

#include "edgealloc/coop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "edgealloc/crl.hpp"
#include "edgealloc/mdp.hpp"

namespace edgealloc {

namespace {

// Running per-device loads for greedy constructions.
class Budgets {
 public:
  explicit Budgets(const Instance& instance)
      : instance_(instance),
        time_(instance.n_devices(), 0.0),
        capacity_(instance.n_devices(), 0.0) {}

  bool fits(std::size_t j, std::size_t p) const {
    const Task& t = instance_.tasks[j];
    return fits_budget(time_[p] + t.exec_time_s, instance_.deadline_s) &&
           fits_budget(capacity_[p] + t.resource_demand,
                       instance_.devices[p].capacity);
  }

  void take(std::size_t j, std::size_t p) {
    time_[p] += instance_.tasks[j].exec_time_s;
    capacity_[p] += instance_.tasks[j].resource_demand;
  }

  double time_slack(std::size_t p) const {
    return instance_.deadline_s - time_[p];
  }

 private:
  const Instance& instance_;
  std::vector<double> time_;
  std::vector<double> capacity_;
};

void znormalize_finite(Eigen::Ref<Eigen::VectorXd> v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i])) {
      sum += v[i];
      ++n;
    }
  }
  if (n == 0) return;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i])) ss += (v[i] - mean) * (v[i] - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) continue;
    v[i] = sd > 0.0 ? (v[i] - mean) / sd : 0.0;
  }
}

}  // namespace

EnsembleWeights::EnsembleWeights(double w1, double w2) : w1_(w1), w2_(w2) {
  if (!(w1 >= 0.0 && w1 <= 1.0 && w2 >= 0.0 && w2 <= 1.0) ||
      std::abs(w1 + w2 - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "ensemble weights must lie in [0,1] and sum to 1");
  }
}

ScoreMatrix crl_scores(const QPolicy& policy, const EnvironmentMatrix& env,
                       const Instance& instance) {
  const TatimMdp mdp(env, instance);
  const std::size_t n = instance.n_tasks();
  const std::size_t m = instance.n_devices();
  ScoreMatrix out{Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(m),
                                            kExcluded),
                  ScoreSource::kCrl};

  std::vector<std::optional<MdpState>> first_visit(m);
  for (const MdpState& s : greedy_trajectory(policy, mdp)) {
    if (s.cursor_device < m && !first_visit[s.cursor_device]) {
      first_visit[s.cursor_device] = s;
    }
  }
  for (std::size_t p = 0; p < m; ++p) {
    if (!first_visit[p]) continue;
    const MdpState& s = *first_visit[p];
    const std::vector<double> q = policy.q_values(s, env);
    for (std::size_t j = 0; j < n; ++j) {
      if (s.selected.device_of(j)) continue;
      if (!(env.values(static_cast<Eigen::Index>(j),
                       static_cast<Eigen::Index>(p)) > 0.0)) {
        continue;
      }
      out.scores(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p)) =
          q[j];
    }
  }
  for (Eigen::Index p = 0; p < out.scores.cols(); ++p) {
    znormalize_finite(out.scores.col(p));
  }
  return out;
}

ScoreMatrix svm_scores(const SvmModel& model,
                       std::span<const TaskFeatureRow> rows,
                       std::size_t n_devices) {
  if (model.w.size() != model.schema.dimension()) {
    throw std::invalid_argument("svm_scores: model weight dimension mismatch");
  }
  const std::vector<double> raw = predict_scores(model, rows);
  Eigen::VectorXd col = Eigen::Map<const Eigen::VectorXd>(
      raw.data(), static_cast<Eigen::Index>(raw.size()));
  znormalize_finite(col);
  ScoreMatrix out{Eigen::MatrixXd(col.size(), static_cast<Eigen::Index>(n_devices)),
                  ScoreSource::kSvm};
  for (Eigen::Index p = 0; p < out.scores.cols(); ++p) out.scores.col(p) = col;
  return out;
}

ScoreMatrix combine(const ScoreMatrix& s1, const ScoreMatrix& s2,
                    const EnsembleWeights& w) {
  if (s1.scores.rows() != s2.scores.rows() ||
      s1.scores.cols() != s2.scores.cols()) {
    throw std::invalid_argument("combine: score matrix shapes differ");
  }
  ScoreMatrix out{Eigen::MatrixXd(s1.scores.rows(), s1.scores.cols()),
                  ScoreSource::kCombined};
  for (Eigen::Index j = 0; j < out.scores.rows(); ++j) {
    for (Eigen::Index p = 0; p < out.scores.cols(); ++p) {
      const double a = s1.scores(j, p);
      const double b = s2.scores(j, p);
      if (a == kExcluded || b == kExcluded) {
        out.scores(j, p) = kExcluded;
      } else if (a == b) {
        out.scores(j, p) = a;  // a convex combination of equal values
      } else {
        out.scores(j, p) = w.w1() * a + w.w2() * b;
      }
    }
  }
  return out;
}

AllocationMatrix project_feasible(const ScoreMatrix& scores,
                                  const Instance& instance) {
  const std::size_t n = instance.n_tasks();
  const std::size_t m = instance.n_devices();
  if (static_cast<std::size_t>(scores.scores.rows()) != n ||
      static_cast<std::size_t>(scores.scores.cols()) != m) {
    throw std::invalid_argument("project_feasible: score shape mismatch");
  }
  struct Cell {
    double score;
    std::size_t j;
    std::size_t p;
  };
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < m; ++p) {
      const double s = scores.scores(static_cast<Eigen::Index>(j),
                                     static_cast<Eigen::Index>(p));
      if (std::isfinite(s)) cells.push_back({s, j, p});
    }
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) { return a.score > b.score; });

  // Budgets only shrink, so one pass over the sorted cells visits them in
  // the same order as repeatedly taking the best remaining feasible cell.
  AllocationMatrix alloc(n, m);
  Budgets budgets(instance);
  for (const Cell& c : cells) {
    if (alloc.device_of(c.j) || !budgets.fits(c.j, c.p)) continue;
    alloc.assign(c.j, c.p);
    budgets.take(c.j, c.p);
  }
  return alloc;
}

AllocationMatrix allocate_dcta(const QPolicy& policy, const SvmModel& model,
                               const EnvironmentMatrix& env,
                               std::span<const TaskFeatureRow> rows,
                               const Instance& instance,
                               const EnsembleWeights& w) {
  return project_feasible(
      combine(crl_scores(policy, env, instance),
              svm_scores(model, rows, instance.n_devices()), w),
      instance);
}

EnsembleWeights tune_weights(std::span<const ValidationCase> cases) {
  if (cases.empty()) throw std::invalid_argument("tune_weights: no validation cases");
  std::optional<EnsembleWeights> best;
  double best_merit = 0.0;
  for (int i = 10; i >= 0; --i) {
    const double w1 = i / 10.0;
    const EnsembleWeights w(w1, 1.0 - w1);
    double total = 0.0;
    for (const auto& c : cases) {
      total += c.merit(project_feasible(combine(c.crl, c.svm, w), c.instance));
    }
    const double mean = total / static_cast<double>(cases.size());
    if (!best || mean > best_merit) {
      best = w;
      best_merit = mean;
    }
  }
  return *best;
}

AllocationMatrix allocate_rm(const Instance& instance, std::uint64_t seed) {
  const std::size_t n = instance.n_tasks();
  const std::size_t m = instance.n_devices();
  AllocationMatrix alloc(n, m);
  if (m == 0) return alloc;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<std::size_t> device(0, m - 1);
  Budgets budgets(instance);
  for (std::size_t j : order) {
    const std::size_t p = device(rng);
    if (!budgets.fits(j, p)) continue;
    alloc.assign(j, p);
    budgets.take(j, p);
  }
  return alloc;
}

AllocationMatrix allocate_dml(const Instance& instance) {
  const std::size_t n = instance.n_tasks();
  const std::size_t m = instance.n_devices();
  AllocationMatrix alloc(n, m);
  Budgets budgets(instance);
  for (std::size_t j = 0; j < n; ++j) {
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < m; ++p) {
      if (!budgets.fits(j, p)) continue;
      if (!best || budgets.time_slack(p) > budgets.time_slack(*best)) best = p;
    }
    if (!best) continue;
    alloc.assign(j, *best);
    budgets.take(j, *best);
  }
  return alloc;
}

}  // namespace edgealloc

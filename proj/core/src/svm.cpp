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

#include "edgealloc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace edgealloc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("svm: weight/feature dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double hinge(std::span<const double> w, const SvmSample& sample) {
  return std::max(0.0, 1.0 - sample.y * dot(w, sample.x));
}

}  // namespace

double svm_loss(std::span<const double> w, const SvmSample& sample) {
  const double h = hinge(w, sample);
  return 0.5 * dot(w, w) + 0.5 * h * h;
}

std::vector<double> svm_grad(std::span<const double> w,
                             const SvmSample& sample) {
  const double h = hinge(w, sample);
  std::vector<double> g(w.begin(), w.end());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= sample.y * sample.x[i] * h;
  return g;
}

double svm_mean_loss(std::span<const double> w,
                     std::span<const SvmSample> dataset) {
  if (dataset.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : dataset) total += svm_loss(w, s);
  return total / static_cast<double>(dataset.size());
}

SvmTrainResult train_svm(std::span<const SvmSample> dataset,
                         const SvmTrainOptions& options, std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("train_svm: empty dataset");
  if (!(options.learning_rate > 0.0)) {
    throw std::invalid_argument("train_svm: learning rate must be > 0");
  }
  const std::size_t dim = dataset.front().x.size();
  for (const auto& s : dataset) {
    if (s.x.size() != dim) throw std::invalid_argument("train_svm: ragged features");
    if (s.y != 1 && s.y != -1) throw std::invalid_argument("train_svm: label not +-1");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);

  std::vector<double> w(dim, 0.0);
  SvmTrainResult result{w, svm_mean_loss(w, dataset), {}};
  std::vector<double> grad(dim);

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto g = svm_grad(w, dataset[order[k]]);
        for (std::size_t i = 0; i < dim; ++i) grad[i] += g[i];
      }
      const double scale = options.learning_rate / static_cast<double>(end - start);
      for (std::size_t i = 0; i < dim; ++i) w[i] -= scale * grad[i];
    }
    const double loss = svm_mean_loss(w, dataset);
    result.epoch_loss.push_back(loss);
    if (loss < result.best_loss) {
      result.best_loss = loss;
      result.w = w;
    }
  }
  return result;
}

std::vector<double> predict_scores(std::span<const double> w,
                                   std::span<const std::vector<double>> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& x : rows) out.push_back(dot(w, x));
  return out;
}

}  // namespace edgealloc

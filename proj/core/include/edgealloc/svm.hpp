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

// Linear SVM with the L2-regularised squared hinge loss
//
//   L_k(w) = 1/2 ||w||^2 + 1/2 max{0, 1 - y_k w^T x_k}^2
//
// trained by mini-batch SGD on the mean loss. The bias is the last entry of
// w and pairs with a constant 1 appended to every feature vector; it is
// regularised together with the other weights.

#ifndef EDGEALLOC_SVM_HPP_
#define EDGEALLOC_SVM_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace edgealloc {

struct SvmSample {
  std::vector<double> x;  // includes the trailing bias feature
  int y = 1;              // -1 or +1
};

double svm_loss(std::span<const double> w, const SvmSample& sample);
std::vector<double> svm_grad(std::span<const double> w, const SvmSample& sample);
double svm_mean_loss(std::span<const double> w,
                     std::span<const SvmSample> dataset);

struct SvmTrainOptions {
  double learning_rate = 0.01;
  std::size_t epochs = 1000;
  std::size_t batch_size = 16;
};

struct SvmTrainResult {
  std::vector<double> w;            // lowest full-dataset loss iterate
  double best_loss = 0.0;
  std::vector<double> epoch_loss;   // full-dataset loss after each epoch
};

// Throws std::invalid_argument on an empty dataset, lr <= 0, ragged feature
// vectors or labels outside {-1, +1}.
SvmTrainResult train_svm(std::span<const SvmSample> dataset,
                         const SvmTrainOptions& options, std::uint64_t seed);

// w^T x per row.
std::vector<double> predict_scores(std::span<const double> w,
                                   std::span<const std::vector<double>> rows);

}  // namespace edgealloc

#endif  // EDGEALLOC_SVM_HPP_

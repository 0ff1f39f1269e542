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

#include "edgealloc/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "edgealloc/csv.hpp"

namespace edgealloc {

EnvironmentLibrary::EnvironmentLibrary(std::vector<EnvironmentMatrix> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) return;
  const auto& first = entries_.front();
  for (const auto& e : entries_) {
    if (e.values.rows() != first.values.rows() ||
        e.values.cols() != first.values.cols() ||
        e.context.features.size() != first.context.features.size()) {
      throw std::invalid_argument(
          "environment library entries must share shape and context size");
    }
  }
}

std::size_t EnvironmentLibrary::context_dim() const {
  return entries_.empty() ? 0 : entries_.front().context.features.size();
}

EnvironmentMatrix build_environment(std::span<const double> importances,
                                    std::span<const double> capacities,
                                    SensingContext context, int day_id) {
  if (importances.empty() || capacities.empty()) {
    throw std::invalid_argument("build_environment: empty importance or "
                                "capacity vector");
  }
  EnvironmentMatrix env;
  env.values.resize(static_cast<Eigen::Index>(importances.size()),
                    static_cast<Eigen::Index>(capacities.size()));
  env.importance.resize(importances.size());
  for (std::size_t j = 0; j < importances.size(); ++j) {
    const double importance = std::max(importances[j], 0.0);
    env.importance[j] = importance;
    for (std::size_t p = 0; p < capacities.size(); ++p) {
      env.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p)) =
          importance * capacities[p];
    }
  }
  env.context = std::move(context);
  env.day_id = day_id;
  return env;
}

std::vector<std::size_t> knn_neighbors(const EnvironmentLibrary& library,
                                       const SensingContext& query,
                                       std::size_t k) {
  if (library.empty()) throw std::invalid_argument("knn: empty library");
  if (k < 1 || k > library.size()) {
    throw std::invalid_argument("knn: k must lie in [1, library size]");
  }
  const std::size_t dim = library.context_dim();
  if (query.features.size() != dim) {
    throw std::invalid_argument("knn: context dimensionality mismatch");
  }
  const auto& entries = library.entries();
  const double n = static_cast<double>(entries.size());
  std::vector<double> mean(dim, 0.0);
  std::vector<double> stdev(dim, 0.0);
  for (const auto& e : entries) {
    for (std::size_t f = 0; f < dim; ++f) mean[f] += e.context.features[f];
  }
  for (double& m : mean) m /= n;
  for (const auto& e : entries) {
    for (std::size_t f = 0; f < dim; ++f) {
      const double d = e.context.features[f] - mean[f];
      stdev[f] += d * d;
    }
  }
  for (double& s : stdev) s = std::sqrt(s / n);

  std::vector<double> dist(entries.size(), 0.0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    double sum = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
      if (stdev[f] == 0.0) continue;
      const double d = (query.features[f] - entries[i].context.features[f]) /
                       stdev[f];
      sum += d * d;
    }
    dist[i] = sum;
  }
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return dist[a] < dist[b]; });
  order.resize(k);
  return order;
}

EnvironmentMatrix knn_environment(const EnvironmentLibrary& library,
                                  const SensingContext& query, std::size_t k) {
  const auto neighbors = knn_neighbors(library, query, k);
  const auto& entries = library.entries();
  if (k == 1) return entries[neighbors.front()];
  EnvironmentMatrix out;
  out.values = Eigen::MatrixXd::Zero(entries.front().values.rows(),
                                     entries.front().values.cols());
  for (std::size_t i : neighbors) out.values += entries[i].values;
  out.values /= static_cast<double>(k);
  const bool all_known = std::all_of(neighbors.begin(), neighbors.end(), [&](std::size_t i) {
    return entries[i].importance.size() == static_cast<std::size_t>(out.values.rows());
  });
  if (all_known) {
    out.importance.assign(static_cast<std::size_t>(out.values.rows()), 0.0);
    for (std::size_t i : neighbors) {
      for (std::size_t j = 0; j < out.importance.size(); ++j) {
        out.importance[j] += entries[i].importance[j];
      }
    }
    for (double& v : out.importance) v /= static_cast<double>(k);
  }
  out.context = query;
  out.day_id = entries[neighbors.front()].day_id;
  return out;
}

std::vector<double> implied_importance(const EnvironmentMatrix& env,
                                       const DeviceSet& devices) {
  if (static_cast<std::size_t>(env.n_devices()) != devices.size()) {
    throw std::invalid_argument("environment/device count mismatch");
  }
  if (env.importance.size() == static_cast<std::size_t>(env.n_tasks())) {
    return env.importance;
  }
  double total_capacity = 0.0;
  for (const auto& d : devices) total_capacity += d.capacity;
  std::vector<double> out(static_cast<std::size_t>(env.n_tasks()), 0.0);
  if (total_capacity <= 0.0) return out;
  for (Eigen::Index j = 0; j < env.n_tasks(); ++j) {
    out[static_cast<std::size_t>(j)] = env.values.row(j).sum() / total_capacity;
  }
  return out;
}

EnvironmentLibrary read_environment_library(const std::filesystem::path& path,
                                            const DeviceSet& devices) {
  const csv::Table table = csv::read(path);
  std::vector<std::size_t> ctx_cols;
  std::vector<std::size_t> imp_cols;
  for (std::size_t d = 0;; ++d) {
    const std::string name = "ctx_" + std::to_string(d);
    if (!table.has_column(name)) break;
    ctx_cols.push_back(table.column(name));
  }
  for (std::size_t j = 0;; ++j) {
    const std::string name = "I_" + std::to_string(j);
    if (!table.has_column(name)) break;
    imp_cols.push_back(table.column(name));
  }
  if (imp_cols.empty()) throw DataError(path.string() + ": no I_* columns");
  std::vector<double> capacities;
  for (const auto& d : devices) capacities.push_back(d.capacity);
  const std::size_t day_col = table.column("day_id");

  std::vector<EnvironmentMatrix> entries;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    SensingContext ctx;
    for (std::size_t c : ctx_cols) ctx.features.push_back(table.real(r, c));
    std::vector<double> importances;
    for (std::size_t c : imp_cols) importances.push_back(table.real(r, c));
    entries.push_back(build_environment(
        importances, capacities, std::move(ctx),
        static_cast<int>(table.integer(r, day_col))));
  }
  return EnvironmentLibrary(std::move(entries));
}

std::string environment_library_to_csv(
    std::span<const int> day_ids, std::span<const SensingContext> contexts,
    std::span<const std::vector<double>> importances) {
  if (day_ids.size() != contexts.size() ||
      day_ids.size() != importances.size()) {
    throw std::invalid_argument("environment library columns disagree");
  }
  std::vector<std::string> header{"day_id"};
  const std::size_t dim =
      contexts.empty() ? 0 : contexts.front().features.size();
  const std::size_t n = importances.empty() ? 0 : importances.front().size();
  for (std::size_t d = 0; d < dim; ++d) header.push_back("ctx_" + std::to_string(d));
  for (std::size_t j = 0; j < n; ++j) header.push_back("I_" + std::to_string(j));
  csv::Writer w(std::move(header));
  for (std::size_t i = 0; i < day_ids.size(); ++i) {
    std::vector<std::string> row{std::to_string(day_ids[i])};
    for (double v : contexts[i].features) row.push_back(csv::format_real(v));
    for (double v : importances[i]) row.push_back(csv::format_real(v));
    w.add_row(std::move(row));
  }
  return w.str();
}

}  // namespace edgealloc

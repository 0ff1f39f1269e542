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

#include "edgealloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "edgealloc/knapsack.hpp"
#include "edgealloc/merit.hpp"
#include "json.hpp"

namespace edgealloc {

using nlohmann::json;

namespace {

std::vector<double> capacities(const DeviceSet& devices) {
  std::vector<double> out;
  for (const auto& d : devices) out.push_back(d.capacity);
  return out;
}

EnvironmentLibrary history_library(const SyntheticDataset& ds, const DaySplit& split) {
  const auto caps = capacities(ds.devices);
  std::vector<EnvironmentMatrix> entries;
  for (std::size_t d : split.history) {
    entries.push_back(build_environment(ds.importances(d), caps, ds.contexts[d],
                                        ds.days[d].day_id));
  }
  return EnvironmentLibrary(std::move(entries));
}

EnvironmentMatrix permuted_rows(const EnvironmentMatrix& env, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(env.n_tasks()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Eigen::Index>(i);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng() % i]);
  }
  EnvironmentMatrix out = env;
  for (Eigen::Index j = 0; j < env.n_tasks(); ++j) {
    const auto from = perm[static_cast<std::size_t>(j)];
    out.values.row(j) = env.values.row(from);
    if (!env.importance.empty()) {
      out.importance[static_cast<std::size_t>(j)] = env.importance[static_cast<std::size_t>(from)];
    }
  }
  return out;
}

std::size_t policy_rank(const std::string& name) {
  const auto& all = known_policies();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), name) - all.begin());
}

double field_of(const ReportRow& r, const std::string& field) {
  if (field == "om") return r.om;
  if (field == "pt_s") return r.pt_s;
  if (field == "ec_j") return r.ec_j;
  if (field == "objective") return r.objective;
  throw std::invalid_argument("unknown report field: " + field);
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

}  // namespace

const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names{"oracle", "rm",          "dml",
                                              "crl",    "dcta",        "crl_matched",
                                              "crl_permuted"};
  return names;
}

CrlHyperParams BenchmarkConfig::default_benchmark_crl() {
  CrlHyperParams p;
  p.episodes = 5000;
  p.eval_every = 50;
  return p;
}

void BenchmarkConfig::validate(int n_days) const {
  if (n_validation_days < 0 || n_test_days < 1) {
    throw std::invalid_argument("benchmark: need >= 1 test day and >= 0 validation days");
  }
  if (n_days - n_validation_days - n_test_days < 1) {
    throw std::invalid_argument("benchmark: no history days left for training");
  }
  if (knn_k < 1) throw std::invalid_argument("benchmark: knn_k must be >= 1");
  if (!weights && n_validation_days < 1 &&
      std::find(policies.begin(), policies.end(), "dcta") != policies.end()) {
    throw std::invalid_argument("benchmark: tuning weights needs validation days");
  }
  if (policies.empty()) throw std::invalid_argument("benchmark: no policies to evaluate");
  for (const auto& p : policies) {
    if (policy_rank(p) >= 5) throw std::invalid_argument("benchmark: unknown policy " + p);
  }
}

DaySplit split_days(std::size_t n_days, const BenchmarkConfig& config) {
  config.validate(static_cast<int>(n_days));
  DaySplit s;
  const std::size_t n_test = static_cast<std::size_t>(config.n_test_days);
  const std::size_t n_val = static_cast<std::size_t>(config.n_validation_days);
  const std::size_t n_hist = n_days - n_test - n_val;
  for (std::size_t d = 0; d < n_days; ++d) {
    if (d < n_hist) {
      s.history.push_back(d);
    } else if (d < n_hist + n_val) {
      s.validation.push_back(d);
    } else {
      s.test.push_back(d);
    }
  }
  return s;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag * 0x100000001b3ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EnvironmentMatrix day_environment(const SyntheticDataset& ds, const DaySplit& split,
                                  std::size_t day, std::size_t k) {
  const EnvironmentLibrary library = history_library(ds, split);
  return knn_environment(library, ds.contexts.at(day), std::min(k, library.size()));
}

std::vector<TaskFeatureRow> day_feature_rows(const SyntheticDataset& ds, std::size_t day) {
  const int id = ds.days.at(day).day_id;
  std::vector<TaskFeatureRow> rows;
  for (const auto& r : ds.svm_rows) {
    if (r.row.day_id == id) rows.push_back(r.row);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.task_id < b.task_id; });
  if (rows.size() != ds.tasks.at(day).size()) {
    throw DataError("feature rows do not cover every task of day " + std::to_string(id));
  }
  return rows;
}

double day_merit(const SyntheticDataset& ds, std::size_t day, const AllocationMatrix& alloc) {
  const std::size_t n = alloc.n_tasks();
  const auto executed = std::make_unique<bool[]>(n);
  for (std::size_t j = 0; j < n; ++j) executed[j] = alloc.device_of(j).has_value();
  return overall_merit(decision_cost(ds.plant, ds.days.at(day), {executed.get(), n}),
                       ds.ideal_kwh.at(day));
}

TrainedArtifacts train_artifacts(const SyntheticDataset& ds, const BenchmarkConfig& config,
                                 std::uint64_t seed) {
  const DaySplit split = split_days(ds.n_days(), config);
  TrainedArtifacts out;

  std::vector<TaskFeatureRow> history_rows;
  std::vector<LabeledFeatureRow> labelled;
  for (std::size_t d : split.history) {
    const int id = ds.days[d].day_id;
    for (const auto& r : ds.svm_rows) {
      if (r.row.day_id != id) continue;
      history_rows.push_back(r.row);
      labelled.push_back(r);
    }
  }
  out.svm.schema = FeatureSchema::fit(history_rows);
  const auto samples = to_samples(out.svm.schema, labelled);
  SvmTrainResult svm = train_svm(samples, config.svm, derive_seed(seed, 10, 0));
  out.svm.w = std::move(svm.w);
  out.svm_epoch_loss = std::move(svm.epoch_loss);

  const EnvironmentLibrary library = history_library(ds, split);
  const std::size_t k = std::min(config.knn_k, library.size());
  std::vector<std::size_t> evaluated = split.validation;
  evaluated.insert(evaluated.end(), split.test.begin(), split.test.end());
  for (std::size_t d : evaluated) {
    const EnvironmentMatrix env = knn_environment(library, ds.contexts[d], k);
    const Instance instance = ds.instance(d);
    CrlTrainResult r = train_crl(env, instance, config.crl,
                                 derive_seed(seed, 1, static_cast<std::uint64_t>(d)));
    out.crl_best_return.emplace(ds.days[d].day_id, r.best_return);
    out.crl.emplace(ds.days[d].day_id, std::move(r.policy));
  }

  if (config.weights) {
    out.weights = *config.weights;
  } else if (!split.validation.empty()) {
    std::vector<ValidationCase> cases;
    for (std::size_t d : split.validation) {
      const EnvironmentMatrix env = knn_environment(library, ds.contexts[d], k);
      Instance instance = ds.instance(d);
      const auto rows = day_feature_rows(ds, d);
      ScoreMatrix crl = crl_scores(out.crl.at(ds.days[d].day_id), env, instance);
      ScoreMatrix svm_s = svm_scores(out.svm, rows, instance.n_devices());
      cases.push_back({std::move(instance), std::move(crl), std::move(svm_s),
                       [&ds, d](const AllocationMatrix& a) { return day_merit(ds, d, a); }});
    }
    out.weights = tune_weights(cases);
  }
  return out;
}

std::vector<ReportRow> evaluate_policies(const SyntheticDataset& ds,
                                         const BenchmarkConfig& config,
                                         const TrainedArtifacts& artifacts,
                                         std::uint64_t seed) {
  const DaySplit split = split_days(ds.n_days(), config);
  const EnvironmentLibrary library = history_library(ds, split);
  const std::size_t k = std::min(config.knn_k, library.size());
  const auto caps = capacities(ds.devices);

  std::vector<std::string> policies = config.policies;
  if (config.mismatch_probe) {
    policies.push_back("crl_matched");
    policies.push_back("crl_permuted");
  }
  std::stable_sort(policies.begin(), policies.end(), [](const auto& a, const auto& b) {
    return policy_rank(a) < policy_rank(b);
  });
  policies.erase(std::unique(policies.begin(), policies.end()), policies.end());

  std::vector<ReportRow> rows;
  for (std::size_t d : split.test) {
    const int day_id = ds.days[d].day_id;
    const Instance instance = ds.instance(d);
    const EnvironmentMatrix env = knn_environment(library, ds.contexts[d], k);
    const auto cost = [&ds, d](const AllocationMatrix& a) {
      const std::size_t n = a.n_tasks();
      const auto executed = std::make_unique<bool[]>(n);
      for (std::size_t j = 0; j < n; ++j) executed[j] = a.device_of(j).has_value();
      return decision_cost(ds.plant, ds.days[d], {executed.get(), n});
    };
    const auto policy_of = [&](std::uint64_t tag, const EnvironmentMatrix& probe_env) {
      return train_crl(probe_env, instance, config.crl,
                       derive_seed(seed, tag, static_cast<std::uint64_t>(d)))
          .policy;
    };

    for (const auto& name : policies) {
      Allocator allocator;
      if (name == "oracle") {
        allocator = [](const Instance& in) { return solve_branch_bound(in).allocation; };
      } else if (name == "rm") {
        const std::uint64_t s = derive_seed(seed, 4, static_cast<std::uint64_t>(d));
        allocator = [s](const Instance& in) { return allocate_rm(in, s); };
      } else if (name == "dml") {
        allocator = [](const Instance& in) { return allocate_dml(in); };
      } else if (name == "crl") {
        const QPolicy& policy = artifacts.crl.at(day_id);
        allocator = [&policy, &env](const Instance& in) {
          return allocate_crl(policy, env, in);
        };
      } else if (name == "dcta") {
        const QPolicy& policy = artifacts.crl.at(day_id);
        const auto features = day_feature_rows(ds, d);
        allocator = [&, features](const Instance& in) {
          return allocate_dcta(policy, artifacts.svm, env, features, in, artifacts.weights);
        };
      } else {
        EnvironmentMatrix probe =
            build_environment(ds.importances(d), caps, ds.contexts[d], day_id);
        if (name == "crl_permuted") {
          probe = permuted_rows(probe, derive_seed(seed, 3, static_cast<std::uint64_t>(d)));
        }
        const QPolicy policy = policy_of(name == "crl_matched" ? 2 : 5, probe);
        allocator = [policy, probe](const Instance& in) {
          return allocate_crl(policy, probe, in);
        };
      }
      const ExperimentOutcome o =
          run_experiment(instance, allocator, ds.topology, ds.ideal_kwh[d], cost);
      rows.push_back({day_id, name, seed, o.report.n_tasks_executed, o.report.overall_merit,
                      o.report.processing_time_s, o.report.energy_j, o.objective});
    }
  }
  return rows;
}

std::vector<ReportRow> run_benchmark(const GenConfig& gen, const BenchmarkConfig& config,
                                     std::span<const std::uint64_t> seeds,
                                     std::size_t threads, const DatasetHook& adjust) {
  std::vector<std::vector<ReportRow>> per_seed(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        SyntheticDataset ds = gen_synthetic_dataset(gen, seeds[i]);
        if (adjust) adjust(ds);
        const TrainedArtifacts artifacts = train_artifacts(ds, config, seeds[i]);
        per_seed[i] = evaluate_policies(ds, config, artifacts, seeds[i]);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, seeds.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ReportRow> rows;
  for (auto& part : per_seed) rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

std::map<std::string, PolicySummary> summarize(std::span<const ReportRow> rows) {
  std::map<std::string, std::vector<const ReportRow*>> grouped;
  for (const auto& r : rows) grouped[r.policy].push_back(&r);
  std::map<std::string, PolicySummary> out;
  for (const auto& [name, group] : grouped) {
    PolicySummary s;
    s.n_runs = group.size();
    std::vector<double> om, pt, ec, obj;
    for (const ReportRow* r : group) {
      om.push_back(r->om);
      pt.push_back(r->pt_s);
      ec.push_back(r->ec_j);
      obj.push_back(r->objective);
    }
    mean_std(om, s.om_mean, s.om_std);
    mean_std(pt, s.pt_mean, s.pt_std);
    mean_std(ec, s.ec_mean, s.ec_std);
    mean_std(obj, s.objective_mean, s.objective_std);
    out.emplace(name, s);
  }
  return out;
}

std::string summary_to_json(std::span<const ReportRow> rows) {
  const auto summary = summarize(rows);
  json policies = json::object();
  for (const auto& [name, s] : summary) {
    policies[name] = {{"n_runs", s.n_runs},
                      {"om_mean", s.om_mean},
                      {"om_std", s.om_std},
                      {"pt_mean", s.pt_mean},
                      {"pt_std", s.pt_std},
                      {"ec_mean", s.ec_mean},
                      {"ec_std", s.ec_std},
                      {"objective_mean", s.objective_mean},
                      {"objective_std", s.objective_std}};
  }
  json ratios = json::object();
  const auto ratio = [](double a, double b) -> json {
    if (b == 0.0) return nullptr;
    return a / b;
  };
  for (const auto& [a, sa] : summary) {
    for (const auto& [b, sb] : summary) {
      if (a == b) continue;
      const std::string suffix = a + "_over_" + b;
      ratios["pt_ratio_" + suffix] = ratio(sa.pt_mean, sb.pt_mean);
      ratios["ec_ratio_" + suffix] = ratio(sa.ec_mean, sb.ec_mean);
      ratios["om_ratio_" + suffix] = ratio(sa.om_mean, sb.om_mean);
    }
  }
  json out;
  out["policies"] = std::move(policies);
  out["ratios"] = std::move(ratios);
  return out.dump(2) + "\n";
}

std::vector<double> per_seed_means(std::span<const ReportRow> rows,
                                   const std::string& policy, const std::string& field) {
  std::vector<std::uint64_t> order;
  std::map<std::uint64_t, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    if (r.policy != policy) continue;
    auto [it, inserted] = acc.try_emplace(r.seed, 0.0, 0);
    if (inserted) order.push_back(r.seed);
    it->second.first += field_of(r, field);
    ++it->second.second;
  }
  std::vector<double> out;
  for (auto s : order) {
    const auto& [sum, n] = acc.at(s);
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

std::size_t thread_budget() {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("EDGEALLOC_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
}

}  // namespace edgealloc

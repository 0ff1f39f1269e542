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

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgealloc/coop.hpp"
#include "edgealloc/crl.hpp"
#include "edgealloc/dataset_io.hpp"
#include "edgealloc/edgesim.hpp"
#include "edgealloc/instance_io.hpp"
#include "edgealloc/knapsack.hpp"
#include "edgealloc/merit.hpp"

namespace edgealloc::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Flags shared by the config-driven subcommands. Strings stay empty when the
// flag is absent.
struct ConfigFlags {
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string dataset;
  std::string artifacts;
  std::string topology;
  double deadline = 0.0;
  CLI::Option* deadline_opt = nullptr;
  std::vector<std::string> policies;
  double w1 = 0.0;
  CLI::Option* w1_opt = nullptr;
};

enum Flag : unsigned {
  kSeed = 1u << 0,
  kOut = 1u << 1,
  kDataset = 1u << 2,
  kArtifacts = 1u << 3,
  kTopology = 1u << 4,
  kDeadline = 1u << 5,
  kPolicies = 1u << 6,
  kW1 = 1u << 7,
};

void add_config_flags(CLI::App& app, ConfigFlags& f, unsigned which) {
  app.add_option("-c,--config", f.config, "JSON experiment config");
  app.add_option("--set", f.sets, "Override a config key: dotted.key=value (repeatable)");
  if (which & kSeed) app.add_option("--seed", f.seeds, "Seed(s); overrides config seeds");
  if (which & kOut) app.add_option("-o,--out", f.out, "Output directory (output_dir)");
  if (which & kDataset) app.add_option("--dataset", f.dataset, "Dataset directory (dataset_dir)");
  if (which & kArtifacts) {
    app.add_option("--artifacts", f.artifacts, "Trained artifacts directory (artifacts_dir)");
  }
  if (which & kTopology) app.add_option("--topology", f.topology, "Topology JSON (topology)");
  if (which & kDeadline) {
    f.deadline_opt = app.add_option("--deadline", f.deadline, "Deadline in seconds (deadline_s)");
  }
  if (which & kPolicies) app.add_option("--policy", f.policies, "Policies to evaluate (policies)");
  if (which & kW1) {
    f.w1_opt = app.add_option("--w1", f.w1, "CRL weight; w2 = 1 - w1 (weights)");
  }
}

ExperimentConfig resolve(const ConfigFlags& f) {
  std::vector<Override> o;
  if (!f.seeds.empty()) o.emplace_back("seeds", json(f.seeds).dump());
  if (!f.out.empty()) o.emplace_back("output_dir", json(f.out).dump());
  if (!f.dataset.empty()) o.emplace_back("dataset_dir", json(f.dataset).dump());
  if (!f.artifacts.empty()) o.emplace_back("artifacts_dir", json(f.artifacts).dump());
  if (!f.topology.empty()) o.emplace_back("topology", json(f.topology).dump());
  if (f.deadline_opt && f.deadline_opt->count()) {
    o.emplace_back("deadline_s", json(f.deadline).dump());
  }
  if (!f.policies.empty()) o.emplace_back("policies", json(f.policies).dump());
  if (f.w1_opt && f.w1_opt->count()) {
    o.emplace_back("weights", json{{"w1", f.w1}, {"w2", 1.0 - f.w1}}.dump());
  }
  for (const auto& s : f.sets) o.push_back(parse_override(s));
  return load_config(f.config.empty() ? std::nullopt : std::optional<fs::path>(f.config), o);
}

void apply_overrides(SyntheticDataset& ds, const ExperimentConfig& c) {
  if (c.deadline_s) ds.deadline_s = *c.deadline_s;
  if (c.topology) {
    ds.topology = read_topology(*c.topology);
    ds.topology.validate(ds.devices);
  }
}

SyntheticDataset load_dataset(const ExperimentConfig& c) {
  SyntheticDataset ds = read_dataset(c.dataset_path());
  apply_overrides(ds, c);
  return ds;
}

void check_split(const SyntheticDataset& ds, const BenchmarkConfig& b) {
  try {
    b.validate(static_cast<int>(ds.n_days()));
  } catch (const std::invalid_argument& e) {
    throw InfeasibleError(e.what());
  }
}

std::size_t day_index(const SyntheticDataset& ds, int day_id) {
  for (std::size_t d = 0; d < ds.n_days(); ++d) {
    if (ds.days[d].day_id == day_id) return d;
  }
  throw DataError("day " + std::to_string(day_id) + " not in dataset");
}

struct LoadedArtifacts {
  TrainedArtifacts artifacts;
  std::uint64_t seed = 0;
  std::size_t knn_k = 0;
  int n_validation_days = 0;
  int n_test_days = 0;
};

LoadedArtifacts load_artifacts(const fs::path& dir) {
  LoadedArtifacts out;
  const json bundle = json::parse(read_file(dir / kPolicyFile));
  out.seed = bundle.at("seed").get<std::uint64_t>();
  out.knn_k = bundle.at("knn_k").get<std::size_t>();
  out.n_validation_days = bundle.at("n_validation_days").get<int>();
  out.n_test_days = bundle.at("n_test_days").get<int>();
  const json& w = bundle.at("weights");
  out.artifacts.weights = EnsembleWeights(w.at("w1").get<double>(), w.at("w2").get<double>());
  for (const auto& [id, policy] : bundle.at("days").items()) {
    out.artifacts.crl.emplace(std::stoi(id), QPolicy::from_json(policy.dump()));
  }
  out.artifacts.svm = SvmModel::from_json(read_file(dir / kSvmModelFile));
  return out;
}

// The policies only make sense under the split they were trained on.
void check_trained_split(const BenchmarkConfig& b, const LoadedArtifacts& a) {
  if (b.knn_k != a.knn_k || b.n_validation_days != a.n_validation_days ||
      b.n_test_days != a.n_test_days) {
    throw DataError("artifacts were trained with knn_k=" + std::to_string(a.knn_k) +
                    ", n_validation_days=" + std::to_string(a.n_validation_days) +
                    ", n_test_days=" + std::to_string(a.n_test_days) +
                    "; the config differs");
  }
}

bool needs_artifacts(const std::vector<std::string>& policies) {
  return std::any_of(policies.begin(), policies.end(),
                     [](const auto& p) { return p == "crl" || p == "dcta"; });
}

json assignment_json(const AllocationMatrix& alloc) {
  json a = json::array();
  for (const auto& [j, p] : alloc.assignment()) a.push_back(json::array({j, p}));
  return a;
}

std::string solve_result_json(const SolveResult& r) {
  return json{{"objective", r.objective},
              {"optimal", r.optimal},
              {"assignment", assignment_json(r.allocation)}}
      .dump();
}

// --- subcommands ------------------------------------------------------------

int cmd_gen(const ConfigFlags& f, std::ostream& out) {
  const ExperimentConfig c = resolve(f);
  const std::uint64_t seed = c.seeds.front();
  SyntheticDataset ds = gen_synthetic_dataset(c.generator, seed);
  apply_overrides(ds, c);
  write_dataset(ds, c.dataset_path());
  std::size_t rows = 0;
  for (const auto& t : ds.tasks) rows += t.size();
  out << json{{"dataset_dir", c.dataset_path().generic_string()},
              {"seed", seed},
              {"n_days", ds.n_days()},
              {"task_rows", rows},
              {"coverage80", importance_coverage(ds, 0.8)}}
             .dump()
      << '\n';
  return kOk;
}

int cmd_train(const ConfigFlags& f, std::ostream& out) {
  const ExperimentConfig c = resolve(f);
  const SyntheticDataset ds = load_dataset(c);
  check_split(ds, c.benchmark);
  const std::uint64_t seed = c.seeds.front();
  const TrainedArtifacts a = train_artifacts(ds, c.benchmark, seed);

  const fs::path dir = c.artifacts_path();
  write_file(dir / kPolicyFile, policy_bundle_json(a, c.benchmark, seed));
  write_file(dir / kSvmModelFile, a.svm.to_json());

  double best_return = 0.0;
  for (const auto& [day, r] : a.crl_best_return) best_return += r;
  const double n = static_cast<double>(std::max<std::size_t>(1, a.crl_best_return.size()));
  const double final_loss = a.svm_epoch_loss.empty() ? 0.0 : a.svm_epoch_loss.back();
  const double best_loss = a.svm_epoch_loss.empty()
                               ? 0.0
                               : *std::min_element(a.svm_epoch_loss.begin(),
                                                   a.svm_epoch_loss.end());
  out << json{{"seed", seed},
              {"svm_epochs", a.svm_epoch_loss.size()},
              {"svm_final_loss", final_loss},
              {"svm_best_loss", best_loss},
              {"crl_days", a.crl.size()},
              {"crl_mean_best_return", best_return / n},
              {"w1", a.weights.w1()},
              {"w2", a.weights.w2()}}
             .dump()
      << '\n';
  return kOk;
}

int cmd_run(const ConfigFlags& f, std::ostream& out) {
  ExperimentConfig c = resolve(f);
  std::vector<ReportRow> rows;
  if (c.dataset_dir) {
    const SyntheticDataset ds = load_dataset(c);
    check_split(ds, c.benchmark);
    LoadedArtifacts loaded;
    std::uint64_t seed = c.seeds.front();
    if (needs_artifacts(c.benchmark.policies)) {
      loaded = load_artifacts(c.artifacts_path());
      check_trained_split(c.benchmark, loaded);
      seed = loaded.seed;
    }
    rows = evaluate_policies(ds, c.benchmark, loaded.artifacts, seed);
  } else {
    const DatasetHook hook = [&c](SyntheticDataset& ds) { apply_overrides(ds, c); };
    if (c.generator.n_days - c.benchmark.n_validation_days - c.benchmark.n_test_days < 1) {
      throw InfeasibleError("benchmark: no history days left for training");
    }
    rows = run_benchmark(c.generator, c.benchmark, c.seeds, thread_budget(), hook);
  }
  const fs::path report = c.output_dir / kReportFile;
  const fs::path summary = c.output_dir / kSummaryFile;
  write_file(report, report_to_csv(rows));
  write_file(summary, summary_to_json(rows));
  out << json{{"rows", rows.size()},
              {"report", report.generic_string()},
              {"summary", summary.generic_string()}}
             .dump()
      << '\n';
  return kOk;
}

int cmd_solve(const ConfigFlags& f, const std::string& policy, int day_id, std::ostream& out) {
  ExperimentConfig c = resolve(f);
  const SyntheticDataset ds = load_dataset(c);
  const std::size_t d = day_index(ds, day_id);
  const Instance instance = ds.instance(d);

  SolveResult r;
  json extra = json::object();
  if (policy == "oracle") {
    r = solve_branch_bound(instance);
  } else if (policy == "rm") {
    r.allocation = allocate_rm(instance, derive_seed(c.seeds.front(), 4, d));
  } else if (policy == "dml") {
    r.allocation = allocate_dml(instance);
  } else {
    check_split(ds, c.benchmark);
    const LoadedArtifacts loaded = load_artifacts(c.artifacts_path());
    const auto it = loaded.artifacts.crl.find(day_id);
    if (it == loaded.artifacts.crl.end()) {
      throw DataError("no trained policy for day " + std::to_string(day_id));
    }
    BenchmarkConfig b = c.benchmark;
    b.knn_k = loaded.knn_k;
    b.n_validation_days = loaded.n_validation_days;
    b.n_test_days = loaded.n_test_days;
    check_split(ds, b);
    const EnvironmentMatrix env = day_environment(ds, split_days(ds.n_days(), b), d, b.knn_k);
    if (policy == "crl") {
      r.allocation = allocate_crl(it->second, env, instance);
    } else {
      const EnsembleWeights w = c.benchmark.weights.value_or(loaded.artifacts.weights);
      r.allocation = allocate_dcta(it->second, loaded.artifacts.svm, env,
                                   day_feature_rows(ds, d), instance, w);
      extra["weights"] = {{"w1", w.w1()}, {"w2", w.w2()}};
    }
  }
  r.objective = selected_importance(instance.tasks, r.allocation);
  json j = json::parse(solve_result_json(r));
  j["policy"] = policy;
  for (auto& [k, v] : extra.items()) j[k] = v;
  out << j.dump() << '\n';
  return kOk;
}

int cmd_oracle(const std::string& tasks, const std::string& devices, double deadline_s,
               const std::string& method, int day, bool has_day, std::ostream& out) {
  Instance instance{read_tasks(tasks, has_day ? std::optional<int>(day) : std::nullopt),
                    read_devices(devices), deadline_s};
  SolveResult r;
  if (method == "brute") {
    r = solve_bruteforce(instance);
  } else if (method == "bb") {
    r = solve_branch_bound(instance);
  } else {
    r = solve_greedy_density(instance);
  }
  out << solve_result_json(r) << '\n';
  return kOk;
}

int cmd_report(const std::string& report, const std::string& summary_out, std::ostream& out) {
  const std::vector<ReportRow> rows = read_report(report);
  const std::string summary = summary_to_json(rows);
  if (summary_out.empty()) {
    out << summary << '\n';
  } else {
    write_file(summary_out, summary);
  }
  return kOk;
}

int fail(std::ostream& err, int code, const std::string& what) {
  err << "edgealloc: error: " << what << '\n';
  return code;
}

}  // namespace

std::string policy_bundle_json(const TrainedArtifacts& artifacts, const BenchmarkConfig& config,
                               std::uint64_t seed) {
  json days = json::object();
  for (const auto& [id, policy] : artifacts.crl) {
    days[std::to_string(id)] = json::parse(policy.to_json());
  }
  return json{{"seed", seed},
              {"knn_k", config.knn_k},
              {"n_validation_days", config.n_validation_days},
              {"n_test_days", config.n_test_days},
              {"weights", {{"w1", artifacts.weights.w1()}, {"w2", artifacts.weights.w2()}}},
              {"days", std::move(days)}}
      .dump();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Importance-aware task allocation for edge multi-task learning", "edgealloc"};
  app.require_subcommand(1);

  ConfigFlags gen_f, train_f, run_f, solve_f;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic chiller-plant dataset");
  add_config_flags(*gen, gen_f, kSeed | kOut | kDataset | kDeadline | kTopology);

  CLI::App* train = app.add_subcommand("train", "Train CRL policies and the SVM on a dataset");
  add_config_flags(*train, train_f,
                   kSeed | kOut | kDataset | kArtifacts | kTopology | kDeadline | kW1);

  CLI::App* run = app.add_subcommand("run", "Evaluate policies; write report CSV and summary");
  add_config_flags(*run, run_f,
                   kSeed | kOut | kDataset | kArtifacts | kTopology | kDeadline | kPolicies | kW1);

  CLI::App* solve = app.add_subcommand("solve", "Allocate one dataset day with one policy");
  add_config_flags(*solve, solve_f,
                   kSeed | kOut | kDataset | kArtifacts | kTopology | kDeadline | kW1);
  std::string solve_policy;
  int solve_day = 0;
  solve->add_option("--policy", solve_policy, "Allocator")
      ->required()
      ->check(CLI::IsMember({"oracle", "rm", "dml", "crl", "dcta"}));
  solve->add_option("--day", solve_day, "day_id to allocate")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "Solve a task/device instance exactly");
  std::string tasks_csv, devices_csv, method = "bb";
  double oracle_deadline = 0.0;
  int oracle_day = 0;
  oracle->add_option("--tasks", tasks_csv, "Task CSV")->required();
  oracle->add_option("--devices", devices_csv, "Device CSV")->required();
  oracle->add_option("--deadline", oracle_deadline, "Per-device deadline in seconds")
      ->required();
  oracle->add_option("--method", method, "Solver")
      ->check(CLI::IsMember({"brute", "bb", "greedy"}));
  CLI::Option* day_opt =
      oracle->add_option("--day", oracle_day, "Select one day of a multi-day task table");

  CLI::App* report = app.add_subcommand("report", "Summarize a report CSV");
  std::string report_csv, summary_out;
  report->add_option("report", report_csv, "Report CSV")->required();
  report->add_option("-o,--out", summary_out, "Write the summary JSON here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_f, out);
    if (train->parsed()) return cmd_train(train_f, out);
    if (run->parsed()) return cmd_run(run_f, out);
    if (solve->parsed()) return cmd_solve(solve_f, solve_policy, solve_day, out);
    if (oracle->parsed()) {
      return cmd_oracle(tasks_csv, devices_csv, oracle_deadline, method, oracle_day,
                        day_opt->count() > 0, out);
    }
    return cmd_report(report_csv, summary_out, out);
  } catch (const UsageError& e) {
    return fail(err, kUsage, e.what());
  } catch (const InfeasibleError& e) {
    return fail(err, kInfeasible, e.what());
  } catch (const DataError& e) {
    return fail(err, kData, e.what());
  } catch (const json::exception& e) {
    return fail(err, kData, e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(err, kData, e.what());
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, length_error: the inputs cannot be run.
    return fail(err, kInfeasible, e.what());
  } catch (const std::exception& e) {
    return fail(err, kData, e.what());
  }
}

}  // namespace edgealloc::cli

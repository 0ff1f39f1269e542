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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Criteria can be selected by number on the
// command line, e.g. `edgealloc_acceptance 1 6 12`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "edgealloc/chiller.hpp"
#include "edgealloc/coop.hpp"
#include "edgealloc/crl.hpp"
#include "edgealloc/dataset_io.hpp"
#include "edgealloc/edgesim.hpp"
#include "edgealloc/environment.hpp"
#include "edgealloc/experiment.hpp"
#include "edgealloc/features.hpp"
#include "edgealloc/generator.hpp"
#include "edgealloc/knapsack.hpp"
#include "edgealloc/mdp.hpp"
#include "edgealloc/merit.hpp"
#include "edgealloc/svm.hpp"
#include "oracles.hpp"

namespace {

using namespace edgealloc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

EnvironmentMatrix env_for(const Instance& in) {
  std::vector<double> imp, cap;
  for (const auto& t : in.tasks) imp.push_back(t.importance);
  for (const auto& d : in.devices) cap.push_back(d.capacity);
  return build_environment(imp, cap, {{0.0}});
}

// 1 ---------------------------------------------------------------------------
Verdict oracle_equivalence() {
  std::mt19937_64 rng(20260101);
  const auto t0 = Clock::now();
  int mismatches = 0, enumerator_mismatches = 0, binding = 0;
  for (int i = 0; i < 200; ++i) {
    const Instance in = oracle::random_instance(rng, 10, 3, 1);
    const SolveResult bb = solve_branch_bound(in);
    const SolveResult bf = solve_bruteforce(in);
    if (bb.objective != bf.objective) ++mismatches;
    if (std::abs(bb.objective - oracle::best_objective(in)) > 1e-9) ++enumerator_mismatches;
    double total = 0.0;
    for (const auto& t : in.tasks) total += std::max(0.0, t.importance);
    if (bb.objective < total) ++binding;
  }
  const double dt = seconds_since(t0);
  return {mismatches == 0 && enumerator_mismatches == 0 && dt < 30.0,
          fmt::format("200 instances, bb != brute: {}, != enumerator: {}, budget binds on {}, {:.2f}s",
                      mismatches, enumerator_mismatches, binding, dt)};
}

// 2 ---------------------------------------------------------------------------
std::vector<TaskFeatureRow> synthetic_rows(std::mt19937_64& rng, std::size_t n) {
  static const char* kBuildings[] = {"A", "B", "C"};
  static const char* kWeather[] = {"sunny", "cloudy", "rain"};
  std::vector<TaskFeatureRow> rows;
  for (std::size_t j = 0; j < n; ++j) {
    TaskFeatureRow r;
    r.task_id = static_cast<int>(j);
    r.general = {static_cast<double>(oracle::uniform_int(rng, 0, 20)), oracle::uniform(rng, 0, 1)};
    r.domain = {kBuildings[oracle::uniform_int(rng, 0, 2)], "lstm", oracle::uniform(rng, 50, 500),
                kWeather[oracle::uniform_int(rng, 0, 2)], oracle::uniform(rng, 15, 35),
                oracle::uniform(rng, 100, 900), oracle::uniform(rng, 5, 40), oracle::uniform(rng, 2, 7)};
    rows.push_back(r);
  }
  return rows;
}

Verdict feasibility_suite() {
  std::mt19937_64 rng(20260102);
  CrlHyperParams params;
  params.episodes = 200;
  std::map<std::string, int> violations;
  const char* names[] = {"rm", "dml", "crl", "dcta", "greedy", "bb", "brute"};
  for (const char* n : names) violations[n] = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    const Instance in = oracle::random_instance(rng, 10, 3, 1);
    const auto env = env_for(in);
    const auto policy = train_crl(env, in, params, static_cast<std::uint64_t>(i)).policy;
    const auto rows = synthetic_rows(rng, in.n_tasks());
    SvmModel model{{}, FeatureSchema::fit(rows)};
    for (std::size_t k = 0; k < model.schema.dimension(); ++k) model.w.push_back(oracle::uniform(rng, -1, 1));
    const double w1 = oracle::uniform_int(rng, 0, 10) / 10.0;

    const std::pair<const char*, AllocationMatrix> outputs[] = {
        {"rm", allocate_rm(in, static_cast<std::uint64_t>(i))},
        {"dml", allocate_dml(in)},
        {"crl", allocate_crl(policy, env, in)},
        {"dcta", allocate_dcta(policy, model, env, rows, in, {w1, 1.0 - w1})},
        {"greedy", solve_greedy_density(in).allocation},
        {"bb", solve_branch_bound(in).allocation},
        {"brute", solve_bruteforce(in).allocation},
    };
    for (const auto& [name, alloc] : outputs) {
      if (!check_feasible(in, alloc).feasible || !oracle::feasible(in, alloc)) ++violations[name];
    }
  }
  int total = 0;
  std::string per;
  for (const char* n : names) {
    total += violations[n];
    per += fmt::format(" {}={}", n, violations[n]);
  }
  return {total == 0, fmt::format("1000 instances, violations:{}, {:.1f}s", per, seconds_since(t0))};
}

// 3 ---------------------------------------------------------------------------
Verdict crl_convergence() {
  std::mt19937_64 rng(20260103);
  CrlHyperParams params;
  params.mode = QMode::kTabular;
  params.episodes = 20000;
  const auto t0 = Clock::now();
  int hits = 0;
  for (int i = 0; i < 40; ++i) {
    const Instance in = oracle::random_instance(rng, 6, 1, 1);
    const auto env = env_for(in);
    const auto result = train_crl(env, in, params, 1000 + static_cast<std::uint64_t>(i));
    const auto alloc = allocate_crl(result.policy, env, in);
    if (solve_bruteforce(in).objective == selected_importance(in.tasks, alloc)) ++hits;
  }
  const double dt = seconds_since(t0);
  return {hits >= 38 && dt < 300.0,
          fmt::format("{}/40 reach the brute-force optimum ({:.1f}%), {:.1f}s", hits, 2.5 * hits, dt)};
}

// 4 ---------------------------------------------------------------------------
Verdict reward_contract() {
  std::mt19937_64 rng(20260104);
  int transitions = 0, terminal = 0, bad_zero = 0, bad_terminal = 0;
  while (transitions < 10000) {
    const Instance in = oracle::random_instance(rng, 8, 3, 1);
    const auto env = env_for(in);
    const TatimMdp mdp(env, in);
    MdpState s = mdp.initial_state();
    while (!mdp.is_terminal(s)) {
      const auto a = static_cast<std::size_t>(oracle::uniform_int(rng, 0, static_cast<int>(in.n_tasks())));
      const StepResult r = mdp.step(s, a);
      ++transitions;
      if (r.done) {
        ++terminal;
        double expected = 0.0;
        for (std::size_t j = 0; j < in.n_tasks(); ++j) {
          if (r.next.selected.device_of(j)) expected += in.tasks[j].importance;
        }
        if (r.reward != expected) ++bad_terminal;
      } else if (r.reward != 0.0) {
        ++bad_zero;
      }
      s = r.next;
    }
  }
  return {bad_zero == 0 && bad_terminal == 0,
          fmt::format("{} transitions ({} terminal), nonzero interim rewards: {}, wrong terminal rewards: {}",
                      transitions, terminal, bad_zero, bad_terminal)};
}

// 5 ---------------------------------------------------------------------------
Verdict svm_numerics() {
  std::mt19937_64 rng(20260105);
  const std::size_t d = 6;
  const auto sample = [&] {
    SvmSample s;
    for (std::size_t i = 0; i + 1 < d; ++i) s.x.push_back(oracle::uniform(rng, -3, 3));
    s.x.push_back(1.0);
    s.y = oracle::uniform_int(rng, 0, 1) ? 1 : -1;
    return s;
  };
  const auto point = [&] {
    std::vector<double> w(d);
    for (auto& v : w) v = oracle::uniform(rng, -2, 2);
    return w;
  };

  double worst_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SvmSample s = sample();
    const std::vector<double> w = point();
    const std::vector<double> g = svm_grad(w, s);
    double diff = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double h = 1e-5;
      auto plus = w, minus = w;
      plus[k] += h;
      minus[k] -= h;
      const double fd = (svm_loss(plus, s) - svm_loss(minus, s)) / (2 * h);
      diff += (g[k] - fd) * (g[k] - fd);
      norm += g[k] * g[k];
    }
    worst_rel = std::max(worst_rel, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12));
  }

  int convexity_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const SvmSample s = sample();
    const auto a = point(), b = point();
    const double lambda = oracle::uniform(rng, 0, 1);
    std::vector<double> mid(d);
    for (std::size_t k = 0; k < d; ++k) mid[k] = lambda * a[k] + (1 - lambda) * b[k];
    if (svm_loss(mid, s) > lambda * svm_loss(a, s) + (1 - lambda) * svm_loss(b, s) + 1e-12) {
      ++convexity_failures;
    }
  }

  std::vector<SvmSample> toy;
  for (int i = 0; i < 40; ++i) {
    const double x1 = oracle::uniform(rng, -2, 2);
    const double x2 = oracle::uniform(rng, -2, 2);
    const int y = x1 + 0.5 * x2 > 0.2 ? 1 : -1;
    const double shift = 0.3 * y;  // margin around the separating line
    toy.push_back({{x1 + shift, x2 + shift, 1.0}, y});
  }
  const auto trained = train_svm(toy, {0.05, 500, 8}, 1);
  int correct = 0;
  const auto scores = [&] {
    std::vector<std::vector<double>> xs;
    for (const auto& s : toy) xs.push_back(s.x);
    return predict_scores(trained.w, xs);
  }();
  for (std::size_t i = 0; i < toy.size(); ++i) correct += scores[i] * toy[i].y > 0 ? 1 : 0;

  return {worst_rel < 1e-6 && convexity_failures == 0 && correct == static_cast<int>(toy.size()),
          fmt::format("worst gradient rel. error {:.2e}, convexity failures {}, toy accuracy {}/{}",
                      worst_rel, convexity_failures, correct, toy.size())};
}

// 6 ---------------------------------------------------------------------------
Verdict simulator_arithmetic() {
  const DeviceSet devices = default_devices(GenConfig{});
  const EdgeDevice& leaf = devices.at(1);
  Topology topo;
  topo.hub_device_id = devices[0].id;
  topo.leaf_device_ids = {leaf.id};
  topo.bandwidth_bits_per_s = 1e7;
  const Instance in{{{0, 0.0, 0.0, 1.0, 1000000, 0.0}}, {devices[0], leaf}, 10.0};
  AllocationMatrix a(1, 2);
  a.assign(0, 1);
  const SimOutcome out = simulate(a, in, topo);
  const double transfer_s = 1e6 / topo.bandwidth_bits_per_s;
  const double tx = out.transmission_energy_j;
  const double compute_s = out.per_device_busy_s[1] - transfer_s;
  const double compute_j = out.per_device_energy_j[1];
  const bool ok = std::abs(tx - 0.284) <= 1e-9 && std::abs(compute_s - 0.475) <= 1e-9 &&
                  std::abs(compute_j - 0.325) <= 1e-9;
  return {ok, fmt::format("transmission {:.12f} J, compute {:.12f} s, compute energy {:.12f} J", tx,
                          compute_s, compute_j)};
}

// 7 ---------------------------------------------------------------------------
Verdict long_tail() {
  const auto t0 = Clock::now();
  double sum = 0.0, lo = 1.0, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const double c = importance_coverage(gen_synthetic_dataset(GenConfig{}, seed), 0.8);
    sum += c;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const double mean = sum / 20.0;
  return {mean >= 0.08 && mean <= 0.20,
          fmt::format("mean 80% coverage fraction {:.4f} over 20 seeds (min {:.4f}, max {:.4f}), {:.1f}s", mean,
                      lo, hi, seconds_since(t0))};
}

// 8, 9, 10 share one benchmark run ------------------------------------------
struct BenchmarkRun {
  std::vector<ReportRow> rows;
  std::size_t binding_days = 0;
  std::size_t test_days = 0;
  double seconds = 0.0;
};

const BenchmarkRun& benchmark_run() {
  static const BenchmarkRun run = [] {
    BenchmarkRun r;
    BenchmarkConfig config;
    config.mismatch_probe = true;
    std::vector<std::uint64_t> seeds(50);
    std::iota(seeds.begin(), seeds.end(), 1);
    // Binding: the day's positive importance does not all fit.
    std::mutex mu;
    const DatasetHook probe = [&](SyntheticDataset& ds) {
      const DaySplit split = split_days(ds.n_days(), config);
      std::size_t binding = 0;
      for (std::size_t d : split.test) {
        const Instance in = ds.instance(d);
        double total = 0.0;
        for (const auto& t : in.tasks) total += std::max(0.0, t.importance);
        if (solve_branch_bound(in).objective < total) ++binding;
      }
      std::lock_guard lock(mu);
      r.binding_days += binding;
      r.test_days += split.test.size();
    };
    const auto t0 = Clock::now();
    r.rows = run_benchmark(GenConfig{}, config, seeds, thread_budget(), probe);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Verdict importance_ordered_benefit() {
  const auto& run = benchmark_run();
  const double oracle_om = mean(per_seed_means(run.rows, "oracle", "om"));
  const double rm_om = mean(per_seed_means(run.rows, "rm", "om"));
  const bool binds = run.binding_days > 0;
  const double gain = rm_om > 0.0 ? oracle_om / rm_om - 1.0 : 0.0;
  return {binds && rm_om > 0.0 && gain >= 0.25,
          fmt::format("mean OM oracle {:.4f} vs RM {:.4f} (+{:.1f}%), deadline binds on {}/{} test days, "
                      "benchmark {:.0f}s",
                      oracle_om, rm_om, 100.0 * gain, run.binding_days, run.test_days, run.seconds)};
}

// One-sided sign test: P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(int wins, int n) {
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
  }
  return p;
}

Verdict mismatch_degradation() {
  const auto& run = benchmark_run();
  const auto matched = per_seed_means(run.rows, "crl_matched", "objective");
  const auto permuted = per_seed_means(run.rows, "crl_permuted", "objective");
  int wins = 0, losses = 0;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (permuted[i] < matched[i]) ++wins;
    if (permuted[i] > matched[i]) ++losses;
  }
  const double p = sign_test_p(wins, wins + losses);
  const bool lower = mean(permuted) < mean(matched);
  return {matched.size() == 50 && lower && p < 0.05,
          fmt::format("mean objective matched {:.4f} vs permuted {:.4f}; permuted lower on {}/{} seeds "
                      "({} ties), sign test p = {:.2e}",
                      mean(matched), mean(permuted), wins, matched.size(),
                      static_cast<int>(matched.size()) - wins - losses, p)};
}

Verdict policy_ordering() {
  const auto& run = benchmark_run();
  const auto dcta = per_seed_means(run.rows, "dcta", "om");
  const auto crl = per_seed_means(run.rows, "crl", "om");
  const auto rm = per_seed_means(run.rows, "rm", "om");
  int ordered = 0;
  std::string failing;
  for (std::size_t i = 0; i < dcta.size(); ++i) {
    if (dcta[i] >= crl[i] && crl[i] >= rm[i]) {
      ++ordered;
    } else {
      failing += fmt::format(" {}", i + 1);
    }
  }
  const double pt_dcta = mean(per_seed_means(run.rows, "dcta", "pt_s"));
  const double pt_rm = mean(per_seed_means(run.rows, "rm", "pt_s"));
  const double ec_dcta = mean(per_seed_means(run.rows, "dcta", "ec_j"));
  const double ec_rm = mean(per_seed_means(run.rows, "rm", "ec_j"));
  const bool ok = dcta.size() == 50 && ordered >= 45 && pt_dcta < pt_rm && ec_dcta < ec_rm;
  return {ok, fmt::format("DCTA >= CRL >= RM on {}/{} seeds (out of order:{}); PT {:.1f}s vs {:.1f}s, "
                          "EC {:.3f}J vs {:.3f}J (DCTA vs RM)",
                          ordered, dcta.size(), failing.empty() ? " none" : failing, pt_dcta, pt_rm,
                          ec_dcta, ec_rm)};
}

// 11 --------------------------------------------------------------------------
struct ChillerCase {
  Eigen::MatrixXd cop;
  std::vector<double> capacity;
  std::vector<ChillerSpec> specs;
  std::vector<double> demand;
};

ChillerCase random_chiller_case(std::mt19937_64& rng) {
  ChillerCase c;
  c.cop.resize(3, 4);
  for (int i = 0; i < 3; ++i) {
    c.capacity.push_back(std::round(oracle::uniform(rng, 200, 1200)));
    c.specs.push_back({i, c.capacity.back()});
    for (int t = 0; t < 4; ++t) c.cop(i, t) = oracle::uniform(rng, 2.5, 7.0);
  }
  const double total = c.capacity[0] + c.capacity[1] + c.capacity[2];
  for (int t = 0; t < 4; ++t) c.demand.push_back(oracle::uniform(rng, -0.05, 1.02) * total);
  return c;
}

// True joint enumeration over all chillers x slots at once.
double joint_min_kwh(const ChillerCase& c, int levels, double hours, const std::vector<double>& fallback) {
  const std::size_t slots = c.demand.size();
  const std::size_t n = c.capacity.size();
  std::vector<int> k(n * slots, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double total = 0.0;
    for (std::size_t t = 0; t < slots; ++t) {
      double cost = 0.0, supply = 0.0;
      bool all_zero = true;
      for (std::size_t i = 0; i < n; ++i) {
        const int ki = k[t * n + i];
        const double s = static_cast<double>(ki) / levels;
        supply += c.capacity[i] * s;
        if (ki > 0) {
          cost += c.capacity[i] * s / c.cop(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
          all_zero = false;
        }
      }
      double slot;
      if (c.demand[t] <= 0.0) {
        slot = all_zero ? 0.0 : cost * hours;
      } else if (supply > c.demand[t]) {
        slot = cost * hours;
      } else {
        slot = std::numeric_limits<double>::infinity();
      }
      total += slot;
    }
    best = std::min(best, total);
    std::size_t d = k.size();
    bool done = true;
    while (d > 0) {
      --d;
      if (++k[d] <= levels) {
        done = false;
        break;
      }
      k[d] = 0;
    }
    if (done) break;
  }
  if (std::isfinite(best)) return best;
  // Some slot is unmeetable; price it with the fallback and the rest jointly.
  double total = 0.0;
  for (std::size_t t = 0; t < slots; ++t) {
    const double v = oracle::slot_min_kwh(c.cop.col(static_cast<Eigen::Index>(t)), c.capacity, c.demand[t],
                                          levels, hours);
    total += std::isinf(v) ? fallback[t] : v;
  }
  return total;
}

Verdict chiller_oracle() {
  std::mt19937_64 rng(20260111);
  const auto t0 = Clock::now();
  const double hours = 1.0;
  int mismatches = 0, unmeetable = 0;
  for (int i = 0; i < 100; ++i) {
    const ChillerCase c = random_chiller_case(rng);
    SequencingOptions opt;
    opt.grid_step = 0.1;
    opt.slot_hours = hours;
    const SequencingResult r = sequencing_optimize(c.cop, c.specs, c.demand, opt);
    const auto fallback = backup_plant_kwh(c.cop, c.demand, hours);
    // The objective is a sum of per-slot terms with independent ratios, so
    // the joint minimum at grid 0.1 (11^12 points) is the slot-order sum of
    // per-slot exhaustive minima.
    double expected = 0.0;
    for (std::size_t t = 0; t < 4; ++t) {
      double v = oracle::slot_min_kwh(c.cop.col(static_cast<Eigen::Index>(t)), c.capacity, c.demand[t], 10, hours);
      if (std::isinf(v)) {
        v = fallback[t];
        ++unmeetable;
      }
      expected += v;
    }
    if (r.total_kwh != expected) ++mismatches;
  }
  // The decomposition itself, against a true joint enumeration at grid 0.5.
  int joint_mismatches = 0;
  for (int i = 0; i < 30; ++i) {
    const ChillerCase c = random_chiller_case(rng);
    SequencingOptions opt;
    opt.grid_step = 0.5;
    opt.slot_hours = hours;
    const SequencingResult r = sequencing_optimize(c.cop, c.specs, c.demand, opt);
    if (r.total_kwh != joint_min_kwh(c, 2, hours, backup_plant_kwh(c.cop, c.demand, hours))) ++joint_mismatches;
  }
  const double dt = seconds_since(t0);
  return {mismatches == 0 && joint_mismatches == 0 && dt < 60.0,
          fmt::format("100 instances at grid 0.1: {} mismatches ({} fallback slots); 30 joint grid-0.5 "
                      "checks: {} mismatches; {:.1f}s",
                      mismatches, unmeetable, joint_mismatches, dt)};
}

// 12 --------------------------------------------------------------------------
Verdict probability_arithmetic() {
  // One chiller, two predictors of its COP. Operation 0 predicts the better
  // COP on 120 of 1460 days, so it is the day's best operation exactly then.
  Plant plant;
  plant.specs = {{0, 500.0}};
  plant.op_chiller = {0, 0};
  std::vector<ChillerDay> history;
  for (int d = 0; d < 1460; ++d) {
    ChillerDay day;
    day.day_id = d;
    day.demand_kw = {180.0, 320.0};
    day.op_cop.resize(2, 2);
    const bool first_wins = d % 12 == 5 && d / 12 < 120;
    day.op_cop << (first_wins ? 5.5 : 4.0), (first_wins ? 5.0 : 3.5), (first_wins ? 4.0 : 5.5),
        (first_wins ? 3.5 : 5.0);
    history.push_back(std::move(day));
  }
  const auto r = importance_from_history(plant, history, 0);
  const double pct = std::round(r.probability_to_become_optimal * 10000.0) / 100.0;
  return {pct == 8.22, fmt::format("probability {:.6f} -> {:.2f}%, mean leave-one-out importance {:.4f}",
                                   r.probability_to_become_optimal, pct, r.leave_one_out_importance)};
}

// 13 --------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
  }
  return files;
}

Verdict cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "edgealloc_acceptance_cli";
  const std::string cli = EDGEALLOC_CLI_PATH;
  const std::string config = (fs::path(EDGEALLOC_FIXTURE_DIR) / "tiny_config.json").string();
  std::vector<std::map<std::string, std::string>> runs;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path out = root / ("pass" + std::to_string(pass));
    const fs::path work = root / "work";
    fs::remove_all(work);
    fs::create_directories(work);
    fs::create_directories(out);
    for (const char* cmd : {"gen", "train", "run"}) {
      // Same output directory name on both passes; the tree is copied after.
      const std::string line = fmt::format("\"{}\" {} -c \"{}\" -o \"{}\" {} > \"{}\" 2>&1", cli, cmd, config,
                                           work.string(),
                                           std::string(cmd) == "run"
                                               ? fmt::format("--dataset \"{}\"", (work / "dataset").string())
                                               : std::string(),
                                           (out / (std::string(cmd) + ".stdout")).string());
      if (std::system(line.c_str()) != 0) {
        return {false, fmt::format("`{}` failed on pass {}: {}", cmd, pass, slurp(out / (std::string(cmd) + ".stdout")))};
      }
    }
    auto files = snapshot(work);
    for (auto& [name, body] : snapshot(out)) files["stdout/" + name] = body;
    runs.push_back(std::move(files));
  }
  fs::remove_all(root);
  std::vector<std::string> differing;
  for (const auto& [name, body] : runs[0]) {
    const auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != body) differing.push_back(name);
  }
  const bool same_set = runs[0].size() == runs[1].size();
  std::string diff;
  for (const auto& d : differing) diff += " " + d;
  return {differing.empty() && same_set && runs[0].size() > 5,
          fmt::format("gen/train/run twice: {} files compared, differing:{}", runs[0].size(),
                      differing.empty() ? " none" : diff)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "feasibility suite", feasibility_suite},
      {3, "CRL convergence", crl_convergence},
      {4, "reward contract", reward_contract},
      {5, "SVM numerics", svm_numerics},
      {6, "simulator arithmetic", simulator_arithmetic},
      {7, "long-tail generator", long_tail},
      {8, "importance-ordered benefit", importance_ordered_benefit},
      {9, "environment-mismatch degradation", mismatch_degradation},
      {10, "policy ordering", policy_ordering},
      {11, "chiller oracle", chiller_oracle},
      {12, "probability arithmetic", probability_arithmetic},
      {13, "CLI determinism", cli_determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

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

#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "edgealloc/crl.hpp"
#include "edgealloc/csv.hpp"
#include "edgealloc/environment.hpp"
#include "edgealloc/knapsack.hpp"
#include "edgealloc/mdp.hpp"
#include "edgealloc/merit.hpp"
#include "edgealloc/qpolicy.hpp"
#include "oracles.hpp"

namespace edgealloc {
namespace {

std::vector<double> importances(const Instance& in) {
  std::vector<double> out;
  for (const auto& t : in.tasks) out.push_back(t.importance);
  return out;
}

std::vector<double> capacities(const Instance& in) {
  std::vector<double> out;
  for (const auto& d : in.devices) out.push_back(d.capacity);
  return out;
}

EnvironmentMatrix env_for(const Instance& in) {
  return build_environment(importances(in), capacities(in), {{0.0}});
}

TEST(Environment, OuterProductWithClamping) {
  const std::vector<double> imp{2.0, -1.0, 0.5};
  const std::vector<double> cap{4.0, 10.0};
  const auto env = build_environment(imp, cap, {{1.0, 2.0}}, 7);
  ASSERT_EQ(env.n_tasks(), 3);
  ASSERT_EQ(env.n_devices(), 2);
  EXPECT_EQ(env.values(0, 1), 20.0);
  EXPECT_EQ(env.values(1, 0), 0.0);
  EXPECT_EQ(env.values(2, 0), 2.0);
  EXPECT_EQ(env.importance, (std::vector<double>{2.0, 0.0, 0.5}));
  EXPECT_EQ(env.day_id, 7);
  EXPECT_THROW(build_environment({}, cap, {}), std::invalid_argument);
}

TEST(Environment, ImpliedImportanceWithoutStoredVector) {
  DeviceSet devices{oracle::device(0, 4.0), oracle::device(1, 6.0)};
  EnvironmentMatrix env;
  env.values = Eigen::MatrixXd(2, 2);
  env.values << 8.0, 12.0, 0.0, 0.0;
  EXPECT_EQ(implied_importance(env, devices), (std::vector<double>{2.0, 0.0}));
  env.importance = {5.0, 1.0};
  EXPECT_EQ(implied_importance(env, devices), (std::vector<double>{5.0, 1.0}));
}

EnvironmentLibrary small_library() {
  const std::vector<double> cap{1.0};
  std::vector<EnvironmentMatrix> entries;
  entries.push_back(build_environment(std::vector<double>{1.0}, cap, {{0.0, 0.0}}, 0));
  entries.push_back(build_environment(std::vector<double>{2.0}, cap, {{10.0, 0.0}}, 1));
  entries.push_back(build_environment(std::vector<double>{4.0}, cap, {{0.0, 5.0}}, 2));
  entries.push_back(build_environment(std::vector<double>{8.0}, cap, {{10.0, 5.0}}, 3));
  return EnvironmentLibrary(std::move(entries));
}

TEST(Environment, NearestNeighbourInZScoredSpace) {
  const auto lib = small_library();
  // Both features have sd 5 and 2.5, so (6, 1) is z-closer to day 1 than day 2.
  const auto nn = knn_neighbors(lib, {{6.0, 1.0}}, 2);
  ASSERT_EQ(nn.size(), 2u);
  EXPECT_EQ(nn[0], 1u);
  const auto env = knn_environment(lib, {{6.0, 1.0}}, 1);
  EXPECT_EQ(env.day_id, 1);
  EXPECT_EQ(env.values(0, 0), 2.0);
}

TEST(Environment, KnnMixtureAverages) {
  const auto lib = small_library();
  const auto env = knn_environment(lib, {{10.0, 2.4}}, 2);
  EXPECT_EQ(env.day_id, 1);
  EXPECT_DOUBLE_EQ(env.values(0, 0), 5.0);
  EXPECT_EQ(env.importance, (std::vector<double>{5.0}));
  EXPECT_EQ(env.context.features, (std::vector<double>{10.0, 2.4}));
}

TEST(Environment, ExactContextMatchReturnsItsOwnEntry) {
  const auto lib = small_library();
  for (const auto& e : lib.entries()) {
    EXPECT_EQ(knn_environment(lib, e.context, 1).day_id, e.day_id);
  }
}

TEST(Environment, LibraryCsvRoundTrip) {
  const std::vector<int> days{3, 5};
  const std::vector<SensingContext> ctx{{{1.5, 2.0}}, {{-1.0, 0.25}}};
  const std::vector<std::vector<double>> imp{{0.5, 0.0}, {1.0, 2.0}};
  const auto path = std::filesystem::temp_directory_path() / "edgealloc_envlib_test.csv";
  csv::write_text(path, environment_library_to_csv(days, ctx, imp));
  DeviceSet devices{oracle::device(0, 2.0)};
  const auto lib = read_environment_library(path, devices);
  std::filesystem::remove(path);
  ASSERT_EQ(lib.size(), 2u);
  EXPECT_EQ(lib.context_dim(), 2u);
  EXPECT_EQ(lib.entries()[1].day_id, 5);
  EXPECT_EQ(lib.entries()[1].values(1, 0), 4.0);
}

Instance two_by_two() {
  return {{{0, 4, 2, 3.0, 100, 0}, {1, 4, 2, 1.0, 100, 0}, {2, 9, 1, 2.0, 100, 0}},
          {oracle::device(0, 3), oracle::device(1, 3)},
          10.0};
}

TEST(Mdp, InitialStateAndActions) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  const auto s0 = mdp.initial_state();
  EXPECT_EQ(mdp.n_actions(), 4u);
  EXPECT_EQ(s0.cursor_device, 0u);
  EXPECT_EQ(s0.remaining_time, (std::vector<double>{10.0, 10.0}));
  EXPECT_FALSE(mdp.is_terminal(s0));
  EXPECT_THROW(mdp.step(s0, 4), std::out_of_range);
}

TEST(Mdp, InvalidTaskActionAdvances) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  auto r = mdp.step(mdp.initial_state(), 0);
  EXPECT_EQ(r.next.selected.device_of(0), 0u);
  EXPECT_EQ(r.reward, 0.0);
  // Task 1 no longer fits device 0 by capacity, so it acts as advance.
  r = mdp.step(r.next, 1);
  EXPECT_EQ(r.next.cursor_device, 1u);
  EXPECT_FALSE(r.next.selected.device_of(1).has_value());
  // Re-placing task 0 also advances.
  const auto again = mdp.step(mdp.step(mdp.initial_state(), 0).next, 0);
  EXPECT_EQ(again.next.cursor_device, 1u);
}

TEST(Mdp, TerminalRewardOnlyAtEnd) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  auto r = mdp.step(mdp.initial_state(), 0);  // task 0 -> device 0
  EXPECT_FALSE(r.done);
  EXPECT_EQ(r.reward, 0.0);
  r = mdp.step(r.next, 3);  // advance; task 1 still fits device 1
  EXPECT_FALSE(r.done);
  EXPECT_EQ(r.reward, 0.0);
  r = mdp.step(r.next, 1);  // task 2 no longer fits anywhere
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.reward, 4.0);
}

TEST(Mdp, RandomWalksStayFeasibleAndTerminate) {
  std::mt19937_64 rng(201);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance in = oracle::random_instance(rng, 7, 3, 1);
    const auto env = env_for(in);
    const TatimMdp mdp(env, in);
    auto s = mdp.initial_state();
    std::size_t steps = 0;
    bool done = mdp.is_terminal(s);
    double reward = 0.0;
    while (!done) {
      const auto a = static_cast<std::size_t>(oracle::uniform_int(rng, 0, static_cast<int>(in.n_tasks())));
      const auto r = mdp.step(s, a);
      if (!r.done) {
        EXPECT_EQ(r.reward, 0.0);
      }
      reward = r.reward;
      done = r.done;
      s = r.next;
      ASSERT_LE(++steps, in.n_tasks() + in.n_devices());
      EXPECT_TRUE(oracle::feasible(in, s.selected));
    }
    if (steps > 0) {
      EXPECT_DOUBLE_EQ(reward, oracle::objective(in, s.selected));
    }
  }
}

TEST(Mdp, ShapeMismatchThrows) {
  const Instance in = two_by_two();
  const auto env = build_environment(std::vector<double>{1.0}, std::vector<double>{1.0}, {});
  EXPECT_THROW(TatimMdp(env, in), std::invalid_argument);
}

TEST(QPolicy, TabularUpdateRule) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  auto q = QPolicy::tabular(mdp.n_actions(), 0.9, 0.1, 0.5);
  const auto s0 = mdp.initial_state();
  const auto r = mdp.step(s0, 0);
  q.set_q(state_key(r.next), 2, 4.0);
  q.set_q(state_key(r.next), 3, 1.0);
  q.set_q(state_key(s0), 0, 1.0);
  const double loss = q.update({s0, 0, 0.0, r.next, false}, env);
  // target = 0 + 0.9 * 4, Q <- 1 + 0.5 * (3.6 - 1)
  EXPECT_DOUBLE_EQ(q.q_values(s0, env)[0], 2.3);
  EXPECT_DOUBLE_EQ(loss, 2.6 * 2.6);

  // Terminal transitions do not bootstrap.
  q.update({s0, 1, 2.0, r.next, true}, env);
  EXPECT_DOUBLE_EQ(q.q_values(s0, env)[1], 1.0);
}

TEST(QPolicy, GreedyTiesPreferAdvance) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  auto q = QPolicy::tabular(mdp.n_actions(), 1.0, 0.0, 0.1);
  const auto s0 = mdp.initial_state();
  EXPECT_EQ(q.greedy_action(s0, env), mdp.advance_action());
  q.set_q(state_key(s0), 1, 2.0);
  q.set_q(state_key(s0), 2, 2.0);
  EXPECT_EQ(q.greedy_action(s0, env), 1u);
  q.set_q(state_key(s0), 3, 2.0);
  EXPECT_EQ(q.greedy_action(s0, env), 3u);
}

TEST(QPolicy, RejectsBadHyperParameters) {
  EXPECT_THROW(QPolicy::tabular(3, 1.5, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(QPolicy::tabular(3, 0.9, -0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(QPolicy::tabular(3, 0.9, 0.1, 0.0), std::invalid_argument);
}

TEST(QPolicy, JsonRoundTrip) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  auto q = QPolicy::tabular(mdp.n_actions(), 0.95, 0.2, 0.1);
  q.set_q(state_key(mdp.initial_state()), 2, 0.1 + 0.2);
  EXPECT_EQ(QPolicy::from_json(q.to_json()), q);

  const auto net = QPolicy::approximate(QNetwork(encoded_state_size(3, 2), 8, 4, 9), 0.9, 0.1, 1e-3);
  EXPECT_EQ(QPolicy::from_json(net.to_json()), net);
  EXPECT_THROW(QPolicy::from_json("{\"mode\":"), DataError);
}

TEST(QPolicy, StateKeyHexRoundTrip) {
  const Instance in = two_by_two();
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  const auto s = mdp.step(mdp.initial_state(), 0).next;
  EXPECT_EQ(state_key_from_hex(state_key_hex(state_key(s))), state_key(s));
  EXPECT_NE(state_key(s), state_key(mdp.initial_state()));
}

TEST(QNetwork, GradientMatchesFiniteDifferences) {
  QNetwork net(5, 6, 3, 17);
  Eigen::VectorXd x(5);
  x << 0.3, -1.0, 0.0, 1.0, 0.7;
  const Eigen::VectorXd grad = net.td_gradient(x, 1, 0.8);
  const Eigen::VectorXd theta = net.parameters();
  ASSERT_EQ(static_cast<std::size_t>(theta.size()), net.parameter_count());
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd plus = theta, minus = theta;
    plus(i) += h;
    minus(i) -= h;
    QNetwork a = net, b = net;
    a.set_parameters(plus);
    b.set_parameters(minus);
    const double fd = (a.td_loss(x, 1, 0.8) - b.td_loss(x, 1, 0.8)) / (2 * h);
    EXPECT_NEAR(grad(i), fd, 1e-6) << "parameter " << i;
  }
}

TEST(Crl, LearnsOptimumOnSmallInstances) {
  std::mt19937_64 rng(202);
  CrlHyperParams params;
  params.episodes = 4000;
  int hits = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const Instance in = oracle::random_instance(rng, 5, 1, 3);
    const auto env = env_for(in);
    const auto result = train_crl(env, in, params, 1000 + static_cast<std::uint64_t>(trial));
    const auto alloc = allocate_crl(result.policy, env, in);
    EXPECT_TRUE(oracle::feasible(in, alloc));
    EXPECT_DOUBLE_EQ(result.best_return, oracle::objective(in, alloc));
    hits += std::abs(oracle::objective(in, alloc) - oracle::best_objective(in)) < 1e-9 ? 1 : 0;
  }
  EXPECT_GE(hits, trials - 1);
}

TEST(Crl, DeterministicGivenSeed) {
  std::mt19937_64 rng(203);
  const Instance in = oracle::random_instance(rng, 6, 2, 6);
  const auto env = env_for(in);
  CrlHyperParams params;
  params.episodes = 500;
  const auto a = train_crl(env, in, params, 5);
  const auto b = train_crl(env, in, params, 5);
  EXPECT_EQ(a.policy, b.policy);
  EXPECT_EQ(a.td_loss, b.td_loss);
  EXPECT_EQ(a.episodes_run, 500u);
}

TEST(Crl, PatienceStopsEarly) {
  std::mt19937_64 rng(204);
  const Instance in = oracle::random_instance(rng, 4, 1, 2);
  const auto env = env_for(in);
  CrlHyperParams params;
  params.episodes = 5000;
  params.patience = 200;
  EXPECT_LT(train_crl(env, in, params, 1).episodes_run, 5000u);
}

TEST(Crl, ApproximateModeProducesFeasibleAllocations) {
  std::mt19937_64 rng(205);
  CrlHyperParams params;
  params.mode = QMode::kApproximate;
  params.episodes = 300;
  params.hidden_units = 16;
  for (int trial = 0; trial < 5; ++trial) {
    const Instance in = oracle::random_instance(rng, 6, 2, 2);
    const auto env = env_for(in);
    const auto result = train_crl(env, in, params, 3);
    EXPECT_EQ(result.policy.mode(), QMode::kApproximate);
    EXPECT_TRUE(oracle::feasible(in, allocate_crl(result.policy, env, in)));
  }
}

TEST(Crl, GreedyTrajectoryEndsTerminal) {
  std::mt19937_64 rng(206);
  const Instance in = oracle::random_instance(rng, 6, 2, 3);
  const auto env = env_for(in);
  const TatimMdp mdp(env, in);
  CrlHyperParams params;
  params.episodes = 200;
  const auto result = train_crl(env, in, params, 8);
  const auto traj = greedy_trajectory(result.policy, mdp);
  ASSERT_FALSE(traj.empty());
  EXPECT_EQ(traj.front(), mdp.initial_state());
  EXPECT_TRUE(mdp.is_terminal(traj.back()));
  EXPECT_DOUBLE_EQ(greedy_return(result.policy, mdp), mdp.terminal_reward(traj.back()));
}

}  // namespace
}  // namespace edgealloc

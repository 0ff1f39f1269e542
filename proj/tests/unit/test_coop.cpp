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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "edgealloc/coop.hpp"
#include "edgealloc/crl.hpp"
#include "oracles.hpp"

namespace edgealloc {
namespace {

ScoreMatrix matrix(std::initializer_list<std::initializer_list<double>> rows, ScoreSource src) {
  ScoreMatrix s;
  s.source = src;
  s.scores.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) s.scores(r, c++) = v;
    ++r;
  }
  return s;
}

TEST(EnsembleWeights, Validation) {
  EXPECT_NO_THROW(EnsembleWeights(0.3, 0.7));
  EXPECT_THROW(EnsembleWeights(0.5, 0.6), std::invalid_argument);
  EXPECT_THROW(EnsembleWeights(-0.1, 1.1), std::invalid_argument);
  EXPECT_EQ(EnsembleWeights::crl_only().w2(), 0.0);
}

TEST(Combine, WeightedSumKeepsExclusions) {
  const auto a = matrix({{1.0, kExcluded}, {0.0, 2.0}}, ScoreSource::kCrl);
  const auto b = matrix({{3.0, 1.0}, {kExcluded, -2.0}}, ScoreSource::kSvm);
  const auto f = combine(a, b, {0.25, 0.75});
  EXPECT_EQ(f.source, ScoreSource::kCombined);
  EXPECT_DOUBLE_EQ(f.scores(0, 0), 2.5);
  EXPECT_EQ(f.scores(0, 1), kExcluded);
  EXPECT_EQ(f.scores(1, 0), kExcluded);
  EXPECT_DOUBLE_EQ(f.scores(1, 1), -1.0);
}

TEST(Combine, ZeroWeightStillPropagatesExclusion) {
  const auto a = matrix({{kExcluded}}, ScoreSource::kCrl);
  const auto b = matrix({{1.0}}, ScoreSource::kSvm);
  EXPECT_EQ(combine(a, b, {0.0, 1.0}).scores(0, 0), kExcluded);
}

TEST(ProjectFeasible, HighestScoreFirst) {
  Instance in{{{0, 5, 1, 1, 0, 0}, {1, 5, 1, 1, 0, 0}, {2, 5, 1, 1, 0, 0}},
              {oracle::device(0, 10), oracle::device(1, 10)},
              8.0};
  const auto s = matrix({{3.0, 1.0}, {2.0, 2.5}, {kExcluded, 0.5}}, ScoreSource::kCombined);
  const auto a = project_feasible(s, in);
  EXPECT_EQ(a.device_of(0), 0u);
  EXPECT_EQ(a.device_of(1), 1u);
  EXPECT_FALSE(a.device_of(2).has_value());
}

TEST(ProjectFeasible, AlwaysFeasibleNeverExcluded) {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 500; ++trial) {
    const Instance in = oracle::random_instance(rng, 10, 3);
    ScoreMatrix s;
    s.scores.resize(static_cast<Eigen::Index>(in.n_tasks()), static_cast<Eigen::Index>(in.n_devices()));
    for (Eigen::Index j = 0; j < s.scores.rows(); ++j) {
      for (Eigen::Index p = 0; p < s.scores.cols(); ++p) {
        s.scores(j, p) = oracle::uniform(rng, 0, 1) < 0.2 ? kExcluded : oracle::uniform(rng, -2, 2);
      }
    }
    const auto a = project_feasible(s, in);
    EXPECT_TRUE(oracle::feasible(in, a));
    for (const auto& [j, p] : a.assignment()) {
      EXPECT_TRUE(std::isfinite(s.scores(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p))));
    }
  }
}

std::vector<TaskFeatureRow> feature_rows(std::size_t n) {
  std::vector<TaskFeatureRow> rows;
  for (std::size_t j = 0; j < n; ++j) {
    TaskFeatureRow r;
    r.task_id = static_cast<int>(j);
    r.general = {static_cast<double>(j), 0.1 * static_cast<double>(j % 3)};
    r.domain = {"A", "m", 10.0 * static_cast<double>(j), "sunny", 20, 100, 5, 3};
    rows.push_back(r);
  }
  return rows;
}

TEST(SvmScores, NormalizedAndBroadcast) {
  const auto rows = feature_rows(4);
  SvmModel model{{}, FeatureSchema::fit(rows)};
  model.w.assign(model.schema.dimension(), 0.0);
  model.w[0] = 1.0;
  const auto s = svm_scores(model, rows, 3);
  EXPECT_EQ(s.source, ScoreSource::kSvm);
  ASSERT_EQ(s.scores.cols(), 3);
  EXPECT_NEAR(s.scores.col(0).mean(), 0.0, 1e-12);
  EXPECT_NEAR((s.scores.col(0).array() - s.scores.col(0).mean()).square().mean(), 1.0, 1e-12);
  EXPECT_EQ(s.scores.col(0), s.scores.col(2));
  EXPECT_GT(s.scores(3, 0), s.scores(0, 0));
}

EnvironmentMatrix env_for(const Instance& in) {
  std::vector<double> imp, cap;
  for (const auto& t : in.tasks) imp.push_back(t.importance);
  for (const auto& d : in.devices) cap.push_back(d.capacity);
  return build_environment(imp, cap, {{0.0}});
}

TEST(CrlScores, ExcludesValuelessCells) {
  Instance in{{{0, 2, 1, 3, 0, 0}, {1, 2, 1, 0, 0, 0}, {2, 2, 1, 1, 0, 0}},
              {oracle::device(0, 5), oracle::device(1, 5)},
              10.0};
  const auto env = env_for(in);
  const auto q = QPolicy::tabular(4, 1.0, 0.0, 0.1);
  const auto s = crl_scores(q, env, in);
  EXPECT_EQ(s.source, ScoreSource::kCrl);
  EXPECT_EQ(s.scores(1, 0), kExcluded);
  EXPECT_EQ(s.scores(1, 1), kExcluded);
  // An all-zero table advances straight through; constant columns are 0.
  EXPECT_EQ(s.scores(0, 0), 0.0);
  EXPECT_EQ(s.scores(2, 1), 0.0);
}

TEST(TuneWeights, PrefersLargerCrlWeightOnTies) {
  Instance in{{{0, 1, 1, 1, 0, 0}, {1, 1, 1, 2, 0, 0}}, {oracle::device(0, 1)}, 10.0};
  const auto crl = matrix({{1.0}, {-1.0}}, ScoreSource::kCrl);
  const auto svm = matrix({{-1.0}, {1.0}}, ScoreSource::kSvm);
  const auto merit = [in](const AllocationMatrix& a) { return oracle::objective(in, a); };
  const std::vector<ValidationCase> cases{{in, crl, svm, merit}};
  // F(task 0) = 2 w1 - 1, so task 1 wins only once w1 < 0.5.
  EXPECT_NEAR(tune_weights(cases).w1(), 0.4, 1e-12);

  const std::vector<ValidationCase> flat{{in, crl, crl, merit}};
  EXPECT_EQ(tune_weights(flat).w1(), 1.0);
  EXPECT_THROW(tune_weights(std::span<const ValidationCase>{}), std::invalid_argument);
}

TEST(Baselines, DmlPicksMostRemainingTime) {
  Instance in{{{0, 4, 1, 1, 0, 0}, {1, 4, 1, 1, 0, 0}, {2, 4, 1, 1, 0, 0}, {3, 4, 1, 1, 0, 0},
               {4, 4, 1, 1, 0, 0}},
              {oracle::device(0, 10), oracle::device(1, 10)},
              10.0};
  const auto a = allocate_dml(in);
  EXPECT_EQ(a.device_of(0), 0u);
  EXPECT_EQ(a.device_of(1), 1u);
  EXPECT_EQ(a.device_of(2), 0u);
  EXPECT_EQ(a.device_of(3), 1u);
  EXPECT_FALSE(a.device_of(4).has_value());
}

TEST(Baselines, RmFeasibleAndSeeded) {
  std::mt19937_64 rng(402);
  bool differs = false;
  for (int trial = 0; trial < 300; ++trial) {
    const Instance in = oracle::random_instance(rng, 10, 3, 4);
    const auto a = allocate_rm(in, 7);
    EXPECT_TRUE(oracle::feasible(in, a));
    EXPECT_TRUE(oracle::feasible(in, allocate_dml(in)));
    EXPECT_EQ(a, allocate_rm(in, 7));
    differs = differs || !(a == allocate_rm(in, 8));
  }
  EXPECT_TRUE(differs);
}

TEST(Dcta, FeasibleForAnyWeights) {
  std::mt19937_64 rng(403);
  CrlHyperParams params;
  params.episodes = 300;
  for (int trial = 0; trial < 10; ++trial) {
    const Instance in = oracle::random_instance(rng, 8, 3, 1);
    const auto env = env_for(in);
    const auto policy = train_crl(env, in, params, 11).policy;
    const auto rows = feature_rows(in.n_tasks());
    SvmModel model{{}, FeatureSchema::fit(rows)};
    model.w.assign(model.schema.dimension(), 0.0);
    model.w[1] = -1.0;
    for (double w1 : {0.0, 0.3, 1.0}) {
      const auto a = allocate_dcta(policy, model, env, rows, in, {w1, 1.0 - w1});
      EXPECT_TRUE(oracle::feasible(in, a));
    }
  }
}

}  // namespace
}  // namespace edgealloc

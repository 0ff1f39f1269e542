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

// Domain-assisted feature engineering for the local SVM predictor.
//
// Encoded layout (see FeatureSchema::encode):
//   past_success, prediction_accuracy,
//   one-hot building, one-hot model_type, operating_power_kw,
//   one-hot weather_condition, outdoor_temp_c, latest_cooling_load_kw,
//   water_mass_flow_kg_s, water_temp_diff_c, 1 (bias)
// Numeric fields are z-scored with the statistics of the fitting history.
// A category that never occurred in the history encodes as an all-zero block.

#ifndef EDGEALLOC_FEATURES_HPP_
#define EDGEALLOC_FEATURES_HPP_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "edgealloc/svm.hpp"

namespace edgealloc {

// One past execution of a learning task.
struct TaskExecutionRecord {
  int day_id = 0;
  int task_id = 0;
  bool selected_in_optimal = false;
  double predicted = 0.0;
  double actual = 0.0;
};

struct GeneralFeatures {
  double past_success = 0.0;         // days selected in the optimal decision
  double prediction_accuracy = 0.0;  // in [0, 1]
};

// past_success counts the task's records with selected_in_optimal set.
// prediction_accuracy is 1 - min(1, mean|pred - real| / mean|real|) over the
// task's records; 0 when the task has no records (no evidence yet) and 1
// when every past prediction was exact.
GeneralFeatures general_features(std::span<const TaskExecutionRecord> history,
                                 int task_id);

struct DomainFeatures {
  std::string building;
  std::string model_type;
  double operating_power_kw = 0.0;
  std::string weather_condition;
  double outdoor_temp_c = 0.0;
  double latest_cooling_load_kw = 0.0;
  double water_mass_flow_kg_s = 0.0;
  double water_temp_diff_c = 0.0;
};

struct TaskFeatureRow {
  int day_id = 0;
  int task_id = 0;
  GeneralFeatures general;
  DomainFeatures domain;
};

inline constexpr std::size_t kNumericFeatureCount = 7;

class FeatureSchema {
 public:
  FeatureSchema() = default;

  // Vocabularies are sorted; statistics are population mean/std.
  static FeatureSchema fit(std::span<const TaskFeatureRow> history);

  std::vector<double> encode(const TaskFeatureRow& row) const;
  std::size_t dimension() const;

  const std::vector<std::string>& buildings() const { return buildings_; }
  const std::vector<std::string>& model_types() const { return model_types_; }
  const std::vector<std::string>& weather() const { return weather_; }

  std::string to_json() const;
  static FeatureSchema from_json(const std::string& text);

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

 private:
  std::vector<std::string> buildings_;
  std::vector<std::string> model_types_;
  std::vector<std::string> weather_;
  std::array<double, kNumericFeatureCount> mean_{};
  std::array<double, kNumericFeatureCount> stdev_{};
};

/// Fits the schema on `history` and encodes `current`.
std::vector<double> build_features(std::span<const TaskFeatureRow> history,
                                   const TaskFeatureRow& current);

struct SvmModel {
  std::vector<double> w;  // dimension = schema.dimension()
  FeatureSchema schema;

  // {"w":[...],"feature_schema":{...}}
  std::string to_json() const;
  static SvmModel from_json(const std::string& text);
};

/// Per-task SVM score w^T x on encoded rows; throws on dimension mismatch.
std::vector<double> predict_scores(const SvmModel& model,
                                   std::span<const TaskFeatureRow> rows);

struct LabeledFeatureRow {
  TaskFeatureRow row;
  int label = -1;  // +1 iff the task was in the day's optimal allocation
};

// Training-data CSV:
//   day_id,task_id,past_success,prediction_accuracy,building,model_type,
//   operating_power_kw,weather_condition,outdoor_temp_c,
//   latest_cooling_load_kw,water_mass_flow_kg_s,water_temp_diff_c,label
std::vector<LabeledFeatureRow> read_training_rows(
    const std::filesystem::path& path);
std::string training_rows_to_csv(std::span<const LabeledFeatureRow> rows);

std::vector<SvmSample> to_samples(const FeatureSchema& schema,
                                  std::span<const LabeledFeatureRow> rows);

}  // namespace edgealloc

#endif  // EDGEALLOC_FEATURES_HPP_

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

#include "edgealloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "edgealloc/csv.hpp"
#include "edgealloc/types.hpp"
#include "json.hpp"

namespace edgealloc {

using nlohmann::json;

namespace {

std::array<double, kNumericFeatureCount> numeric_fields(const TaskFeatureRow& r) {
  return {r.general.past_success,       r.general.prediction_accuracy,
          r.domain.operating_power_kw,  r.domain.outdoor_temp_c,
          r.domain.latest_cooling_load_kw, r.domain.water_mass_flow_kg_s,
          r.domain.water_temp_diff_c};
}

void one_hot(const std::vector<std::string>& vocab, const std::string& value,
             std::vector<double>& out) {
  for (const auto& v : vocab) out.push_back(v == value ? 1.0 : 0.0);
}

std::vector<std::string> sorted_unique(std::set<std::string> values) {
  return {values.begin(), values.end()};
}

}  // namespace

GeneralFeatures general_features(std::span<const TaskExecutionRecord> history,
                                 int task_id) {
  GeneralFeatures out;
  double abs_err = 0.0;
  double abs_real = 0.0;
  std::size_t count = 0;
  for (const auto& rec : history) {
    if (rec.task_id != task_id) continue;
    if (rec.selected_in_optimal) out.past_success += 1.0;
    abs_err += std::abs(rec.predicted - rec.actual);
    abs_real += std::abs(rec.actual);
    ++count;
  }
  if (count == 0) return out;
  if (abs_err == 0.0) {
    out.prediction_accuracy = 1.0;
  } else if (abs_real > 0.0) {
    out.prediction_accuracy = 1.0 - std::min(1.0, abs_err / abs_real);
  }
  return out;
}

FeatureSchema FeatureSchema::fit(std::span<const TaskFeatureRow> history) {
  FeatureSchema s;
  std::set<std::string> buildings, models, weather;
  for (const auto& r : history) {
    buildings.insert(r.domain.building);
    models.insert(r.domain.model_type);
    weather.insert(r.domain.weather_condition);
  }
  s.buildings_ = sorted_unique(std::move(buildings));
  s.model_types_ = sorted_unique(std::move(models));
  s.weather_ = sorted_unique(std::move(weather));

  s.mean_.fill(0.0);
  s.stdev_.fill(0.0);
  if (history.empty()) return s;
  const double n = static_cast<double>(history.size());
  for (const auto& r : history) {
    const auto v = numeric_fields(r);
    for (std::size_t i = 0; i < kNumericFeatureCount; ++i) s.mean_[i] += v[i];
  }
  for (double& m : s.mean_) m /= n;
  for (const auto& r : history) {
    const auto v = numeric_fields(r);
    for (std::size_t i = 0; i < kNumericFeatureCount; ++i) {
      const double d = v[i] - s.mean_[i];
      s.stdev_[i] += d * d;
    }
  }
  for (double& sd : s.stdev_) sd = std::sqrt(sd / n);
  return s;
}

std::size_t FeatureSchema::dimension() const {
  return kNumericFeatureCount + buildings_.size() + model_types_.size() +
         weather_.size() + 1;
}

std::vector<double> FeatureSchema::encode(const TaskFeatureRow& row) const {
  const auto raw = numeric_fields(row);
  std::array<double, kNumericFeatureCount> z{};
  for (std::size_t i = 0; i < kNumericFeatureCount; ++i) {
    z[i] = stdev_[i] > 0.0 ? (raw[i] - mean_[i]) / stdev_[i] : 0.0;
  }
  std::vector<double> out;
  out.reserve(dimension());
  out.push_back(z[0]);
  out.push_back(z[1]);
  one_hot(buildings_, row.domain.building, out);
  one_hot(model_types_, row.domain.model_type, out);
  out.push_back(z[2]);
  one_hot(weather_, row.domain.weather_condition, out);
  out.push_back(z[3]);
  out.push_back(z[4]);
  out.push_back(z[5]);
  out.push_back(z[6]);
  out.push_back(1.0);
  return out;
}

std::string FeatureSchema::to_json() const {
  json j;
  j["buildings"] = buildings_;
  j["model_types"] = model_types_;
  j["weather_conditions"] = weather_;
  j["numeric_fields"] = {"past_success",          "prediction_accuracy",
                         "operating_power_kw",    "outdoor_temp_c",
                         "latest_cooling_load_kw", "water_mass_flow_kg_s",
                         "water_temp_diff_c"};
  j["numeric_mean"] = mean_;
  j["numeric_std"] = stdev_;
  return j.dump();
}

FeatureSchema FeatureSchema::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FeatureSchema s;
    s.buildings_ = j.at("buildings").get<std::vector<std::string>>();
    s.model_types_ = j.at("model_types").get<std::vector<std::string>>();
    s.weather_ = j.at("weather_conditions").get<std::vector<std::string>>();
    s.mean_ = j.at("numeric_mean").get<std::array<double, kNumericFeatureCount>>();
    s.stdev_ = j.at("numeric_std").get<std::array<double, kNumericFeatureCount>>();
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed feature schema: ") + e.what());
  }
}

std::vector<double> build_features(std::span<const TaskFeatureRow> history,
                                   const TaskFeatureRow& current) {
  return FeatureSchema::fit(history).encode(current);
}

std::string SvmModel::to_json() const {
  json j;
  j["w"] = w;
  j["feature_schema"] = json::parse(schema.to_json());
  return j.dump();
}

SvmModel SvmModel::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    SvmModel m;
    m.w = j.at("w").get<std::vector<double>>();
    m.schema = FeatureSchema::from_json(j.at("feature_schema").dump());
    if (m.w.size() != m.schema.dimension()) {
      throw DataError("SVM model: weight/schema dimension mismatch");
    }
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed SVM model: ") + e.what());
  }
}

std::vector<double> predict_scores(const SvmModel& model,
                                   std::span<const TaskFeatureRow> rows) {
  std::vector<std::vector<double>> encoded;
  encoded.reserve(rows.size());
  for (const auto& r : rows) encoded.push_back(model.schema.encode(r));
  return predict_scores(model.w, encoded);
}

std::vector<LabeledFeatureRow> read_training_rows(
    const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  std::vector<LabeledFeatureRow> out;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    LabeledFeatureRow lr;
    lr.row.day_id = static_cast<int>(t.integer(r, t.column("day_id")));
    lr.row.task_id = static_cast<int>(t.integer(r, t.column("task_id")));
    lr.row.general.past_success = t.real(r, t.column("past_success"));
    lr.row.general.prediction_accuracy =
        t.real(r, t.column("prediction_accuracy"));
    lr.row.domain.building = t.cell(r, t.column("building"));
    lr.row.domain.model_type = t.cell(r, t.column("model_type"));
    lr.row.domain.operating_power_kw = t.real(r, t.column("operating_power_kw"));
    lr.row.domain.weather_condition = t.cell(r, t.column("weather_condition"));
    lr.row.domain.outdoor_temp_c = t.real(r, t.column("outdoor_temp_c"));
    lr.row.domain.latest_cooling_load_kw =
        t.real(r, t.column("latest_cooling_load_kw"));
    lr.row.domain.water_mass_flow_kg_s =
        t.real(r, t.column("water_mass_flow_kg_s"));
    lr.row.domain.water_temp_diff_c = t.real(r, t.column("water_temp_diff_c"));
    lr.label = static_cast<int>(t.integer(r, t.column("label")));
    if (lr.label != 1 && lr.label != -1) {
      throw DataError(path.string() + ": label must be -1 or 1");
    }
    if (lr.row.general.past_success < 0.0 ||
        lr.row.general.prediction_accuracy < 0.0 ||
        lr.row.general.prediction_accuracy > 1.0) {
      throw DataError(path.string() + ": general feature out of range");
    }
    out.push_back(std::move(lr));
  }
  return out;
}

std::string training_rows_to_csv(std::span<const LabeledFeatureRow> rows) {
  csv::Writer w({"day_id", "task_id", "past_success", "prediction_accuracy",
                 "building", "model_type", "operating_power_kw",
                 "weather_condition", "outdoor_temp_c", "latest_cooling_load_kw",
                 "water_mass_flow_kg_s", "water_temp_diff_c", "label"});
  for (const auto& lr : rows) {
    const auto& r = lr.row;
    w.add_row({std::to_string(r.day_id), std::to_string(r.task_id),
               csv::format_real(r.general.past_success),
               csv::format_real(r.general.prediction_accuracy),
               r.domain.building, r.domain.model_type,
               csv::format_real(r.domain.operating_power_kw),
               r.domain.weather_condition,
               csv::format_real(r.domain.outdoor_temp_c),
               csv::format_real(r.domain.latest_cooling_load_kw),
               csv::format_real(r.domain.water_mass_flow_kg_s),
               csv::format_real(r.domain.water_temp_diff_c),
               std::to_string(lr.label)});
  }
  return w.str();
}

std::vector<SvmSample> to_samples(const FeatureSchema& schema,
                                  std::span<const LabeledFeatureRow> rows) {
  std::vector<SvmSample> out;
  out.reserve(rows.size());
  for (const auto& lr : rows) out.push_back({schema.encode(lr.row), lr.label});
  return out;
}

}  // namespace edgealloc

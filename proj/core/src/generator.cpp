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

#include "edgealloc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "edgealloc/knapsack.hpp"
#include "json.hpp"

namespace edgealloc {

using nlohmann::json;

namespace {

constexpr std::int64_t kEpoch2012 = 1325376000;
constexpr int kSuccessWindowDays = 28;
constexpr double kWaterCp = 4.19;
constexpr double kDesignDeltaT = 5.0;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  double pareto(double alpha) {  // scale 1
    return std::pow(1.0 - uniform(), -1.0 / alpha);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Operation {
  int chiller = 0;
  double quality = 0.0;
  double pref_temp_c = 0.0;
  double exec_time_s = 0.0;
  double resource_demand = 0.0;
  std::int64_t data_bits = 0;
  double power_kw = 0.0;
  double temp_diff_c = 0.0;
};

struct ChillerModel {
  double capacity_kw = 0.0;
  double base_cop = 0.0;
  std::string building;
  std::string model_type;
};

const char* weather_of(double humidity) {
  if (humidity < 50.0) return "sunny";
  if (humidity < 75.0) return "cloudy";
  return "rainy";
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void GenConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("gen config: ") + what);
  };
  require(n_days >= 1, "n_days must be >= 1");
  require(n_chillers >= 1 && n_chillers <= 4, "n_chillers must be in [1, 4]");
  require(n_operations >= n_chillers, "n_operations must be >= n_chillers");
  require(n_operations <= 1000, "n_operations must be <= 1000");
  require(longtail_alpha > 0.0, "longtail_alpha must be > 0");
  require(cop_noise >= 0.0, "cop_noise must be >= 0");
  require(slots_per_day >= 1, "slots_per_day must be >= 1");
  require(slot_hours > 0.0, "slot_hours must be > 0");
  require(t_p_s > 0.0 && t_m_s > 0.0, "t_p_s and t_m_s must be > 0");
  require(quality_gain >= 0.0 && quality_cap >= 0.0, "quality terms must be >= 0");
  require(pref_width_c > 0.0, "pref_width_c must be > 0");
  require(load_curvature >= 0.0 && load_curvature < 1.0,
          "load_curvature must be in [0, 1)");
  require(cop_min > 0.0 && cop_max > cop_min, "need 0 < cop_min < cop_max");
  require(n_leaves >= 0, "n_leaves must be >= 0");
  require(hub_capacity > 0.0 && leaf_capacity > 0.0, "capacities must be > 0");
  require(bandwidth_bits_per_s > 0.0, "bandwidth must be > 0");
  grid_levels(grid_step);
}

std::string GenConfig::to_json() const {
  json j;
  j["n_days"] = n_days;
  j["n_chillers"] = n_chillers;
  j["n_operations"] = n_operations;
  j["longtail_alpha"] = longtail_alpha;
  j["cop_noise"] = cop_noise;
  j["seed"] = seed;
  j["slots_per_day"] = slots_per_day;
  j["slot_hours"] = slot_hours;
  j["grid_step"] = grid_step;
  j["t_p_s"] = t_p_s;
  j["t_m_s"] = t_m_s;
  j["quality_gain"] = quality_gain;
  j["quality_cap"] = quality_cap;
  j["pref_width_c"] = pref_width_c;
  j["load_curvature"] = load_curvature;
  j["drift_per_day"] = drift_per_day;
  j["cop_min"] = cop_min;
  j["cop_max"] = cop_max;
  j["n_leaves"] = n_leaves;
  j["hub_capacity"] = hub_capacity;
  j["leaf_capacity"] = leaf_capacity;
  j["bandwidth_bits_per_s"] = bandwidth_bits_per_s;
  return j.dump(2);
}

GenConfig GenConfig::from_json(const std::string& text) {
  GenConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw DataError("gen config must be a JSON object");
    const json known = json::parse(c.to_json());
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) throw DataError("gen config: unknown key '" + key + "'");
    }
    read_key(j, "n_days", c.n_days);
    read_key(j, "n_chillers", c.n_chillers);
    read_key(j, "n_operations", c.n_operations);
    read_key(j, "longtail_alpha", c.longtail_alpha);
    read_key(j, "cop_noise", c.cop_noise);
    read_key(j, "seed", c.seed);
    read_key(j, "slots_per_day", c.slots_per_day);
    read_key(j, "slot_hours", c.slot_hours);
    read_key(j, "grid_step", c.grid_step);
    read_key(j, "t_p_s", c.t_p_s);
    read_key(j, "t_m_s", c.t_m_s);
    read_key(j, "quality_gain", c.quality_gain);
    read_key(j, "quality_cap", c.quality_cap);
    read_key(j, "pref_width_c", c.pref_width_c);
    read_key(j, "load_curvature", c.load_curvature);
    read_key(j, "drift_per_day", c.drift_per_day);
    read_key(j, "cop_min", c.cop_min);
    read_key(j, "cop_max", c.cop_max);
    read_key(j, "n_leaves", c.n_leaves);
    read_key(j, "hub_capacity", c.hub_capacity);
    read_key(j, "leaf_capacity", c.leaf_capacity);
    read_key(j, "bandwidth_bits_per_s", c.bandwidth_bits_per_s);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed gen config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return c;
}

std::vector<double> SyntheticDataset::importances(std::size_t day) const {
  std::vector<double> out;
  for (const auto& t : tasks.at(day)) out.push_back(t.importance);
  return out;
}

DeviceSet default_devices(const GenConfig& config) {
  DeviceSet devices;
  devices.push_back({0, config.hub_capacity, 4.75e-8, 1.0e-7, 0.0, 0.0,
                     config.bandwidth_bits_per_s});
  for (int i = 1; i <= config.n_leaves; ++i) {
    devices.push_back({i, config.leaf_capacity, 4.75e-7, 3.25e-7, 1.42e-7,
                       1.42e-7, config.bandwidth_bits_per_s});
  }
  return devices;
}

double coverage_fraction(std::vector<double> values, double share) {
  if (values.empty()) return 0.0;
  for (double& v : values) v = std::max(v, 0.0);
  std::sort(values.begin(), values.end(), std::greater<>());
  double total = 0.0;
  for (double v : values) total += v;
  if (!(total > 0.0)) return 0.0;
  double running = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    running += v;
    ++count;
    if (running >= share * total) break;
  }
  return static_cast<double>(count) / static_cast<double>(values.size());
}

double importance_coverage(const SyntheticDataset& dataset, double share) {
  std::vector<double> per_op(static_cast<std::size_t>(dataset.config.n_operations), 0.0);
  for (const auto& day : dataset.tasks) {
    for (std::size_t k = 0; k < day.size(); ++k) per_op[k] += std::max(day[k].importance, 0.0);
  }
  return coverage_fraction(std::move(per_op), share);
}

SyntheticDataset gen_synthetic_dataset(const GenConfig& base_config,
                                       std::uint64_t seed) {
  GenConfig config = base_config;
  config.seed = seed;
  config.validate();
  Rng rng(seed);

  const auto n_ops = static_cast<std::size_t>(config.n_operations);
  const auto n_ch = static_cast<std::size_t>(config.n_chillers);
  const auto n_slots = static_cast<std::size_t>(config.slots_per_day);

  static const char* kBuildings[] = {"north", "south", "east", "west"};
  static const char* kModels[] = {"centrifugal", "screw", "scroll", "absorption"};
  std::vector<ChillerModel> chillers(n_ch);
  double plant_capacity = 0.0;
  for (std::size_t i = 0; i < n_ch; ++i) {
    chillers[i].capacity_kw = std::round(rng.uniform(300.0, 600.0));
    chillers[i].base_cop = rng.uniform(4.0, 5.5);
    chillers[i].building = kBuildings[i % 4];
    chillers[i].model_type = kModels[(i + static_cast<std::size_t>(rng.integer(0, 3))) % 4];
    plant_capacity += chillers[i].capacity_kw;
  }

  std::vector<Operation> ops(n_ops);
  for (std::size_t k = 0; k < n_ops; ++k) {
    Operation& op = ops[k];
    op.chiller = static_cast<int>(k % n_ch);
    op.quality = std::min(config.quality_cap, rng.pareto(config.longtail_alpha) - 1.0);
    op.pref_temp_c = rng.uniform(8.0, 34.0);
    op.exec_time_s = std::round(rng.uniform(120.0, 600.0));
    op.resource_demand = static_cast<double>(rng.integer(1, 3));
    op.data_bits = static_cast<std::int64_t>(std::round(rng.uniform(2e6, 4e7)));
    const auto& ch = chillers[static_cast<std::size_t>(op.chiller)];
    op.power_kw = ch.capacity_kw / (ch.base_cop * (1.0 + config.quality_gain * op.quality));
    op.temp_diff_c = kDesignDeltaT - 1.0 + 2.0 * (op.pref_temp_c - 8.0) / 26.0;
  }

  SyntheticDataset ds;
  ds.config = config;
  ds.plant.options.grid_step = config.grid_step;
  ds.plant.options.slot_hours = config.slot_hours;
  for (std::size_t i = 0; i < n_ch; ++i) {
    ds.plant.specs.push_back({static_cast<int>(i), chillers[i].capacity_kw});
  }
  for (const auto& op : ops) ds.plant.op_chiller.push_back(op.chiller);
  ds.devices = default_devices(config);
  ds.topology.hub_device_id = 0;
  for (int i = 1; i <= config.n_leaves; ++i) ds.topology.leaf_device_ids.push_back(i);
  ds.topology.bandwidth_bits_per_s = config.bandwidth_bits_per_s;
  ds.deadline_s = deadline(config.t_p_s, config.t_m_s);

  struct DayWeather {
    double temp_c;
    double humidity;
  };
  std::vector<DayWeather> weather;
  std::vector<TaskExecutionRecord> history;

  for (int d = 0; d < config.n_days; ++d) {
    const double doy = std::fmod(static_cast<double>(d) * 365.0 /
                                     std::max(1, std::min(config.n_days, 365)),
                                 365.0);
    const double season = std::sin(2.0 * std::numbers::pi * (doy - 105.0) / 365.0);
    const double temp = 20.0 + 11.0 * season + 3.0 * rng.normal();
    const double humidity = std::clamp(60.0 + 15.0 * rng.normal(), 20.0, 98.0);
    const double weekday_factor = (d % 7) >= 5 ? 0.85 : 1.0;
    weather.push_back({temp, humidity});

    ChillerDay day;
    day.day_id = d;
    day.demand_kw.resize(n_slots);
    std::vector<double> slot_temp(n_slots);
    double demand_sum = 0.0;
    for (std::size_t t = 0; t < n_slots; ++t) {
      const double hour = (static_cast<double>(t) + 0.5) * config.slot_hours;
      slot_temp[t] = temp + 4.0 * std::sin(2.0 * std::numbers::pi * (hour - 9.0) / 24.0);
      const double ratio =
          std::clamp((0.25 + 0.022 * (slot_temp[t] - 12.0)) * weekday_factor +
                         0.03 * rng.normal(),
                     0.08, 0.9);
      day.demand_kw[t] = std::round(ratio * plant_capacity * 10.0) / 10.0;
      demand_sum += day.demand_kw[t];
    }

    day.op_cop.resize(static_cast<Eigen::Index>(n_ops), static_cast<Eigen::Index>(n_slots));
    for (std::size_t k = 0; k < n_ops; ++k) {
      const Operation& op = ops[k];
      const auto& ch = chillers[static_cast<std::size_t>(op.chiller)];
      const double drift = 1.0 - config.drift_per_day * d * (1.0 + 0.5 * op.chiller);
      const double dt = temp - op.pref_temp_c;
      const double match = std::exp(-dt * dt / (2.0 * config.pref_width_c * config.pref_width_c));
      for (std::size_t t = 0; t < n_slots; ++t) {
        const double rho = day.demand_kw[t] / plant_capacity;
        const double eff = 1.0 - config.load_curvature * (rho - 0.7) * (rho - 0.7);
        const double noise = std::exp(config.cop_noise * rng.normal());
        const double value = ch.base_cop * eff * drift *
                             (1.0 + config.quality_gain * op.quality * match) * noise;
        day.op_cop(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
            std::clamp(value, config.cop_min, config.cop_max);
      }
    }

    const double ideal = ideal_performance(ds.plant, day);
    const std::vector<double> importance = day_importances(ds.plant, day);

    TaskSet tasks;
    for (std::size_t k = 0; k < n_ops; ++k) {
      tasks.push_back({static_cast<int>(k), ops[k].exec_time_s, ops[k].resource_demand,
                       importance[k], ops[k].data_bits, 0.0});
    }
    const Instance instance{tasks, ds.devices, ds.deadline_s};
    const SolveResult oracle = solve_branch_bound(instance);

    // Features only look at earlier days.
    const std::size_t window_start =
        history.size() > kSuccessWindowDays * n_ops
            ? history.size() - kSuccessWindowDays * n_ops
            : 0;
    const std::span<const TaskExecutionRecord> recent(history.data() + window_start,
                                                      history.size() - window_start);
    const double mean_demand = demand_sum / static_cast<double>(n_slots);
    for (std::size_t k = 0; k < n_ops; ++k) {
      const auto& ch = chillers[static_cast<std::size_t>(ops[k].chiller)];
      LabeledFeatureRow row;
      row.row.day_id = d;
      row.row.task_id = static_cast<int>(k);
      row.row.general = general_features(recent, static_cast<int>(k));
      row.row.domain.building = ch.building;
      row.row.domain.model_type = ch.model_type;
      row.row.domain.operating_power_kw = ops[k].power_kw;
      row.row.domain.weather_condition = weather_of(humidity);
      row.row.domain.outdoor_temp_c = temp;
      row.row.domain.latest_cooling_load_kw =
          d > 0 ? ds.days.back().demand_kw.back() : day.demand_kw.front();
      row.row.domain.water_mass_flow_kg_s =
          ch.capacity_kw * (mean_demand / plant_capacity) / (kWaterCp * ops[k].temp_diff_c);
      row.row.domain.water_temp_diff_c = ops[k].temp_diff_c;
      row.label = oracle.allocation.device_of(k) ? 1 : -1;
      ds.svm_rows.push_back(std::move(row));
    }

    // Persistence forecast: yesterday's mean COP predicts today's.
    for (std::size_t k = 0; k < n_ops; ++k) {
      const double actual = day.op_cop.row(static_cast<Eigen::Index>(k)).mean();
      const double predicted =
          d > 0 ? ds.days.back().op_cop.row(static_cast<Eigen::Index>(k)).mean() : actual;
      history.push_back({d, static_cast<int>(k),
                         oracle.allocation.device_of(k).has_value(), predicted, actual});
    }

    // Operating points of the full-information plan.
    const auto all_ops = std::make_unique<bool[]>(n_ops);
    std::fill_n(all_ops.get(), n_ops, true);
    const SequencingResult plan = decision_plan(ds.plant, day, {all_ops.get(), n_ops});
    const Eigen::MatrixXd best_cop =
        effective_cop(ds.plant, day.op_cop, {all_ops.get(), n_ops});
    for (std::size_t t = 0; t < n_slots; ++t) {
      for (std::size_t i = 0; i < n_ch; ++i) {
        const double ratio = plan.decision.ratios(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(t));
        if (!(ratio > 0.0)) continue;
        const double load = chillers[i].capacity_kw * ratio;
        ChillerRecord rec;
        rec.chiller_id = static_cast<int>(i);
        rec.timestamp = kEpoch2012 + static_cast<std::int64_t>(d) * 86400 +
                        static_cast<std::int64_t>(std::llround(
                            static_cast<double>(t) * config.slot_hours * 3600.0));
        rec.thermal_capacity_kj_per_kg_c = kWaterCp;
        rec.temp_diff_c = kDesignDeltaT;
        rec.mass_flow_kg_s = load / (kWaterCp * kDesignDeltaT);
        rec.electrical_power_kw =
            load / best_cop(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
        ds.records.push_back(rec);
      }
    }

    ds.contexts.push_back({{temp, mean_demand / plant_capacity}});
    ds.tasks.push_back(std::move(tasks));
    ds.ideal_kwh.push_back(ideal);
    ds.days.push_back(std::move(day));
  }
  return ds;
}

}  // namespace edgealloc

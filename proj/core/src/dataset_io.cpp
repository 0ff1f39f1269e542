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

#include "edgealloc/dataset_io.hpp"

#include <cmath>
#include <map>

#include "edgealloc/csv.hpp"
#include "edgealloc/instance_io.hpp"

namespace edgealloc {

namespace {

std::size_t checked_index(std::int64_t value, std::size_t limit,
                          const std::string& what) {
  if (value < 0 || static_cast<std::size_t>(value) >= limit) {
    throw DataError(what + " index " + std::to_string(value) + " out of range");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

const std::vector<std::string>& dataset_files() {
  static const std::vector<std::string> files{
      "gen_config.json", "tasks.csv",     "devices.csv",     "topology.json",
      "chiller_specs.csv", "operations.csv", "demand.csv",   "op_cop.csv",
      "ideal.csv",       "environment.csv", "svm_train.csv", "chiller_records.csv"};
  return files;
}

void write_dataset(const SyntheticDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  csv::write_text(dir / "gen_config.json", ds.config.to_json() + "\n");

  std::map<int, TaskSet> by_day;
  for (std::size_t d = 0; d < ds.n_days(); ++d) by_day[ds.days[d].day_id] = ds.tasks[d];
  csv::write_text(dir / "tasks.csv", task_days_to_csv(by_day));
  csv::write_text(dir / "devices.csv", devices_to_csv(ds.devices));
  csv::write_text(dir / "topology.json", ds.topology.to_json() + "\n");
  csv::write_text(dir / "chiller_specs.csv", chiller_specs_to_csv(ds.plant.specs));

  csv::Writer ops({"op_id", "chiller_id"});
  for (std::size_t k = 0; k < ds.plant.n_operations(); ++k) {
    ops.add_row({std::to_string(k),
                 std::to_string(ds.plant.specs[static_cast<std::size_t>(
                                    ds.plant.op_chiller[k])].chiller_id)});
  }
  ops.save(dir / "operations.csv");

  csv::Writer demand({"day_id", "slot", "q_d_kw"});
  csv::Writer cop({"day_id", "op_id", "slot", "cop"});
  csv::Writer ideal({"day_id", "ideal_kwh"});
  std::vector<int> day_ids;
  std::vector<std::vector<double>> importances;
  for (std::size_t d = 0; d < ds.n_days(); ++d) {
    const ChillerDay& day = ds.days[d];
    const std::string id = std::to_string(day.day_id);
    for (std::size_t t = 0; t < day.demand_kw.size(); ++t) {
      demand.add_row({id, std::to_string(t), csv::format_real(day.demand_kw[t])});
    }
    for (Eigen::Index k = 0; k < day.op_cop.rows(); ++k) {
      for (Eigen::Index t = 0; t < day.op_cop.cols(); ++t) {
        cop.add_row({id, std::to_string(k), std::to_string(t),
                     csv::format_real(day.op_cop(k, t))});
      }
    }
    ideal.add_row({id, csv::format_real(ds.ideal_kwh[d])});
    day_ids.push_back(day.day_id);
    importances.push_back(ds.importances(d));
  }
  demand.save(dir / "demand.csv");
  cop.save(dir / "op_cop.csv");
  ideal.save(dir / "ideal.csv");
  csv::write_text(dir / "environment.csv",
                  environment_library_to_csv(day_ids, ds.contexts, importances));
  csv::write_text(dir / "svm_train.csv", training_rows_to_csv(ds.svm_rows));
  csv::write_text(dir / "chiller_records.csv", chiller_records_to_csv(ds.records));
}

SyntheticDataset read_dataset(const std::filesystem::path& dir) {
  for (const auto& f : dataset_files()) {
    if (!std::filesystem::exists(dir / f)) {
      throw DataError("dataset file missing: " + (dir / f).string());
    }
  }
  SyntheticDataset ds;
  ds.config = GenConfig::from_json(csv::read_text(dir / "gen_config.json"));
  ds.devices = read_devices(dir / "devices.csv");
  ds.topology = read_topology(dir / "topology.json");
  ds.deadline_s = deadline(ds.config.t_p_s, ds.config.t_m_s);
  ds.plant.specs = read_chiller_specs(dir / "chiller_specs.csv");
  ds.plant.options.grid_step = ds.config.grid_step;
  ds.plant.options.slot_hours = ds.config.slot_hours;

  std::map<int, std::size_t> chiller_index;
  for (std::size_t i = 0; i < ds.plant.specs.size(); ++i) {
    chiller_index[ds.plant.specs[i].chiller_id] = i;
  }
  const csv::Table ops = csv::read(dir / "operations.csv");
  ds.plant.op_chiller.assign(ops.n_rows(), -1);
  for (std::size_t r = 0; r < ops.n_rows(); ++r) {
    const std::size_t k = checked_index(ops.integer(r, ops.column("op_id")),
                                        ops.n_rows(), "operation");
    const auto it = chiller_index.find(
        static_cast<int>(ops.integer(r, ops.column("chiller_id"))));
    if (it == chiller_index.end()) throw DataError("operations.csv: unknown chiller");
    ds.plant.op_chiller[k] = static_cast<int>(it->second);
  }
  const std::size_t n_ops = ds.plant.n_operations();

  const std::map<int, TaskSet> tasks = read_task_days(dir / "tasks.csv");
  std::map<int, std::size_t> day_index;
  for (const auto& [id, set] : tasks) {
    if (set.size() != n_ops) throw DataError("tasks.csv: task count != operation count");
    day_index[id] = ds.days.size();
    ChillerDay day;
    day.day_id = id;
    ds.days.push_back(std::move(day));
    ds.tasks.push_back(set);
  }
  const std::size_t n_days = ds.days.size();
  const auto day_of = [&](std::int64_t id, const char* file) {
    const auto it = day_index.find(static_cast<int>(id));
    if (it == day_index.end()) throw DataError(std::string(file) + ": unknown day_id");
    return it->second;
  };

  const csv::Table demand = csv::read(dir / "demand.csv");
  for (std::size_t r = 0; r < demand.n_rows(); ++r) {
    ChillerDay& day = ds.days[day_of(demand.integer(r, demand.column("day_id")), "demand.csv")];
    const std::size_t slot = checked_index(demand.integer(r, demand.column("slot")),
                                           1u << 16, "slot");
    if (day.demand_kw.size() <= slot) day.demand_kw.resize(slot + 1, std::nan(""));
    day.demand_kw[slot] = demand.real(r, demand.column("q_d_kw"));
  }
  for (auto& day : ds.days) {
    for (double q : day.demand_kw) {
      if (std::isnan(q)) throw DataError("demand.csv: missing slot");
    }
    day.op_cop = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n_ops),
                                           static_cast<Eigen::Index>(day.demand_kw.size()),
                                           std::nan(""));
  }
  const csv::Table cop = csv::read(dir / "op_cop.csv");
  for (std::size_t r = 0; r < cop.n_rows(); ++r) {
    ChillerDay& day = ds.days[day_of(cop.integer(r, cop.column("day_id")), "op_cop.csv")];
    const std::size_t k = checked_index(cop.integer(r, cop.column("op_id")), n_ops, "op");
    const std::size_t t = checked_index(cop.integer(r, cop.column("slot")),
                                        day.demand_kw.size(), "slot");
    day.op_cop(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
        cop.real(r, cop.column("cop"));
  }
  for (const auto& day : ds.days) {
    if (day.op_cop.array().isNaN().any()) throw DataError("op_cop.csv: missing entries");
  }

  ds.ideal_kwh.assign(n_days, std::nan(""));
  const csv::Table ideal = csv::read(dir / "ideal.csv");
  for (std::size_t r = 0; r < ideal.n_rows(); ++r) {
    ds.ideal_kwh[day_of(ideal.integer(r, ideal.column("day_id")), "ideal.csv")] =
        ideal.real(r, ideal.column("ideal_kwh"));
  }
  for (double v : ds.ideal_kwh) {
    if (std::isnan(v)) throw DataError("ideal.csv: missing day");
  }

  const EnvironmentLibrary library =
      read_environment_library(dir / "environment.csv", ds.devices);
  ds.contexts.assign(n_days, SensingContext{});
  for (const auto& entry : library.entries()) {
    ds.contexts[day_of(entry.day_id, "environment.csv")] = entry.context;
  }
  ds.svm_rows = read_training_rows(dir / "svm_train.csv");
  ds.records = read_chiller_records(dir / "chiller_records.csv");
  return ds;
}

}  // namespace edgealloc

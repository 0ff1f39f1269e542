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

#include "edgealloc/chiller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "edgealloc/csv.hpp"
#include "edgealloc/merit.hpp"
#include "edgealloc/types.hpp"

namespace edgealloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Depth-first search over one slot. Costs only grow with deeper or larger
// ratios, so a branch whose partial cost already reaches the incumbent can
// be cut without changing the result.
class SlotSearch {
 public:
  SlotSearch(std::vector<double> capacity, std::vector<double> cop, int levels,
             double demand)
      : capacity_(std::move(capacity)),
        cop_(std::move(cop)),
        levels_(levels),
        demand_(demand),
        k_(capacity_.size(), 0),
        best_k_(capacity_.size(), 0) {}

  bool run() {
    visit(0, 0.0, 0.0);
    return found_;
  }
  double best_cost() const { return best_; }
  const std::vector<int>& best_levels() const { return best_k_; }

 private:
  void visit(std::size_t i, double supply, double cost) {
    if (i == capacity_.size()) {
      if (supply > demand_ && (!found_ || cost < best_)) {
        found_ = true;
        best_ = cost;
        best_k_ = k_;
      }
      return;
    }
    const int top = std::isnan(cop_[i]) ? 0 : levels_;
    for (int k = 0; k <= top; ++k) {
      const double ratio = static_cast<double>(k) / levels_;
      const double load = capacity_[i] * ratio;
      const double next_cost = k == 0 ? cost : cost + load / cop_[i];
      if (found_ && next_cost >= best_) break;
      k_[i] = k;
      visit(i + 1, supply + load, next_cost);
    }
    k_[i] = 0;
  }

  std::vector<double> capacity_;
  std::vector<double> cop_;
  int levels_;
  double demand_;
  std::vector<int> k_;
  std::vector<int> best_k_;
  bool found_ = false;
  double best_ = kInf;
};

std::unique_ptr<bool[]> all_true(std::size_t n) {
  auto mask = std::make_unique<bool[]>(n);
  std::fill_n(mask.get(), n, true);
  return mask;
}

void require_shape(const Eigen::MatrixXd& cop, std::size_t n_chillers,
                   std::size_t n_slots) {
  if (static_cast<std::size_t>(cop.rows()) != n_chillers ||
      static_cast<std::size_t>(cop.cols()) != n_slots) {
    throw std::invalid_argument("COP matrix shape does not match specs/demand");
  }
}

}  // namespace

double cop(double cooling_load_kw, double electrical_power_kw) {
  if (!(electrical_power_kw > 0.0)) {
    throw std::domain_error("cop: electrical power must be > 0");
  }
  if (cooling_load_kw < 0.0) throw std::domain_error("cop: negative cooling load");
  return cooling_load_kw / electrical_power_kw;
}

double cooling_load(const ChillerRecord& r) {
  return r.thermal_capacity_kj_per_kg_c * r.mass_flow_kg_s * r.temp_diff_c;
}

double deadline(double t_p, double t_m) {
  if (!(t_p > 0.0) || !(t_m > 0.0)) {
    throw std::domain_error("deadline: t_P and t_M must be > 0");
  }
  return std::min(t_p, t_m);
}

bool SequencingResult::feasible() const {
  return std::all_of(slot_feasible.begin(), slot_feasible.end(),
                     [](bool b) { return b; });
}

int grid_levels(double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw std::invalid_argument("grid step must lie in (0, 1]");
  }
  const double inv = 1.0 / step;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded || rounded > 1000.0) {
    throw std::invalid_argument("grid step must divide 1 evenly");
  }
  return static_cast<int>(rounded);
}

std::vector<double> backup_plant_kwh(const Eigen::MatrixXd& cop,
                                     std::span<const double> demand_kw,
                                     double slot_hours) {
  double global_min = kInf;
  for (Eigen::Index i = 0; i < cop.size(); ++i) {
    const double c = cop.data()[i];
    if (!std::isnan(c)) global_min = std::min(global_min, c);
  }
  std::vector<double> out(demand_kw.size(), 0.0);
  for (std::size_t t = 0; t < demand_kw.size(); ++t) {
    if (!(demand_kw[t] > 0.0)) continue;
    double slot_min = kInf;
    if (static_cast<Eigen::Index>(t) < cop.cols()) {
      for (Eigen::Index i = 0; i < cop.rows(); ++i) {
        const double c = cop(i, static_cast<Eigen::Index>(t));
        if (!std::isnan(c)) slot_min = std::min(slot_min, c);
      }
    }
    const double worst = std::isfinite(slot_min) ? slot_min : global_min;
    if (!std::isfinite(worst)) {
      throw std::domain_error("backup_plant_kwh: no available COP to price demand");
    }
    out[t] = 2.0 * demand_kw[t] * slot_hours / worst;
  }
  return out;
}

SequencingResult sequencing_optimize(const Eigen::MatrixXd& cop,
                                     std::span<const ChillerSpec> specs,
                                     std::span<const double> demand_kw,
                                     const SequencingOptions& options) {
  const std::size_t n = specs.size();
  const std::size_t horizon = demand_kw.size();
  require_shape(cop, n, horizon);
  const int levels = grid_levels(options.grid_step);
  if (!(options.slot_hours > 0.0)) {
    throw std::invalid_argument("sequencing: slot_hours must be > 0");
  }
  if (std::pow(static_cast<double>(levels + 1), static_cast<double>(n)) > 5e7) {
    throw std::length_error("sequencing: grid too large for exhaustive search");
  }
  std::vector<double> capacity(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(specs[i].max_capacity_kw > 0.0)) {
      throw std::invalid_argument("sequencing: max capacity must be > 0");
    }
    capacity[i] = specs[i].max_capacity_kw;
  }
  for (Eigen::Index i = 0; i < cop.size(); ++i) {
    const double c = cop.data()[i];
    if (!std::isnan(c) && !(c > 0.0)) {
      throw std::invalid_argument("sequencing: COP entries must be > 0 or NaN");
    }
  }

  SequencingResult result;
  result.decision.ratios = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(horizon));
  result.slot_kwh.assign(horizon, 0.0);
  result.slot_feasible.assign(horizon, true);
  std::vector<double> fallback;

  for (std::size_t t = 0; t < horizon; ++t) {
    if (!(demand_kw[t] > 0.0)) continue;
    std::vector<double> slot_cop(n);
    for (std::size_t i = 0; i < n; ++i) {
      slot_cop[i] = cop(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
    }
    SlotSearch search(capacity, std::move(slot_cop), levels, demand_kw[t]);
    if (search.run()) {
      for (std::size_t i = 0; i < n; ++i) {
        result.decision.ratios(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(t)) =
            static_cast<double>(search.best_levels()[i]) / levels;
      }
      result.slot_kwh[t] = search.best_cost() * options.slot_hours;
      continue;
    }
    if (fallback.empty()) {
      if (!options.fallback_kwh.empty()) {
        if (options.fallback_kwh.size() != horizon) {
          throw std::invalid_argument("sequencing: fallback length != horizon");
        }
        fallback = options.fallback_kwh;
      } else {
        fallback = backup_plant_kwh(cop, demand_kw, options.slot_hours);
      }
    }
    result.slot_feasible[t] = false;
    result.slot_kwh[t] = fallback[t];
    result.fallback_charged_kwh += fallback[t];
  }
  for (double kwh : result.slot_kwh) result.total_kwh += kwh;
  return result;
}

Eigen::MatrixXd effective_cop(const Plant& plant, const Eigen::MatrixXd& op_cop,
                              std::span<const bool> executed) {
  if (static_cast<std::size_t>(op_cop.rows()) != plant.n_operations() ||
      executed.size() != plant.n_operations()) {
    throw std::invalid_argument("effective_cop: operation count mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(plant.n_chillers()), op_cop.cols(),
      std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < plant.n_operations(); ++k) {
    if (!executed[k]) continue;
    const int chiller = plant.op_chiller[k];
    if (chiller < 0 || static_cast<std::size_t>(chiller) >= plant.n_chillers()) {
      throw std::invalid_argument("effective_cop: operation maps to unknown chiller");
    }
    for (Eigen::Index t = 0; t < op_cop.cols(); ++t) {
      const double c = op_cop(static_cast<Eigen::Index>(k), t);
      double& cell = out(chiller, t);
      if (std::isnan(cell) || c > cell) cell = c;
    }
  }
  return out;
}

SequencingResult decision_plan(const Plant& plant, const ChillerDay& day,
                               std::span<const bool> executed) {
  const auto all = all_true(plant.n_operations());
  const Eigen::MatrixXd full =
      effective_cop(plant, day.op_cop, {all.get(), plant.n_operations()});
  SequencingOptions options = plant.options;
  options.fallback_kwh =
      backup_plant_kwh(full, day.demand_kw, plant.options.slot_hours);
  return sequencing_optimize(effective_cop(plant, day.op_cop, executed),
                             plant.specs, day.demand_kw, options);
}

double decision_cost(const Plant& plant, const ChillerDay& day,
                     std::span<const bool> executed) {
  return decision_plan(plant, day, executed).total_kwh;
}

double ideal_performance(const Plant& plant, const ChillerDay& day) {
  const auto all = all_true(plant.n_operations());
  return decision_cost(plant, day, {all.get(), plant.n_operations()});
}

std::vector<double> ideal_performance(const Plant& plant,
                                      std::span<const ChillerDay> days) {
  std::vector<double> out;
  out.reserve(days.size());
  for (const auto& d : days) out.push_back(ideal_performance(plant, d));
  return out;
}

std::vector<double> day_importances(const Plant& plant, const ChillerDay& day) {
  const std::size_t n = plant.n_operations();
  const auto mask = all_true(n);
  const std::span<const bool> view(mask.get(), n);
  const Eigen::MatrixXd full_cop = effective_cop(plant, day.op_cop, view);
  const double ideal = decision_cost(plant, day, view);
  const double merit_full = overall_merit(ideal, ideal);

  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    mask[j] = false;
    const Eigen::MatrixXd reduced = effective_cop(plant, day.op_cop, view);
    // Same COP inputs give the same plan, so the merit cannot move.
    const bool unchanged =
        reduced.cwiseEqual(full_cop).count() +
            (reduced.array().isNaN() && full_cop.array().isNaN()).count() ==
        full_cop.size();
    if (!unchanged) {
      out[j] = task_importance(merit_full,
                               overall_merit(decision_cost(plant, day, view), ideal));
    }
    mask[j] = true;
  }
  return out;
}

int best_operation(std::span<const double> importances) {
  int best = -1;
  bool unique = false;
  for (std::size_t j = 0; j < importances.size(); ++j) {
    const double v = importances[j];
    if (!(v > 0.0)) continue;
    if (best < 0 || v > importances[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(j);
      unique = true;
    } else if (v == importances[static_cast<std::size_t>(best)]) {
      unique = false;
    }
  }
  return unique ? best : -1;
}

double probability_to_become_optimal(std::size_t selected_days,
                                     std::size_t total_days) {
  if (total_days == 0) throw std::invalid_argument("probability: no days");
  if (selected_days > total_days) {
    throw std::invalid_argument("probability: selected days exceed total");
  }
  return static_cast<double>(selected_days) / static_cast<double>(total_days);
}

OperationImportance importance_from_history(const Plant& plant,
                                            std::span<const ChillerDay> history,
                                            int task_id) {
  if (history.empty()) throw std::invalid_argument("importance_from_history: empty history");
  if (task_id < 0 || static_cast<std::size_t>(task_id) >= plant.n_operations()) {
    throw std::invalid_argument("importance_from_history: unknown task");
  }
  std::size_t selected = 0;
  double total = 0.0;
  for (const auto& day : history) {
    const std::vector<double> imp = day_importances(plant, day);
    total += imp[static_cast<std::size_t>(task_id)];
    if (best_operation(imp) == task_id) ++selected;
  }
  return {probability_to_become_optimal(selected, history.size()),
          total / static_cast<double>(history.size())};
}

double annual_cost(std::span<const double> daily_consumption_kwh,
                   std::span<const double> daily_price) {
  if (daily_consumption_kwh.size() != daily_price.size()) {
    throw std::invalid_argument("annual_cost: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < daily_price.size(); ++i) {
    total += daily_consumption_kwh[i] * daily_price[i];
  }
  return total;
}

std::vector<ChillerRecord> read_chiller_records(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  std::vector<ChillerRecord> out;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    ChillerRecord rec;
    rec.chiller_id = static_cast<int>(t.integer(r, t.column("chiller_id")));
    rec.timestamp = t.integer(r, t.column("timestamp"));
    rec.thermal_capacity_kj_per_kg_c = t.real(r, t.column("c_kj_kg_c"));
    rec.mass_flow_kg_s = t.real(r, t.column("m_kg_s"));
    rec.temp_diff_c = t.real(r, t.column("dt_c"));
    rec.electrical_power_kw = t.real(r, t.column("e_kw"));
    if (!(rec.thermal_capacity_kj_per_kg_c > 0.0) || rec.mass_flow_kg_s < 0.0 ||
        rec.temp_diff_c < 0.0 || !(rec.electrical_power_kw > 0.0)) {
      throw DataError(path.string() + ": invalid chiller record at row " +
                      std::to_string(r + 1));
    }
    out.push_back(rec);
  }
  return out;
}

std::string chiller_records_to_csv(std::span<const ChillerRecord> records) {
  csv::Writer w({"chiller_id", "timestamp", "c_kj_kg_c", "m_kg_s", "dt_c", "e_kw"});
  for (const auto& r : records) {
    w.add_row({std::to_string(r.chiller_id), std::to_string(r.timestamp),
               csv::format_real(r.thermal_capacity_kj_per_kg_c),
               csv::format_real(r.mass_flow_kg_s), csv::format_real(r.temp_diff_c),
               csv::format_real(r.electrical_power_kw)});
  }
  return w.str();
}

std::vector<ChillerSpec> read_chiller_specs(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  std::vector<ChillerSpec> out;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    ChillerSpec s;
    s.chiller_id = static_cast<int>(t.integer(r, t.column("chiller_id")));
    s.max_capacity_kw = t.real(r, t.column("max_capacity_kw"));
    if (!(s.max_capacity_kw > 0.0)) {
      throw DataError(path.string() + ": max_capacity_kw must be > 0");
    }
    out.push_back(s);
  }
  return out;
}

std::string chiller_specs_to_csv(std::span<const ChillerSpec> specs) {
  csv::Writer w({"chiller_id", "max_capacity_kw"});
  for (const auto& s : specs) {
    w.add_row({std::to_string(s.chiller_id), csv::format_real(s.max_capacity_kw)});
  }
  return w.str();
}

std::vector<double> read_demand(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  std::vector<double> out(t.n_rows());
  std::vector<bool> seen(t.n_rows(), false);
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    const auto slot = t.integer(r, t.column("slot"));
    if (slot < 0 || static_cast<std::size_t>(slot) >= t.n_rows() ||
        seen[static_cast<std::size_t>(slot)]) {
      throw DataError(path.string() + ": slots must be 0..n-1 without repeats");
    }
    seen[static_cast<std::size_t>(slot)] = true;
    out[static_cast<std::size_t>(slot)] = t.real(r, t.column("q_d_kw"));
  }
  return out;
}

std::string demand_to_csv(std::span<const double> demand_kw) {
  csv::Writer w({"slot", "q_d_kw"});
  for (std::size_t t = 0; t < demand_kw.size(); ++t) {
    w.add_row({std::to_string(t), csv::format_real(demand_kw[t])});
  }
  return w.str();
}

}  // namespace edgealloc

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

// Chiller plant domain: COP arithmetic, grid-search sequencing, and the
// mapping from executed learning tasks (one COP predictor per operation) to
// the plant's electricity cost.

#ifndef EDGEALLOC_CHILLER_HPP_
#define EDGEALLOC_CHILLER_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace edgealloc {

struct ChillerRecord {
  int chiller_id = 0;
  std::int64_t timestamp = 0;
  double thermal_capacity_kj_per_kg_c = 4.19;
  double mass_flow_kg_s = 0.0;
  double temp_diff_c = 0.0;
  double electrical_power_kw = 0.0;
};

struct ChillerSpec {
  int chiller_id = 0;
  double max_capacity_kw = 0.0;
};

// Q / E. Throws std::domain_error if E <= 0 or Q < 0.
double cop(double cooling_load_kw, double electrical_power_kw);
// c * m * dT in kW.
double cooling_load(const ChillerRecord& record);
// min(t_P, t_M); throws std::domain_error unless both are positive.
double deadline(double t_p, double t_m);

struct SequencingOptions {
  double grid_step = 0.1;
  double slot_hours = 1.0;
  // Backup-plant charge per slot when no ratio combination meets demand.
  // Empty means backup_plant_kwh() of the COP matrix being optimized.
  std::vector<double> fallback_kwh;
};

struct SequencingDecision {
  Eigen::MatrixXd ratios;  // chillers x slots, entries k / levels
  std::size_t horizon() const { return static_cast<std::size_t>(ratios.cols()); }
};

struct SequencingResult {
  SequencingDecision decision;
  double total_kwh = 0.0;  // sum of slot_kwh in slot order
  std::vector<double> slot_kwh;
  std::vector<bool> slot_feasible;
  double fallback_charged_kwh = 0.0;
  bool feasible() const;
};

// Number of grid intervals for `step`; throws std::invalid_argument unless
// 1/step is an integer (to 1e-9) between 1 and 1000.
int grid_levels(double step);

// Per slot t, minimizes sum_i L_i S_i / COP_i (chiller order) over
// S_i in {0, 1/levels, ..., 1} subject to sum_i L_i S_i > Q_D(t). A NaN COP
// marks the chiller unavailable (S forced to 0). Ties keep the combination
// that comes first with chiller 0 as the most significant digit. A slot with
// Q_D <= 0 runs nothing at zero cost. An unmeetable slot charges the
// fallback and leaves its ratios at 0.
SequencingResult sequencing_optimize(const Eigen::MatrixXd& cop,
                                     std::span<const ChillerSpec> specs,
                                     std::span<const double> demand_kw,
                                     const SequencingOptions& options = {});

// 2 * Q_D * slot_hours / (smallest available COP of the slot, or of the
// whole matrix when the slot has none). Throws std::domain_error when the
// matrix has no available entry and some demand is positive.
std::vector<double> backup_plant_kwh(const Eigen::MatrixXd& cop,
                                     std::span<const double> demand_kw,
                                     double slot_hours);

// Plant description shared by every day.
struct Plant {
  std::vector<ChillerSpec> specs;
  std::vector<int> op_chiller;  // chiller index of each operation (task)
  SequencingOptions options;    // fallback_kwh is ignored; set per day

  std::size_t n_chillers() const { return specs.size(); }
  std::size_t n_operations() const { return op_chiller.size(); }
};

// Ground truth of one day.
struct ChillerDay {
  int day_id = 0;
  std::vector<double> demand_kw;  // per slot
  Eigen::MatrixXd op_cop;         // operations x slots
};

// Best COP among the executed operations of each chiller; NaN when none ran.
Eigen::MatrixXd effective_cop(const Plant& plant, const Eigen::MatrixXd& op_cop,
                              std::span<const bool> executed);

// Electricity of the plan built from the executed operations. The backup
// charge is fixed per day from the full ground truth.
double decision_cost(const Plant& plant, const ChillerDay& day,
                     std::span<const bool> executed);
SequencingResult decision_plan(const Plant& plant, const ChillerDay& day,
                               std::span<const bool> executed);

// D: decision cost with every operation available.
double ideal_performance(const Plant& plant, const ChillerDay& day);
std::vector<double> ideal_performance(const Plant& plant,
                                      std::span<const ChillerDay> days);

// I_j = OM(all) - OM(all but j) per operation.
std::vector<double> day_importances(const Plant& plant, const ChillerDay& day);

// Index of the op with the unique largest positive importance, or -1.
int best_operation(std::span<const double> importances);

// selected / total; throws std::invalid_argument when total is 0 or
// selected > total.
double probability_to_become_optimal(std::size_t selected_days,
                                     std::size_t total_days);

struct OperationImportance {
  double probability_to_become_optimal = 0.0;
  double leave_one_out_importance = 0.0;  // mean over days
};

// Throws std::invalid_argument on empty history or an unknown task.
OperationImportance importance_from_history(const Plant& plant,
                                            std::span<const ChillerDay> history,
                                            int task_id);

// sum_i E_i * c_i; throws std::invalid_argument on length mismatch.
double annual_cost(std::span<const double> daily_consumption_kwh,
                   std::span<const double> daily_price);

// chiller_id,timestamp,c_kj_kg_c,m_kg_s,dt_c,e_kw
std::vector<ChillerRecord> read_chiller_records(const std::filesystem::path& path);
std::string chiller_records_to_csv(std::span<const ChillerRecord> records);
// chiller_id,max_capacity_kw
std::vector<ChillerSpec> read_chiller_specs(const std::filesystem::path& path);
std::string chiller_specs_to_csv(std::span<const ChillerSpec> specs);
// slot,q_d_kw
std::vector<double> read_demand(const std::filesystem::path& path);
std::string demand_to_csv(std::span<const double> demand_kw);

}  // namespace edgealloc

#endif  // EDGEALLOC_CHILLER_HPP_

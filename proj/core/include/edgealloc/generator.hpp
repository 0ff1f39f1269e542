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

// Synthetic chiller-plant MTL dataset.
//
// Each operation (learning task) belongs to one chiller and carries a
// Pareto(longtail_alpha) quality boost that applies around its preferred
// outdoor temperature:
//
//   COP(k, d, t) = base_c * eff(rho_t) * drift_c(d)
//                  * (1 + quality_gain * q_k * match_k(temp_d)) * noise
//   eff(rho)     = 1 - load_curvature * (rho - 0.7)^2
//   match_k(x)   = exp(-(x - pref_k)^2 / (2 * pref_width^2))
//   noise        = exp(cop_noise * N(0, 1))
//
// clipped to [cop_min, cop_max]. rho_t is the slot demand over total plant
// capacity. Task importance is the per-day leave-one-out merit drop, so only
// operations that are the best of their chiller in some slot matter.
//
// All randomness comes from one mt19937_64 stream with hand-rolled uniform
// and normal transforms, so outputs do not depend on the standard library's
// distribution implementations.

#ifndef EDGEALLOC_GENERATOR_HPP_
#define EDGEALLOC_GENERATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "edgealloc/chiller.hpp"
#include "edgealloc/edgesim.hpp"
#include "edgealloc/environment.hpp"
#include "edgealloc/features.hpp"
#include "edgealloc/types.hpp"

namespace edgealloc {

struct GenConfig {
  int n_days = 120;
  int n_chillers = 3;
  int n_operations = 40;
  double longtail_alpha = 1.5;
  double cop_noise = 0.03;
  std::uint64_t seed = 1;

  int slots_per_day = 6;
  double slot_hours = 4.0;
  double grid_step = 0.1;
  double t_p_s = 7200.0;
  double t_m_s = 1800.0;

  double quality_gain = 0.3;
  double quality_cap = 6.0;
  double pref_width_c = 2.0;
  double load_curvature = 0.6;
  double drift_per_day = 2e-4;
  double cop_min = 1.5;
  double cop_max = 9.0;

  int n_leaves = 2;
  double hub_capacity = 8.0;
  double leaf_capacity = 4.0;
  double bandwidth_bits_per_s = 2e7;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;

  // Flat JSON object; missing keys keep their defaults, unknown keys throw
  // DataError.
  std::string to_json() const;
  static GenConfig from_json(const std::string& text);
};

struct SyntheticDataset {
  GenConfig config;
  Plant plant;
  std::vector<ChillerDay> days;
  std::vector<SensingContext> contexts;     // per day
  std::vector<TaskSet> tasks;               // per day, importance filled
  std::vector<double> ideal_kwh;            // per day
  std::vector<LabeledFeatureRow> svm_rows;  // day-major, then operation
  std::vector<ChillerRecord> records;
  DeviceSet devices;
  Topology topology;
  double deadline_s = 0.0;

  std::size_t n_days() const { return days.size(); }
  Instance instance(std::size_t day) const {
    return {tasks.at(day), devices, deadline_s};
  }
  std::vector<double> importances(std::size_t day) const;
};

SyntheticDataset gen_synthetic_dataset(const GenConfig& config, std::uint64_t seed);

// Raspberry Pi class leaves and a laptop hub.
DeviceSet default_devices(const GenConfig& config);

// Smallest fraction of items whose largest values cover `share` of the
// total (values <= 0 count as zero). Returns 0 when the total is 0.
double coverage_fraction(std::vector<double> values, double share);

// coverage_fraction of each operation's importance summed over all days.
double importance_coverage(const SyntheticDataset& dataset, double share = 0.8);

}  // namespace edgealloc

#endif  // EDGEALLOC_GENERATOR_HPP_

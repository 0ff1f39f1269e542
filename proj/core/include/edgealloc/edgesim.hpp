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

// Star-topology cost model. Input data lives on the hub; a task placed on a
// leaf first pays transfer time and tx+rx energy, then runs. Tasks on one
// device run back to back.

#ifndef EDGEALLOC_EDGESIM_HPP_
#define EDGEALLOC_EDGESIM_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "edgealloc/types.hpp"

namespace edgealloc {

struct Topology {
  int hub_device_id = 0;
  std::vector<int> leaf_device_ids;
  double bandwidth_bits_per_s = 0.0;

  // Throws std::invalid_argument if the hub is also a leaf, an id is
  // missing from `devices`, or the bandwidth is not positive.
  void validate(const DeviceSet& devices) const;

  // {"hub":0,"leaves":[1,2],"bandwidth_bits_per_s":...}
  std::string to_json() const;
  static Topology from_json(const std::string& text);
};

Topology read_topology(const std::filesystem::path& path);

struct SimOutcome {
  std::vector<double> per_device_busy_s;
  std::vector<double> per_device_energy_j;
  double transmission_energy_j = 0.0;
  double pt_s = 0.0;
  double ec_j = 0.0;
};

// Compute time is exec_time_s when positive, otherwise bits * proc speed.
// Throws std::invalid_argument for an infeasible allocation or a device that
// is neither the hub nor a leaf.
SimOutcome simulate(const AllocationMatrix& alloc, const Instance& instance,
                    const Topology& topology);

using Allocator = std::function<AllocationMatrix(const Instance&)>;
using DecisionCost = std::function<double(const AllocationMatrix&)>;

struct ExperimentOutcome {
  AllocationMatrix allocation;
  MeritReport report;
  double decision_cost = 0.0;
  double objective = 0.0;  // summed task importance of the allocation
};

// Allocates, simulates and scores OM = 1 - |D - cost| / D.
ExperimentOutcome run_experiment(const Instance& instance,
                                 const Allocator& allocator,
                                 const Topology& topology, double ideal_cost,
                                 const DecisionCost& cost);

struct ReportRow {
  int run_id = 0;
  std::string policy;
  std::uint64_t seed = 0;
  int n_tasks = 0;
  double om = 0.0;
  double pt_s = 0.0;
  double ec_j = 0.0;
  double objective = 0.0;
};

// run_id,policy,seed,n_tasks,om,pt_s,ec_j,objective
std::string report_to_csv(std::span<const ReportRow> rows);
std::vector<ReportRow> read_report(const std::filesystem::path& path);

}  // namespace edgealloc

#endif  // EDGEALLOC_EDGESIM_HPP_

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

#include "edgealloc/edgesim.hpp"

#include <algorithm>
#include <stdexcept>

#include "edgealloc/csv.hpp"
#include "edgealloc/merit.hpp"
#include "json.hpp"

namespace edgealloc {

using nlohmann::json;

namespace {

bool has_device(const DeviceSet& devices, int id) {
  return std::any_of(devices.begin(), devices.end(),
                     [id](const EdgeDevice& d) { return d.id == id; });
}

}  // namespace

void Topology::validate(const DeviceSet& devices) const {
  if (!(bandwidth_bits_per_s > 0.0)) {
    throw std::invalid_argument("topology: bandwidth must be > 0");
  }
  if (!has_device(devices, hub_device_id)) {
    throw std::invalid_argument("topology: hub is not a known device");
  }
  for (int leaf : leaf_device_ids) {
    if (leaf == hub_device_id) {
      throw std::invalid_argument("topology: hub listed as a leaf");
    }
    if (!has_device(devices, leaf)) {
      throw std::invalid_argument("topology: leaf " + std::to_string(leaf) +
                                  " is not a known device");
    }
  }
}

std::string Topology::to_json() const {
  json j;
  j["hub"] = hub_device_id;
  j["leaves"] = leaf_device_ids;
  j["bandwidth_bits_per_s"] = bandwidth_bits_per_s;
  return j.dump();
}

Topology Topology::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Topology t;
    t.hub_device_id = j.at("hub").get<int>();
    t.leaf_device_ids = j.at("leaves").get<std::vector<int>>();
    t.bandwidth_bits_per_s = j.at("bandwidth_bits_per_s").get<double>();
    if (!(t.bandwidth_bits_per_s > 0.0)) {
      throw DataError("topology: bandwidth must be > 0");
    }
    return t;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed topology: ") + e.what());
  }
}

Topology read_topology(const std::filesystem::path& path) {
  return Topology::from_json(csv::read_text(path));
}

SimOutcome simulate(const AllocationMatrix& alloc, const Instance& instance,
                    const Topology& topology) {
  if (!check_feasible(instance, alloc).feasible) {
    throw std::invalid_argument("simulate: allocation is infeasible");
  }
  const std::size_t m = instance.n_devices();
  SimOutcome out;
  out.per_device_busy_s.assign(m, 0.0);
  out.per_device_energy_j.assign(m, 0.0);

  std::vector<bool> is_hub(m, false);
  std::vector<bool> known(m, false);
  for (std::size_t p = 0; p < m; ++p) {
    const int id = instance.devices[p].id;
    is_hub[p] = id == topology.hub_device_id;
    known[p] = is_hub[p] ||
               std::find(topology.leaf_device_ids.begin(),
                         topology.leaf_device_ids.end(),
                         id) != topology.leaf_device_ids.end();
  }

  for (const auto& [j, p] : alloc.assignment()) {
    if (!known[p]) {
      throw std::invalid_argument("simulate: device " +
                                  std::to_string(instance.devices[p].id) +
                                  " is not in the topology");
    }
    const Task& task = instance.tasks[j];
    const EdgeDevice& dev = instance.devices[p];
    const double bits = static_cast<double>(task.data_bits);
    const double transfer_s =
        is_hub[p] ? 0.0 : bits / topology.bandwidth_bits_per_s;
    const double compute_s =
        task.exec_time_s > 0.0 ? task.exec_time_s : bits * dev.proc_speed_s_per_bit;
    out.per_device_busy_s[p] += transfer_s + compute_s;
    out.per_device_energy_j[p] += bits * dev.proc_energy_j_per_bit;
    if (!is_hub[p]) {
      out.transmission_energy_j +=
          bits * (dev.tx_energy_j_per_bit + dev.rx_energy_j_per_bit);
    }
  }
  for (std::size_t p = 0; p < m; ++p) {
    out.pt_s = std::max(out.pt_s, out.per_device_busy_s[p]);
    out.ec_j += out.per_device_energy_j[p];
  }
  out.ec_j += out.transmission_energy_j;
  return out;
}

ExperimentOutcome run_experiment(const Instance& instance,
                                 const Allocator& allocator,
                                 const Topology& topology, double ideal_cost,
                                 const DecisionCost& cost) {
  if (!(ideal_cost > 0.0)) {
    throw std::domain_error("run_experiment: ideal cost must be > 0");
  }
  ExperimentOutcome out;
  out.allocation = allocator(instance);
  const SimOutcome sim = simulate(out.allocation, instance, topology);
  out.decision_cost = cost(out.allocation);
  out.objective = selected_importance(instance.tasks, out.allocation);
  out.report.overall_merit = overall_merit(out.decision_cost, ideal_cost);
  out.report.processing_time_s = sim.pt_s;
  out.report.energy_j = sim.ec_j;
  out.report.n_tasks_executed = static_cast<int>(out.allocation.n_assigned());
  return out;
}

std::string report_to_csv(std::span<const ReportRow> rows) {
  csv::Writer w({"run_id", "policy", "seed", "n_tasks", "om", "pt_s", "ec_j",
                 "objective"});
  for (const auto& r : rows) {
    w.add_row({std::to_string(r.run_id), r.policy, std::to_string(r.seed),
               std::to_string(r.n_tasks), csv::format_real(r.om),
               csv::format_real(r.pt_s), csv::format_real(r.ec_j),
               csv::format_real(r.objective)});
  }
  return w.str();
}

std::vector<ReportRow> read_report(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  std::vector<ReportRow> out;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    ReportRow row;
    row.run_id = static_cast<int>(t.integer(r, t.column("run_id")));
    row.policy = t.cell(r, t.column("policy"));
    row.seed = static_cast<std::uint64_t>(t.integer(r, t.column("seed")));
    row.n_tasks = static_cast<int>(t.integer(r, t.column("n_tasks")));
    row.om = t.real(r, t.column("om"));
    row.pt_s = t.real(r, t.column("pt_s"));
    row.ec_j = t.real(r, t.column("ec_j"));
    row.objective = t.real(r, t.column("objective"));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace edgealloc

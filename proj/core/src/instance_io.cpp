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

#include "edgealloc/instance_io.hpp"

#include <stdexcept>

namespace edgealloc {

namespace {

constexpr const char* kTaskColumns[] = {"id",         "exec_time_s",
                                        "resource_demand", "importance",
                                        "data_bits",  "learning_loss"};

Task task_row(const csv::Table& t, std::size_t r) {
  Task task;
  task.id = static_cast<int>(t.integer(r, t.column("id")));
  task.exec_time_s = t.real(r, t.column("exec_time_s"));
  task.resource_demand = t.real(r, t.column("resource_demand"));
  task.importance = t.real(r, t.column("importance"));
  task.data_bits = t.integer(r, t.column("data_bits"));
  task.learning_loss =
      t.has_column("learning_loss") ? t.real(r, t.column("learning_loss")) : 0.0;
  return task;
}

std::vector<std::string> task_fields(const Task& t) {
  return {std::to_string(t.id),         csv::format_real(t.exec_time_s),
          csv::format_real(t.resource_demand), csv::format_real(t.importance),
          std::to_string(t.data_bits),  csv::format_real(t.learning_loss)};
}

template <typename Fn>
auto checked(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

}  // namespace

TaskSet tasks_from_csv(const csv::Table& table, std::optional<int> day) {
  const bool has_day = table.has_column("day_id");
  if (day && !has_day) {
    throw DataError("task table has no day_id column");
  }
  TaskSet tasks;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    if (day && table.integer(r, table.column("day_id")) != *day) continue;
    tasks.push_back(task_row(table, r));
  }
  checked([&] {
    validate(tasks);
    return 0;
  });
  return tasks;
}

TaskSet read_tasks(const std::filesystem::path& path, std::optional<int> day) {
  return tasks_from_csv(csv::read(path), day);
}

std::string tasks_to_csv(const TaskSet& tasks) {
  csv::Writer w({std::begin(kTaskColumns), std::end(kTaskColumns)});
  for (const Task& t : tasks) w.add_row(task_fields(t));
  return w.str();
}

std::map<int, TaskSet> read_task_days(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t day_col = table.column("day_id");
  std::map<int, TaskSet> out;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    out[static_cast<int>(table.integer(r, day_col))].push_back(
        task_row(table, r));
  }
  checked([&] {
    for (const auto& [day, tasks] : out) validate(tasks);
    return 0;
  });
  return out;
}

std::string task_days_to_csv(const std::map<int, TaskSet>& days) {
  std::vector<std::string> header{"day_id"};
  header.insert(header.end(), std::begin(kTaskColumns), std::end(kTaskColumns));
  csv::Writer w(std::move(header));
  for (const auto& [day, tasks] : days) {
    for (const Task& t : tasks) {
      auto fields = task_fields(t);
      fields.insert(fields.begin(), std::to_string(day));
      w.add_row(std::move(fields));
    }
  }
  return w.str();
}

DeviceSet devices_from_csv(const csv::Table& t) {
  DeviceSet devices;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    EdgeDevice d;
    d.id = static_cast<int>(t.integer(r, t.column("id")));
    d.capacity = t.real(r, t.column("capacity"));
    d.proc_speed_s_per_bit = t.real(r, t.column("proc_speed_s_per_bit"));
    d.proc_energy_j_per_bit = t.real(r, t.column("proc_energy_j_per_bit"));
    d.tx_energy_j_per_bit = t.real(r, t.column("tx_energy_j_per_bit"));
    d.rx_energy_j_per_bit = t.real(r, t.column("rx_energy_j_per_bit"));
    d.bandwidth_bits_per_s = t.real(r, t.column("bandwidth_bits_per_s"));
    devices.push_back(d);
  }
  checked([&] {
    validate(devices);
    return 0;
  });
  return devices;
}

DeviceSet read_devices(const std::filesystem::path& path) {
  return devices_from_csv(csv::read(path));
}

std::string devices_to_csv(const DeviceSet& devices) {
  csv::Writer w({"id", "capacity", "proc_speed_s_per_bit",
                 "proc_energy_j_per_bit", "tx_energy_j_per_bit",
                 "rx_energy_j_per_bit", "bandwidth_bits_per_s"});
  for (const EdgeDevice& d : devices) {
    w.add_row({std::to_string(d.id), csv::format_real(d.capacity),
               csv::format_real(d.proc_speed_s_per_bit),
               csv::format_real(d.proc_energy_j_per_bit),
               csv::format_real(d.tx_energy_j_per_bit),
               csv::format_real(d.rx_energy_j_per_bit),
               csv::format_real(d.bandwidth_bits_per_s)});
  }
  return w.str();
}

}  // namespace edgealloc

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

#ifndef EDGEALLOC_INSTANCE_IO_HPP_
#define EDGEALLOC_INSTANCE_IO_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "edgealloc/csv.hpp"
#include "edgealloc/types.hpp"

namespace edgealloc {

// TaskSet CSV:
//   id,exec_time_s,resource_demand,importance,data_bits,learning_loss
// A leading day_id column is accepted (multi-day task tables); pass `day`
// to select one day. learning_loss may be omitted and defaults to 0.
TaskSet tasks_from_csv(const csv::Table& table,
                       std::optional<int> day = std::nullopt);
TaskSet read_tasks(const std::filesystem::path& path,
                   std::optional<int> day = std::nullopt);
std::string tasks_to_csv(const TaskSet& tasks);

// Multi-day table: day_id followed by the TaskSet columns.
std::map<int, TaskSet> read_task_days(const std::filesystem::path& path);
std::string task_days_to_csv(const std::map<int, TaskSet>& days);

// DeviceSet CSV:
//   id,capacity,proc_speed_s_per_bit,proc_energy_j_per_bit,
//   tx_energy_j_per_bit,rx_energy_j_per_bit,bandwidth_bits_per_s
DeviceSet read_devices(const std::filesystem::path& path);
DeviceSet devices_from_csv(const csv::Table& table);
std::string devices_to_csv(const DeviceSet& devices);

}  // namespace edgealloc

#endif  // EDGEALLOC_INSTANCE_IO_HPP_

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

// On-disk layout of a generated dataset directory:
//
//   gen_config.json        generator configuration (seed included)
//   tasks.csv              day_id + task columns, one row per day and task
//   devices.csv            edge devices
//   topology.json          star topology
//   chiller_specs.csv      chiller_id,max_capacity_kw
//   operations.csv         op_id,chiller_id
//   demand.csv             day_id,slot,q_d_kw
//   op_cop.csv             day_id,op_id,slot,cop (ground truth)
//   ideal.csv              day_id,ideal_kwh
//   environment.csv        day_id,ctx_*,I_* (environment library)
//   svm_train.csv          labelled feature rows
//   chiller_records.csv    chiller_id,timestamp,c_kj_kg_c,m_kg_s,dt_c,e_kw

#ifndef EDGEALLOC_DATASET_IO_HPP_
#define EDGEALLOC_DATASET_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "edgealloc/generator.hpp"

namespace edgealloc {

const std::vector<std::string>& dataset_files();

// Creates `dir` if needed and overwrites the files listed above.
void write_dataset(const SyntheticDataset& dataset, const std::filesystem::path& dir);

// Throws DataError when a file is missing or inconsistent with the others.
SyntheticDataset read_dataset(const std::filesystem::path& dir);

}  // namespace edgealloc

#endif  // EDGEALLOC_DATASET_IO_HPP_

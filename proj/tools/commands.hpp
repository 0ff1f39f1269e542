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

// Subcommands of the edgealloc tool. Each returns an ExitCode; diagnostics
// go to `err` as a single "edgealloc: ..." line.

#ifndef EDGEALLOC_TOOLS_COMMANDS_HPP_
#define EDGEALLOC_TOOLS_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "edgealloc/experiment.hpp"

namespace edgealloc::cli {

// Artifact file names inside the artifacts directory.
inline constexpr const char* kPolicyFile = "policy.json";
inline constexpr const char* kSvmModelFile = "svm_model.json";
inline constexpr const char* kReportFile = "report.csv";
inline constexpr const char* kSummaryFile = "summary.json";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// {"seed","knn_k","n_validation_days","n_test_days","weights":{w1,w2},"days":{id:policy}}
std::string policy_bundle_json(const TrainedArtifacts& artifacts, const BenchmarkConfig& config,
                               std::uint64_t seed);

}  // namespace edgealloc::cli

#endif  // EDGEALLOC_TOOLS_COMMANDS_HPP_

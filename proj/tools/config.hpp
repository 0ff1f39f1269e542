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

// Experiment configuration for the edgealloc tool.
//
// A config is one JSON object. Precedence, lowest first: built-in defaults,
// the --config file, dedicated flags (--seed, --out, ...), then --set
// overrides in command-line order. Every override names a dotted key path,
// e.g. --set crl.episodes=500.

#ifndef EDGEALLOC_TOOLS_CONFIG_HPP_
#define EDGEALLOC_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "edgealloc/experiment.hpp"
#include "edgealloc/generator.hpp"

namespace edgealloc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInfeasible = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  GenConfig generator;
  BenchmarkConfig benchmark;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "edgealloc_out";
  std::optional<std::filesystem::path> dataset_dir;
  std::optional<std::filesystem::path> artifacts_dir;
  std::optional<std::filesystem::path> topology;
  std::optional<double> deadline_s;

  std::filesystem::path dataset_path() const {
    return dataset_dir.value_or(output_dir / "dataset");
  }
  std::filesystem::path artifacts_path() const {
    return artifacts_dir.value_or(output_dir);
  }

  // Pretty-printed, every key present; loads back to an equal config.
  std::string to_json() const;
};

// key path, raw value; values that parse as JSON are taken as JSON, anything
// else as a string.
using Override = std::pair<std::string, std::string>;

// Throws UsageError on unreadable or malformed configs, unknown keys and
// out-of-range values.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const std::vector<Override>& overrides);
ExperimentConfig parse_config(const std::string& text,
                              const std::vector<Override>& overrides = {});

// "key=value" -> {key, value}; throws UsageError without '='.
Override parse_override(const std::string& text);

}  // namespace edgealloc::cli

#endif  // EDGEALLOC_TOOLS_CONFIG_HPP_

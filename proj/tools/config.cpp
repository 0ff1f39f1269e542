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

#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgealloc/types.hpp"

namespace edgealloc::cli {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  if (!obj.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw UsageError("unknown config key " + where + key);
  }
}

json crl_to_json(const CrlHyperParams& p) {
  return {{"mode", p.mode == QMode::kTabular ? "tabular" : "approx"},
          {"discount", p.discount},
          {"learning_rate", p.learning_rate},
          {"epsilon_start", p.epsilon_start},
          {"epsilon_end", p.epsilon_end},
          {"epsilon_decay_fraction", p.epsilon_decay_fraction},
          {"episodes", p.episodes},
          {"eval_every", p.eval_every},
          {"patience", p.patience},
          {"hidden_units", p.hidden_units}};
}

CrlHyperParams crl_from_json(const json& j, CrlHyperParams p) {
  reject_unknown(j,
                 {"mode", "discount", "learning_rate", "epsilon_start", "epsilon_end",
                  "epsilon_decay_fraction", "episodes", "eval_every", "patience",
                  "hidden_units"},
                 "crl.");
  if (j.contains("mode")) {
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "tabular") {
      p.mode = QMode::kTabular;
    } else if (mode == "approx") {
      p.mode = QMode::kApproximate;
    } else {
      throw UsageError("crl.mode must be tabular or approx");
    }
  }
  p.discount = j.value("discount", p.discount);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.epsilon_start = j.value("epsilon_start", p.epsilon_start);
  p.epsilon_end = j.value("epsilon_end", p.epsilon_end);
  p.epsilon_decay_fraction = j.value("epsilon_decay_fraction", p.epsilon_decay_fraction);
  p.episodes = j.value("episodes", p.episodes);
  p.eval_every = j.value("eval_every", p.eval_every);
  p.patience = j.value("patience", p.patience);
  p.hidden_units = j.value("hidden_units", p.hidden_units);
  if (p.episodes == 0) throw UsageError("crl.episodes must be > 0");
  if (p.discount < 0.0 || p.discount > 1.0) throw UsageError("crl.discount must be in [0,1]");
  return p;
}

json to_json_value(const ExperimentConfig& c) {
  json j;
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir.generic_string();
  j["dataset_dir"] = c.dataset_dir ? json(c.dataset_dir->generic_string()) : json(nullptr);
  j["artifacts_dir"] =
      c.artifacts_dir ? json(c.artifacts_dir->generic_string()) : json(nullptr);
  j["topology"] = c.topology ? json(c.topology->generic_string()) : json(nullptr);
  j["deadline_s"] = c.deadline_s ? json(*c.deadline_s) : json(nullptr);
  j["generator"] = json::parse(c.generator.to_json());
  j["policies"] = c.benchmark.policies;
  if (c.benchmark.weights) {
    j["weights"] = {{"w1", c.benchmark.weights->w1()}, {"w2", c.benchmark.weights->w2()}};
  } else {
    j["weights"] = "tune";
  }
  j["benchmark"] = {{"n_validation_days", c.benchmark.n_validation_days},
                    {"n_test_days", c.benchmark.n_test_days},
                    {"knn_k", c.benchmark.knn_k},
                    {"mismatch_probe", c.benchmark.mismatch_probe}};
  j["crl"] = crl_to_json(c.benchmark.crl);
  j["svm"] = {{"learning_rate", c.benchmark.svm.learning_rate},
              {"epochs", c.benchmark.svm.epochs},
              {"batch_size", c.benchmark.svm.batch_size}};
  return j;
}

std::optional<std::filesystem::path> optional_path(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return std::filesystem::path(j.at(key).get<std::string>());
}

ExperimentConfig from_json_value(const json& j) {
  reject_unknown(j,
                 {"seeds", "output_dir", "dataset_dir", "artifacts_dir", "topology",
                  "deadline_s", "generator", "policies", "weights", "benchmark", "crl",
                  "svm"},
                 "");
  ExperimentConfig c;
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    c.seeds = s.is_array() ? s.get<std::vector<std::uint64_t>>()
                           : std::vector<std::uint64_t>{s.get<std::uint64_t>()};
  }
  if (c.seeds.empty()) throw UsageError("seeds must be nonempty");
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.dataset_dir = optional_path(j, "dataset_dir");
  c.artifacts_dir = optional_path(j, "artifacts_dir");
  c.topology = optional_path(j, "topology");
  if (j.contains("deadline_s") && !j.at("deadline_s").is_null()) {
    c.deadline_s = j.at("deadline_s").get<double>();
    if (!(*c.deadline_s > 0.0)) throw UsageError("deadline_s must be > 0");
  }
  if (j.contains("generator")) {
    try {
      c.generator = GenConfig::from_json(j.at("generator").dump());
    } catch (const DataError& e) {
      throw UsageError(std::string("generator: ") + e.what());
    }
  }
  try {
    c.generator.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("generator: ") + e.what());
  }

  BenchmarkConfig& b = c.benchmark;
  if (j.contains("policies")) b.policies = j.at("policies").get<std::vector<std::string>>();
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    if (w.is_string()) {
      if (w.get<std::string>() != "tune") throw UsageError("weights must be \"tune\" or {w1,w2}");
      b.weights.reset();
    } else {
      reject_unknown(w, {"w1", "w2"}, "weights.");
      const double w1 = w.at("w1").get<double>();
      const double w2 = w.contains("w2") ? w.at("w2").get<double>() : 1.0 - w1;
      try {
        b.weights = EnsembleWeights(w1, w2);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (j.contains("benchmark")) {
    const json& bj = j.at("benchmark");
    reject_unknown(bj, {"n_validation_days", "n_test_days", "knn_k", "mismatch_probe"},
                   "benchmark.");
    b.n_validation_days = bj.value("n_validation_days", b.n_validation_days);
    b.n_test_days = bj.value("n_test_days", b.n_test_days);
    b.knn_k = bj.value("knn_k", b.knn_k);
    b.mismatch_probe = bj.value("mismatch_probe", b.mismatch_probe);
  }
  if (j.contains("crl")) b.crl = crl_from_json(j.at("crl"), b.crl);
  if (j.contains("svm")) {
    const json& sj = j.at("svm");
    reject_unknown(sj, {"learning_rate", "epochs", "batch_size"}, "svm.");
    b.svm.learning_rate = sj.value("learning_rate", b.svm.learning_rate);
    b.svm.epochs = sj.value("epochs", b.svm.epochs);
    b.svm.batch_size = sj.value("batch_size", b.svm.batch_size);
    if (!(b.svm.learning_rate > 0.0) || b.svm.batch_size == 0) {
      throw UsageError("svm.learning_rate and svm.batch_size must be > 0");
    }
  }
  try {
    // Whether enough history days remain depends on the dataset; that is
    // checked when a command runs.
    b.validate(b.n_validation_days + b.n_test_days + 1);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void apply_override(json& root, const Override& o) {
  if (o.first.empty()) throw UsageError("empty override key");
  json* node = &root;
  std::stringstream path(o.first);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    json& child = (*node)[parts[i]];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw UsageError("override " + o.first + " crosses a non-object");
    node = &child;
  }
  json value = json::parse(o.second, nullptr, false);
  if (value.is_discarded()) value = o.second;
  (*node)[parts.back()] = std::move(value);
}

}  // namespace

std::string ExperimentConfig::to_json() const { return to_json_value(*this).dump(2); }

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("override must look like key=value: " + text);
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    throw UsageError("config is not a JSON object");
  }
  try {
    for (const auto& o : overrides) apply_override(root, o);
    return from_json_value(root);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const std::vector<Override>& overrides) {
  if (!file) return parse_config("{}", overrides);
  std::ifstream in(*file, std::ios::binary);
  if (!in) throw UsageError("cannot read config " + file->string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace edgealloc::cli

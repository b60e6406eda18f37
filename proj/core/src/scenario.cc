// Copyright 2026 The edgecache Authors
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

#include "edgecache/scenario.h"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "edgecache/error.h"

namespace edgecache {

double ScenarioSpec::capacity_ratio() const {
  return static_cast<double>(num_scbs()) * static_cast<double>(capacity) /
         static_cast<double>(initial_contents);
}

std::vector<std::string> ScenarioProblems(const ScenarioSpec& s) {
  std::vector<std::string> out;
  auto check = [&](bool ok, const std::string& message) {
    if (!ok) out.push_back(message);
  };
  check(!s.name.empty(), "name must not be empty");
  check(s.rows >= 1, "topology.rows must be >= 1");
  check(s.cols >= 1, "topology.cols must be >= 1");
  check(s.hop_cost >= 0, "topology.hop_cost must be >= 0");
  if (s.rows >= 1 && s.cols >= 1 && s.hop_cost >= 0) {
    check(s.mcbs_cost > s.hop_cost * ((s.rows - 1) + (s.cols - 1)),
          "topology.mcbs_cost must exceed hop_cost times the grid diameter");
  }
  check(s.initial_contents >= 1, "contents.initial must be >= 1");
  check(s.arrivals_per_stage >= 0, "contents.arrivals_per_stage must be >= 0");
  check(s.base_demand >= 0.0, "contents.base_demand must be >= 0");
  check(s.capacity >= 0, "capacity must be >= 0");
  check(s.gamma >= 0, "gamma must be >= 0");
  check(s.num_stages >= 1, "stages must be >= 1");
  double beta_sum = 0.0;
  bool beta_ok = !s.beta.empty();
  for (double b : s.beta) {
    beta_ok = beta_ok && std::isfinite(b) && b >= 0.0;
    beta_sum += b;
  }
  check(beta_ok && std::abs(beta_sum - 1.0) <= 1e-9,
        "demand.beta must be nonnegative and sum to 1");
  check(std::isfinite(s.noise_sigma) && s.noise_sigma >= 0.0,
        "demand.noise_sigma must be >= 0");
  check(std::isfinite(s.zipf_skew) && s.zipf_skew > 0.0,
        "demand.zipf_skew must be > 0");
  if (s.mu_kind == "custom") {
    check(static_cast<int>(s.mu_values.size()) == s.num_stages,
          "demand.mu needs one value per stage");
    for (double m : s.mu_values) {
      if (!(std::isfinite(m) && m > 0.0)) {
        out.push_back("demand.mu values must be > 0");
        break;
      }
    }
  } else {
    check(s.mu_kind == "flat" || s.mu_kind == "diurnal",
          "demand.mu must be \"flat\", \"diurnal\" or a list");
  }
  check(s.replications >= 1, "run.replications must be >= 1");
  check(s.node_budget >= 1, "run.node_budget must be >= 1");
  check(!s.policies.empty(), "policy.kind must name at least one policy");
  for (const std::string& token : s.policies) {
    try {
      ParsePolicy(token, s.solver_mode);
    } catch (const Error& e) {
      out.push_back(std::string("policy.kind: ") + e.what());
    }
  }
  check(s.lru_decay >= 0.0 && s.lru_decay <= 1.0,
        "policy.lru_decay must be in [0, 1]");
  return out;
}

void ValidateScenario(const ScenarioSpec& spec) {
  const std::vector<std::string> problems = ScenarioProblems(spec);
  if (problems.empty()) return;
  std::string message = "invalid scenario '" + spec.name + "':";
  for (const std::string& p : problems) message += "\n  " + p;
  throw Error(ErrorCode::kValidationError, message);
}

namespace {

struct PresetRow {
  int family;
  int rows;
  int cols;
  int contents;
  int arrivals;
  std::array<int, 4> capacity;
  SolverMode mode;
};

constexpr std::array<PresetRow, 7> kPresets = {{
    {1, 1, 3, 10, 1, {1, 2, 3, 4}, SolverMode::kExact},
    {2, 1, 3, 100, 2, {10, 20, 30, 40}, SolverMode::kExact},
    {3, 2, 3, 100, 2, {4, 8, 12, 17}, SolverMode::kSingleCopyFlow},
    {4, 2, 3, 500, 5, {20, 40, 60, 80}, SolverMode::kGreedy},
    {5, 3, 4, 500, 5, {10, 20, 30, 40}, SolverMode::kGreedy},
    {6, 3, 4, 1000, 10, {20, 40, 60, 80}, SolverMode::kGreedy},
    {7, 3, 5, 1000, 10, {17, 33, 50, 66}, SolverMode::kGreedy},
}};

}  // namespace

std::vector<std::string> PresetNames() {
  std::vector<std::string> names;
  for (const PresetRow& row : kPresets) {
    for (int k = 1; k <= 4; ++k) {
      names.push_back("ins" + std::to_string(row.family) + "." +
                      std::to_string(k));
    }
  }
  return names;
}

bool IsPreset(std::string_view name) {
  for (const std::string& n : PresetNames()) {
    if (n == name) return true;
  }
  return false;
}

ScenarioSpec PresetScenario(std::string_view name) {
  for (const PresetRow& row : kPresets) {
    for (int k = 1; k <= 4; ++k) {
      const std::string id =
          "ins" + std::to_string(row.family) + "." + std::to_string(k);
      if (id != name) continue;
      ScenarioSpec spec;
      spec.name = id;
      spec.rows = row.rows;
      spec.cols = row.cols;
      spec.initial_contents = row.contents;
      spec.arrivals_per_stage = row.arrivals;
      spec.capacity = row.capacity[k - 1];
      spec.solver_mode = row.mode;
      return spec;
    }
  }
  throw Error(ErrorCode::kValidationError,
              "unknown preset '" + std::string(name) + "'");
}

namespace {

using Json = nlohmann::json;

// Nested objects become dotted keys; arrays and scalars are leaves.
void Flatten(const Json& node, const std::string& prefix,
             std::map<std::string, Json>* out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      Flatten(*it, key, out);
    } else {
      Require(out->emplace(key, *it).second, ErrorCode::kValidationError,
              "duplicate key '" + key + "'");
    }
  }
}

int LineOf(std::string_view text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

class FieldReader {
 public:
  explicit FieldReader(std::map<std::string, Json> fields)
      : fields_(std::move(fields)) {}

  const Json* Find(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) return nullptr;
    seen_.insert(key);
    return &it->second;
  }

  bool Has(const std::string& key) const { return fields_.count(key) > 0; }

  template <typename Int>
  void Integer(const std::string& key, Int* value) {
    const Json* j = Find(key);
    if (j == nullptr) return;
    if (!j->is_number_integer()) {
      Fail(key, "must be an integer");
      return;
    }
    *value = j->get<Int>();
  }

  void Real(const std::string& key, double* value) {
    const Json* j = Find(key);
    if (j == nullptr) return;
    if (!j->is_number()) {
      Fail(key, "must be a number");
      return;
    }
    *value = j->get<double>();
  }

  void Text(const std::string& key, std::string* value) {
    const Json* j = Find(key);
    if (j == nullptr) return;
    if (!j->is_string()) {
      Fail(key, "must be a string");
      return;
    }
    *value = j->get<std::string>();
  }

  void Reals(const std::string& key, std::vector<double>* value) {
    const Json* j = Find(key);
    if (j == nullptr) return;
    if (!j->is_array()) {
      Fail(key, "must be a list of numbers");
      return;
    }
    value->clear();
    for (const Json& e : *j) {
      if (!e.is_number()) {
        Fail(key, "must be a list of numbers");
        return;
      }
      value->push_back(e.get<double>());
    }
  }

  void Fail(const std::string& key, const std::string& message) {
    errors_.push_back(key + " " + message);
  }

  std::vector<std::string> Unknown() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : fields_) {
      if (!seen_.count(key)) out.push_back("unknown key '" + key + "'");
    }
    return out;
  }

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::map<std::string, Json> fields_;
  std::set<std::string> seen_;
  std::vector<std::string> errors_;
};

std::vector<std::string> SplitTokens(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const size_t a = token.find_first_not_of(" \t");
    const size_t b = token.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(token.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

ScenarioSpec ParseScenarioJson(std::string_view text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                std::string(source) + ":" +
                    std::to_string(LineOf(text, e.byte == 0 ? 0 : e.byte - 1)) +
                    ": " + e.what());
  }
  Require(doc.is_object(), ErrorCode::kParseError,
          std::string(source) + ":1: scenario must be a JSON object");
  std::map<std::string, Json> flat;
  Flatten(doc, "", &flat);
  FieldReader r(std::move(flat));

  ScenarioSpec spec;
  std::vector<std::string> problems;
  std::string preset;
  r.Text("preset", &preset);
  if (!preset.empty()) {
    if (IsPreset(preset)) {
      spec = PresetScenario(preset);
    } else {
      problems.push_back("preset '" + preset + "' is unknown");
    }
  } else {
    for (const char* key :
         {"name", "topology.rows", "topology.cols", "contents.initial",
          "contents.arrivals_per_stage", "capacity", "gamma", "stages"}) {
      if (!r.Has(key))
        problems.push_back(std::string("missing field '") + key + "'");
    }
  }

  r.Text("name", &spec.name);
  r.Integer("topology.rows", &spec.rows);
  r.Integer("topology.cols", &spec.cols);
  r.Integer("topology.hop_cost", &spec.hop_cost);
  r.Integer("topology.mcbs_cost", &spec.mcbs_cost);
  r.Integer("contents.initial", &spec.initial_contents);
  r.Integer("contents.arrivals_per_stage", &spec.arrivals_per_stage);
  r.Real("contents.base_demand", &spec.base_demand);
  r.Integer("capacity", &spec.capacity);
  r.Integer("gamma", &spec.gamma);
  r.Integer("stages", &spec.num_stages);
  r.Reals("demand.beta", &spec.beta);
  r.Real("demand.noise_sigma", &spec.noise_sigma);
  r.Real("demand.zipf_skew", &spec.zipf_skew);
  if (const Json* mu = r.Find("demand.mu")) {
    if (mu->is_string()) {
      spec.mu_kind = mu->get<std::string>();
    } else if (mu->is_array()) {
      spec.mu_kind = "custom";
      spec.mu_values.clear();
      for (const Json& e : *mu) {
        if (!e.is_number()) {
          r.Fail("demand.mu", "must be a list of numbers");
          break;
        }
        spec.mu_values.push_back(e.get<double>());
      }
    } else {
      r.Fail("demand.mu", "must be a string or a list of numbers");
    }
  }
  r.Integer("run.replications", &spec.replications);
  r.Integer("run.seed", &spec.seed);
  r.Integer("run.node_budget", &spec.node_budget);
  if (const Json* kind = r.Find("policy.kind")) {
    if (kind->is_string()) {
      spec.policies = SplitTokens(kind->get<std::string>());
    } else if (kind->is_array()) {
      spec.policies.clear();
      for (const Json& e : *kind) {
        if (!e.is_string()) {
          r.Fail("policy.kind", "must list policy names");
          break;
        }
        spec.policies.push_back(e.get<std::string>());
      }
    } else {
      r.Fail("policy.kind", "must be a string or a list of strings");
    }
  }
  r.Integer("policy.r", &spec.policy_r);
  r.Real("policy.lru_decay", &spec.lru_decay);
  std::string mode;
  r.Text("policy.solver_mode", &mode);
  if (!mode.empty()) {
    try {
      spec.solver_mode = ParseSolverMode(mode);
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  int horizon = -1;
  r.Integer("policy.horizon", &horizon);
  if (horizon >= 0) {
    // A bare "rh" or "greedy" token takes the configured horizon.
    for (std::string& token : spec.policies) {
      if (token == "rh" || token == "greedy") token += std::to_string(horizon);
    }
  }

  for (const std::string& e : r.errors()) problems.push_back(e);
  for (const std::string& e : r.Unknown()) problems.push_back(e);
  for (const std::string& e : ScenarioProblems(spec)) problems.push_back(e);
  if (!problems.empty()) {
    std::string message = std::string(source) + ": invalid scenario:";
    for (const std::string& p : problems) message += "\n  " + p;
    throw Error(ErrorCode::kValidationError, message);
  }
  return spec;
}

ScenarioSpec LoadScenario(std::string_view name_or_path) {
  if (IsPreset(name_or_path)) return PresetScenario(name_or_path);
  const std::string path(name_or_path);
  std::ifstream in(path);
  Require(static_cast<bool>(in), ErrorCode::kIoError,
          "cannot open scenario '" + path + "' (not a preset or a file)");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenarioJson(buffer.str(), path);
}

ArModel MakeArModel(const ScenarioSpec& spec) {
  ArModel model;
  model.beta = spec.beta;
  model.noise_sigma = spec.noise_sigma;
  model.zipf_skew = spec.zipf_skew;
  if (spec.mu_kind == "flat") {
    model.mu_profile = FlatMuProfile(spec.num_stages);
  } else if (spec.mu_kind == "custom") {
    model.mu_profile = spec.mu_values;
  } else {
    model.mu_profile = DiurnalMuProfile(spec.num_stages, spec.beta);
  }
  model.Validate();
  return model;
}

GridTopology MakeTopology(const ScenarioSpec& spec) {
  return BuildGrid(spec.rows, spec.cols, spec.hop_cost, spec.mcbs_cost);
}

PolicyEnvironment MakeEnvironment(const ScenarioSpec& spec) {
  PolicyEnvironment env;
  env.costs = BuildCostMatrix(MakeTopology(spec));
  env.capacities.assign(spec.num_scbs(), spec.capacity);
  env.gamma = spec.gamma;
  env.model = MakeArModel(spec);
  env.exact.node_budget = spec.node_budget;
  return env;
}

TraceConfig MakeTraceConfig(const ScenarioSpec& spec) {
  TraceConfig config;
  config.initial_contents = spec.initial_contents;
  config.arrivals_per_stage = spec.arrivals_per_stage;
  config.base_demand = spec.base_demand;
  return config;
}

std::vector<PolicySpec> MakePolicySpecs(
    const ScenarioSpec& spec, const std::vector<std::string>& tokens) {
  std::vector<PolicySpec> out;
  std::set<std::string> seen;
  for (const std::string& token : tokens) {
    Require(seen.insert(token).second, ErrorCode::kValidationError,
            "policy '" + token + "' listed twice");
    PolicySpec p = ParsePolicy(token, spec.solver_mode);
    p.r = spec.policy_r;
    p.lru_decay = spec.lru_decay;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace edgecache

// Copyright 2026 The chestsep Authors
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
#include "chestsep/cli/run_config.h"

#include <fstream>
#include <set>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep::cli {
namespace {

using nlohmann::json;

void RejectUnknown(const json& j, const std::set<std::string>& known,
                   const std::string& where) {
  if (!j.is_object()) throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Beta BetaFromInt(int value) {
  if (value < 0 || value > 2) throw ConfigError("beta must be 0, 1 or 2");
  return static_cast<Beta>(value);
}

}  // namespace

void RunConfig::Validate() const {
  try {
    stft.Validate();
    solver.Validate();
    weights.Validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (blocks.heart < 1 || blocks.lung < 1 || blocks.noise < 0 || blocks.unsupervised < 0) {
    throw ConfigError("heart and lung need at least one basis; others may be zero");
  }
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (filter_len < 1) throw ConfigError("filter_len must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

json ToJson(const RunConfig& c) {
  return {
      {"version", kConfigVersion},
      {"stft",
       {{"fft_size", c.stft.fft_size},
        {"window_size", c.stft.window_size},
        {"hop_size", c.stft.hop_size},
        {"window", ToString(c.stft.window)}}},
      {"solver",
       {{"beta", static_cast<int>(c.solver.beta)},
        {"mu", c.solver.mu},
        {"max_iter", c.solver.max_iter},
        {"epsilon", c.solver.epsilon},
        {"seed", c.solver.rng_seed},
        {"early_stop", c.solver.early_stop},
        {"early_stop_tolerance", c.solver.early_stop_tolerance}}},
      {"weights",
       {{"heart", c.weights.heart}, {"lung", c.weights.lung}, {"noise", c.weights.noise}}},
      {"blocks",
       {{"heart", c.blocks.heart},
        {"lung", c.blocks.lung},
        {"noise", c.blocks.noise},
        {"unsupervised", c.blocks.unsupervised}}},
      {"sample_rate", c.sample_rate},
      {"filter_len", c.filter_len},
      {"jobs", c.jobs},
  };
}

RunConfig RunConfigFromJson(const json& j) {
  RunConfig c;
  try {
    RejectUnknown(j, {"version", "stft", "solver", "weights", "blocks", "sample_rate",
                      "filter_len", "jobs"},
                  "");
    if (j.contains("version") && j.at("version").get<int>() != kConfigVersion) {
      throw ConfigError("unsupported config version " + j.at("version").dump());
    }
    if (j.contains("stft")) {
      const json& s = j.at("stft");
      RejectUnknown(s, {"fft_size", "window_size", "hop_size", "window"}, "stft.");
      Read(s, "fft_size", c.stft.fft_size);
      Read(s, "window_size", c.stft.window_size);
      Read(s, "hop_size", c.stft.hop_size);
      if (s.contains("window")) {
        c.stft.window = WindowKindFromString(s.at("window").get<std::string>());
      }
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      RejectUnknown(s, {"beta", "mu", "max_iter", "epsilon", "seed", "early_stop",
                        "early_stop_tolerance"},
                    "solver.");
      if (s.contains("beta")) c.solver.beta = BetaFromInt(s.at("beta").get<int>());
      Read(s, "mu", c.solver.mu);
      Read(s, "max_iter", c.solver.max_iter);
      Read(s, "epsilon", c.solver.epsilon);
      Read(s, "seed", c.solver.rng_seed);
      Read(s, "early_stop", c.solver.early_stop);
      Read(s, "early_stop_tolerance", c.solver.early_stop_tolerance);
    }
    if (j.contains("weights")) {
      const json& s = j.at("weights");
      RejectUnknown(s, {"heart", "lung", "noise"}, "weights.");
      Read(s, "heart", c.weights.heart);
      Read(s, "lung", c.weights.lung);
      Read(s, "noise", c.weights.noise);
    }
    if (j.contains("blocks")) {
      const json& s = j.at("blocks");
      RejectUnknown(s, {"heart", "lung", "noise", "unsupervised"}, "blocks.");
      Read(s, "heart", c.blocks.heart);
      Read(s, "lung", c.blocks.lung);
      Read(s, "noise", c.blocks.noise);
      Read(s, "unsupervised", c.blocks.unsupervised);
    }
    Read(j, "sample_rate", c.sample_rate);
    Read(j, "filter_len", c.filter_len);
    Read(j, "jobs", c.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return RunConfigFromJson(j);
}

}  // namespace chestsep::cli

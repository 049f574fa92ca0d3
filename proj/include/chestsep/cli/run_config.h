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
#ifndef CHESTSEP_CLI_RUN_CONFIG_H_
#define CHESTSEP_CLI_RUN_CONFIG_H_

#include <filesystem>

#include "json.hpp"

#include "chestsep/dsp/stft.h"
#include "chestsep/factorization/model.h"
#include "chestsep/nmcf/nmcf.h"

namespace chestsep::cli {

inline constexpr int kConfigVersion = 1;

// Every tunable the pipeline reads. Defaults are the selected configuration:
// STFT 1024/512/256 Hann, KL divergence, mu = 0.1, 100 iterations,
// 20/20/20 + 10 bases, cofactor weights (0, 0, 0.25).
struct RunConfig {
  StftConfig stft;
  SolverConfig solver;
  CofactorWeights weights;
  BlockSizes blocks = kDefaultNmcfSizes;
  int sample_rate = kDefaultSampleRate;
  int filter_len = 512;
  int jobs = 1;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

nlohmann::json ToJson(const RunConfig& config);

// Missing keys keep their defaults; unknown keys, a wrong version or a type
// mismatch throw ConfigError.
RunConfig RunConfigFromJson(const nlohmann::json& j);
RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace chestsep::cli

#endif  // CHESTSEP_CLI_RUN_CONFIG_H_

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
#ifndef CHESTSEP_CLI_COMMANDS_H_
#define CHESTSEP_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chestsep/bss_eval/bss_eval.h"
#include "chestsep/cli/run_config.h"
#include "chestsep/mixgen/mixgen.h"
#include "chestsep/separation/separation.h"
#include "chestsep/synthdata/synthdata.h"

namespace chestsep::cli {

namespace fs = std::filesystem;

enum class Method { kNmf, kNmfUnsupervised, kNmcf, kBandpass };

std::string ToString(Method method);
Method MethodFromString(const std::string& name);

// Runs fn(0) .. fn(count - 1) on up to `jobs` threads. The first exception
// by index is rethrown after all workers finish.
void ParallelFor(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct SynthOptions {
  SynthKind kind = SynthKind::kHeart;
  int count = 1;
  double duration_s = 10.0;
  double rate_param = 0.0;
  std::uint64_t seed = 0;
  fs::path out_dir;
  std::string prefix;  // defaults to the kind name
};

// Writes <prefix>_NNN.wav plus a JSON spec echo per clip.
std::vector<fs::path> RunSynth(const SynthOptions& opts, const RunConfig& config);

struct MixOptions {
  std::vector<fs::path> heart;
  std::vector<fs::path> lung;
  std::vector<fs::path> noise;
  std::vector<MixMode> modes = {MixMode::kInstantaneous, MixMode::kConvolutive};
  bool with_noise = true;
  std::uint64_t seed = 0;
  fs::path out_dir;
};

// Writes one mixture WAV per grid cell and out_dir/manifest.json. The i-th
// heart, lung and noise files form triple i.
fs::path RunMix(const MixOptions& opts, const RunConfig& config);

struct ManifestEntry {
  std::string id;
  std::string noise_class;
  MixtureRecipe recipe;
  fs::path mixture;
  fs::path heart;
  fs::path lung;
  std::optional<fs::path> noise;
  std::string mixture_sha256;
};

// Paths come back resolved against the manifest's directory.
std::vector<ManifestEntry> ReadManifest(const fs::path& path);

// Rebuilds the instance, ground truths included, from its component files.
MixtureInstance LoadInstance(const ManifestEntry& entry);

struct TrainOptions {
  std::vector<fs::path> heart;
  std::vector<fs::path> lung;
  std::vector<fs::path> noise;
  fs::path out;
};

FactorModel RunTrain(const TrainOptions& opts, const RunConfig& config);

struct SeparateOptions {
  Method method = Method::kNmf;
  std::vector<fs::path> inputs;
  std::optional<fs::path> manifest;  // adds every mixture it lists
  std::optional<fs::path> model;     // nmf methods
  std::vector<fs::path> heart_refs;  // nmcf
  std::vector<fs::path> lung_refs;
  std::vector<fs::path> noise_refs;
  fs::path out_dir;
};

// Writes <stem>_heart.wav, _lung.wav, optional _noise.wav / _residual.wav and
// <stem>_diagnostics.json per input. Returns the stems in input order.
std::vector<std::string> RunSeparate(const SeparateOptions& opts, const RunConfig& config);

struct EvalOptions {
  fs::path manifest;
  fs::path separated_dir;
  std::string method = "unknown";
  fs::path csv_out;
  fs::path summary_out;
};

struct ScoreRow {
  std::string instance_id;
  std::string noise_class;
  std::string source;
  BssScores estimate;
  BssScores baseline;
};

std::vector<ScoreRow> RunEval(const EvalOptions& opts, const RunConfig& config);

struct BenchOptions {
  std::vector<Method> methods = {Method::kBandpass, Method::kNmf,
                                 Method::kNmfUnsupervised, Method::kNmcf};
  int runs = 21;
  double duration_s = 10.0;
  int refs_per_class = 10;
  std::uint64_t seed = 0;
  fs::path out;  // CSV; skipped when empty
};

struct BenchRow {
  std::string method;
  double median_ms = 0.0;
  double p90_ms = 0.0;
  int n_runs = 0;
};

// Synthesises a heart + lung + ventilator fixture and its references, trains
// the NMF dictionaries once, then times each method.
std::vector<BenchRow> RunBench(const BenchOptions& opts, const RunConfig& config);

}  // namespace chestsep::cli

#endif  // CHESTSEP_CLI_COMMANDS_H_

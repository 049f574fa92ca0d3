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
#include "chestsep/cli/app.h"

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chestsep/cli/commands.h"
#include "chestsep/common/errors.h"

namespace chestsep::cli {
namespace {

using nlohmann::json;

const char* ErrorKind(int code) {
  switch (code) {
    case kExitConfig:
      return "config";
    case kExitNumerical:
      return "numerical";
    default:
      return "invalid_input";
  }
}

void ReportError(std::ostream& err, int code, const std::string& message) {
  err << json{{"error", ErrorKind(code)}, {"exit_code", code}, {"message", message}}.dump()
      << "\n";
}

// Flags that override fields of the loaded config. Each is applied only when
// given on the command line.
struct Overrides {
  std::string config_path;
  int fft_size = 0, window_size = 0, hop_size = 0;
  std::string window;
  int beta = 1;
  double mu = 0.0, epsilon = 0.0;
  int iterations = 0;
  std::uint64_t solver_seed = 0;
  bool early_stop = false;
  double lambda_heart = 0.0, lambda_lung = 0.0, lambda_noise = 0.0;
  int bases_heart = 0, bases_lung = 0, bases_noise = 0, bases_unsupervised = 0;
  int sample_rate = 0, filter_len = 0, jobs = 0;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  void Register(CLI::App& app) {
    const char* group = "Config overrides";
    app.add_option("--config", config_path, "JSON run config; flags below override it")
        ->group(group);
    auto add = [&](CLI::Option* opt, std::function<void(RunConfig&)> set) {
      opt->group(group);
      setters.emplace_back(opt, std::move(set));
    };
    add(app.add_option("--fft-size", fft_size, "FFT length"),
        [this](RunConfig& c) { c.stft.fft_size = fft_size; });
    add(app.add_option("--window-size", window_size, "analysis window length"),
        [this](RunConfig& c) { c.stft.window_size = window_size; });
    add(app.add_option("--hop-size", hop_size, "hop between frames"),
        [this](RunConfig& c) { c.stft.hop_size = hop_size; });
    add(app.add_option("--window", window, "window shape")
            ->check(CLI::IsMember({"hann_periodic", "rectangular"})),
        [this](RunConfig& c) { c.stft.window = WindowKindFromString(window); });
    add(app.add_option("--beta", beta, "divergence: 0 IS, 1 KL, 2 Euclidean")
            ->check(CLI::Range(0, 2)),
        [this](RunConfig& c) { c.solver.beta = static_cast<Beta>(beta); });
    add(app.add_option("--mu", mu, "L1 weight on activations"),
        [this](RunConfig& c) { c.solver.mu = mu; });
    add(app.add_option("--epsilon", epsilon, "floor for divisions"),
        [this](RunConfig& c) { c.solver.epsilon = epsilon; });
    add(app.add_option("--iterations", iterations, "multiplicative update sweeps"),
        [this](RunConfig& c) { c.solver.max_iter = iterations; });
    add(app.add_option("--solver-seed", solver_seed, "seed for factor initialisation"),
        [this](RunConfig& c) { c.solver.rng_seed = solver_seed; });
    add(app.add_flag("--early-stop", early_stop, "stop once the cost stalls"),
        [this](RunConfig& c) { c.solver.early_stop = early_stop; });
    add(app.add_option("--lambda-heart", lambda_heart, "heart cofactor weight"),
        [this](RunConfig& c) { c.weights.heart = lambda_heart; });
    add(app.add_option("--lambda-lung", lambda_lung, "lung cofactor weight"),
        [this](RunConfig& c) { c.weights.lung = lambda_lung; });
    add(app.add_option("--lambda-noise", lambda_noise, "noise cofactor weight"),
        [this](RunConfig& c) { c.weights.noise = lambda_noise; });
    add(app.add_option("--bases-heart", bases_heart, "heart dictionary size"),
        [this](RunConfig& c) { c.blocks.heart = bases_heart; });
    add(app.add_option("--bases-lung", bases_lung, "lung dictionary size"),
        [this](RunConfig& c) { c.blocks.lung = bases_lung; });
    add(app.add_option("--bases-noise", bases_noise, "noise dictionary size"),
        [this](RunConfig& c) { c.blocks.noise = bases_noise; });
    add(app.add_option("--bases-unsupervised", bases_unsupervised,
                       "unsupervised dictionary size"),
        [this](RunConfig& c) { c.blocks.unsupervised = bases_unsupervised; });
    add(app.add_option("--sample-rate", sample_rate, "rate of synthesised clips"),
        [this](RunConfig& c) { c.sample_rate = sample_rate; });
    add(app.add_option("--filter-len", filter_len, "distortion filter taps for scoring"),
        [this](RunConfig& c) { c.filter_len = filter_len; });
    add(app.add_option("-j,--jobs", jobs, "worker threads"),
        [this](RunConfig& c) { c.jobs = jobs; });
  }

  RunConfig Resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : LoadRunConfig(config_path);
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(c);
    }
    c.Validate();
    return c;
  }
};

std::vector<MixMode> Modes(const std::vector<std::string>& names) {
  std::vector<MixMode> out;
  for (const std::string& n : names) out.push_back(MixModeFromString(n));
  return out;
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  if (dynamic_cast<const UndefinedScore*>(&e)) return kExitNumerical;
  return kExitInvalidInput;
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heart and lung sound separation toolkit", "chestsep"};
  app.require_subcommand(1);
  Overrides overrides;
  overrides.Register(app);

  const std::vector<std::string> kinds = {"heart", "lung", "cry", "cpap_bubble",
                                          "cpap_ventilator"};
  const std::vector<std::string> modes = {"instantaneous", "convolutive"};
  const std::vector<std::string> methods = {"nmf", "nmf+unsupervised", "nmcf", "bandpass"};

  auto* config_cmd = app.add_subcommand("config", "print the effective run config");

  SynthOptions synth;
  std::string synth_kind = "heart";
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic clips");
  synth_cmd->add_option("--kind", synth_kind, "sound class")->check(CLI::IsMember(kinds));
  synth_cmd->add_option("--count", synth.count, "number of clips")->capture_default_str();
  synth_cmd->add_option("--duration", synth.duration_s, "seconds per clip")
      ->capture_default_str();
  synth_cmd->add_option("--rate", synth.rate_param,
                        "beats or breaths per minute; 0 keeps the default");
  synth_cmd->add_option("--seed", synth.seed, "data seed")->capture_default_str();
  synth_cmd->add_option("--prefix", synth.prefix, "file name prefix (default: kind)");
  synth_cmd->add_option("-o,--out", synth.out_dir, "output directory")->required();

  MixOptions mix;
  std::vector<std::string> mix_modes = modes;
  bool no_noise = false;
  auto* mix_cmd = app.add_subcommand("mix", "build the mixture grid");
  mix_cmd->add_option("--heart", mix.heart, "heart clips")->required();
  mix_cmd->add_option("--lung", mix.lung, "lung clips, one per heart clip")->required();
  mix_cmd->add_option("--noise", mix.noise, "noise clips, one per heart clip");
  mix_cmd->add_option("--modes", mix_modes, "mixing modes")
      ->check(CLI::IsMember(modes))
      ->capture_default_str();
  mix_cmd->add_flag("--no-noise", no_noise, "heart and lung only");
  mix_cmd->add_option("--seed", mix.seed, "grid seed")->capture_default_str();
  mix_cmd->add_option("-o,--out", mix.out_dir, "output directory")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "learn source dictionaries");
  train_cmd->add_option("--heart", train.heart, "heart training clips");
  train_cmd->add_option("--lung", train.lung, "lung training clips");
  train_cmd->add_option("--noise", train.noise, "noise training clips");
  train_cmd->add_option("-o,--out", train.out, "model file")->required();

  SeparateOptions sep;
  std::string sep_method;
  std::string sep_manifest;
  std::string sep_model;
  auto* sep_cmd = app.add_subcommand("separate", "separate mixtures");
  sep_cmd->add_option("--method", sep_method, "separation method")
      ->check(CLI::IsMember(methods))
      ->required();
  sep_cmd->add_option("inputs", sep.inputs, "mixture WAV files");
  sep_cmd->add_option("--manifest", sep_manifest, "separate every mixture in a manifest");
  sep_cmd->add_option("--model", sep_model, "trained model (nmf methods)");
  sep_cmd->add_option("--heart-refs", sep.heart_refs, "heart references (nmcf)");
  sep_cmd->add_option("--lung-refs", sep.lung_refs, "lung references (nmcf)");
  sep_cmd->add_option("--noise-refs", sep.noise_refs, "noise references (nmcf)");
  sep_cmd->add_option("-o,--out", sep.out_dir, "output directory")->required();

  EvalOptions eval;
  std::string eval_summary;
  auto* eval_cmd = app.add_subcommand("eval", "score separated sources");
  eval_cmd->add_option("--manifest", eval.manifest, "mixture manifest")->required();
  eval_cmd->add_option("--separated", eval.separated_dir, "separate output directory")
      ->required();
  eval_cmd->add_option("--method", eval.method, "method label for the CSV")->required();
  eval_cmd->add_option("-o,--out", eval.csv_out, "per-instance CSV")->required();
  eval_cmd->add_option("--summary", eval_summary,
                       "median summary CSV (default: <out>_summary.csv)");

  BenchOptions bench;
  std::vector<std::string> bench_methods = methods;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "time the separation methods");
  bench_cmd->add_option("--methods", bench_methods, "methods to time")
      ->check(CLI::IsMember(methods))
      ->capture_default_str();
  bench_cmd->add_option("--runs", bench.runs, "runs per method")
      ->check(CLI::Range(21, 100000))
      ->capture_default_str();
  bench_cmd->add_option("--duration", bench.duration_s, "fixture length in seconds")
      ->capture_default_str();
  bench_cmd->add_option("--refs", bench.refs_per_class, "references per class")
      ->check(CLI::Range(1, 10))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "fixture seed")->capture_default_str();
  bench_cmd->add_option("-o,--out", bench_out, "CSV report");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    ReportError(err, kExitInvalidInput, e.what());
    return kExitInvalidInput;
  }

  try {
    const RunConfig config = overrides.Resolve();
    if (*config_cmd) {
      out << ToJson(config).dump(2) << "\n";
    } else if (*synth_cmd) {
      synth.kind = SynthKindFromString(synth_kind);
      const auto paths = RunSynth(synth, config);
      out << "wrote " << paths.size() << " clips to " << synth.out_dir.string() << "\n";
    } else if (*mix_cmd) {
      mix.modes = Modes(mix_modes);
      mix.with_noise = !no_noise;
      if (no_noise && !mix.noise.empty()) {
        throw InvalidInput("--noise and --no-noise are exclusive");
      }
      out << "wrote " << RunMix(mix, config).string() << "\n";
    } else if (*train_cmd) {
      const FactorModel model = RunTrain(train, config);
      out << "wrote " << train.out.string() << " (" << model.columns() << " bases)\n";
    } else if (*sep_cmd) {
      sep.method = MethodFromString(sep_method);
      if (!sep_manifest.empty()) sep.manifest = sep_manifest;
      if (!sep_model.empty()) sep.model = sep_model;
      const auto stems = RunSeparate(sep, config);
      out << "separated " << stems.size() << " mixtures into " << sep.out_dir.string()
          << "\n";
    } else if (*eval_cmd) {
      eval.summary_out =
          eval_summary.empty()
              ? eval.csv_out.parent_path() / (eval.csv_out.stem().string() + "_summary.csv")
              : std::filesystem::path(eval_summary);
      const auto rows = RunEval(eval, config);
      out << "scored " << rows.size() << " sources into " << eval.csv_out.string() << "\n";
    } else if (*bench_cmd) {
      bench.methods.clear();
      for (const std::string& m : bench_methods) bench.methods.push_back(MethodFromString(m));
      bench.out = bench_out;
      out << "method,median_ms,p90_ms,n_runs\n";
      for (const BenchRow& r : RunBench(bench, config)) {
        out << r.method << "," << r.median_ms << "," << r.p90_ms << "," << r.n_runs << "\n";
      }
    }
  } catch (const std::exception& e) {
    const int code = ExitCodeFor(e);
    ReportError(err, code, e.what());
    return code;
  }
  return kExitOk;
}

}  // namespace chestsep::cli

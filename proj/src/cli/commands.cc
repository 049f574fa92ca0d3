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
#include "chestsep/cli/commands.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "chestsep/bss_eval/bss_eval.h"
#include "chestsep/common/errors.h"
#include "chestsep/common/hash.h"
#include "chestsep/common/random.h"
#include "chestsep/dsp/wav_io.h"
#include "chestsep/factorization/model_io.h"
#include "chestsep/factorization/nmf.h"

namespace chestsep::cli {
namespace {

using nlohmann::json;

constexpr int kManifestVersion = 1;

void EnsureDir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create directory " + dir.string() + ": " + ec.message());
}

void WriteText(const fs::path& path, const std::string& text) {
  EnsureDir(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

void WriteBytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + " is not valid JSON: " + e.what());
  }
}

std::vector<AudioClip> ReadAll(const std::vector<fs::path>& paths) {
  std::vector<AudioClip> out;
  out.reserve(paths.size());
  for (const fs::path& p : paths) out.push_back(ReadWav(p));
  return out;
}

std::vector<Spectrogram> Spectrograms(const std::vector<fs::path>& paths,
                                      const StftConfig& stft) {
  std::vector<Spectrogram> out;
  for (const AudioClip& clip : ReadAll(paths)) out.push_back(Stft(clip, stft));
  return out;
}

// Noise class of a component: the kind in its synth sidecar when present,
// otherwise the file stem.
std::string NoiseClass(const fs::path& wav) {
  fs::path sidecar = wav;
  sidecar.replace_extension(".json");
  if (fs::exists(sidecar)) {
    const json j = ReadJson(sidecar);
    if (j.contains("kind") && j.at("kind").is_string()) return j.at("kind");
  }
  return wav.stem().string();
}

std::string Relative(const fs::path& target, const fs::path& base) {
  return fs::relative(fs::absolute(target), fs::absolute(base)).generic_string();
}

std::string Format(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

double Median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double Percentile90(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

SeparationResult SeparateWith(Method method, const AudioClip& clip,
                              const FactorModel* model, const ReferenceSet* refs,
                              const RunConfig& config) {
  switch (method) {
    case Method::kNmf:
      return SeparateNmf(clip, *model, config.stft, config.solver, false);
    case Method::kNmfUnsupervised:
      return SeparateNmf(clip, *model, config.stft, config.solver, true,
                         config.blocks.unsupervised);
    case Method::kNmcf:
      return SeparateNmcf(clip, *refs, config.weights, config.blocks, config.stft,
                          config.solver);
    case Method::kBandpass:
      break;
  }
  return SeparateBandpass(clip);
}

FactorModel TrainRoles(const std::array<std::vector<Spectrogram>, 3>& examples,
                       const RunConfig& config) {
  std::vector<std::optional<FactorModel>> parts(3);
  ParallelFor(3, config.jobs, [&](std::size_t i) {
    if (examples[i].empty()) return;
    const Block role = kSupervisedBlocks[i];
    if (config.blocks[role] < 1) {
      throw ConfigError(std::string(BlockName(role)) + " block has no bases configured");
    }
    parts[i] = TrainDictionary(examples[i], config.blocks[role], config.solver, role).model;
  });
  std::vector<FactorModel> present;
  for (auto& p : parts) {
    if (p) present.push_back(std::move(*p));
  }
  if (present.empty()) throw InvalidInput("no training clips given");
  return CombineModels(present);
}

}  // namespace

std::string ToString(Method method) {
  switch (method) {
    case Method::kNmf:
      return "nmf";
    case Method::kNmfUnsupervised:
      return "nmf+unsupervised";
    case Method::kNmcf:
      return "nmcf";
    case Method::kBandpass:
      break;
  }
  return "bandpass";
}

Method MethodFromString(const std::string& name) {
  for (Method m : {Method::kNmf, Method::kNmfUnsupervised, Method::kNmcf,
                   Method::kBandpass}) {
    if (ToString(m) == name) return m;
  }
  throw InvalidInput("unknown method '" + name + "'");
}

void ParallelFor(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next == count) return;
            i = next++;
          }
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<fs::path> RunSynth(const SynthOptions& opts, const RunConfig& config) {
  if (opts.count < 1) throw InvalidInput("synth count must be at least 1");
  EnsureDir(opts.out_dir);
  const std::string prefix = opts.prefix.empty() ? ToString(opts.kind) : opts.prefix;
  std::vector<fs::path> out(opts.count);
  ParallelFor(opts.count, config.jobs, [&](std::size_t i) {
    SynthSpec spec;
    spec.kind = opts.kind;
    spec.duration_s = opts.duration_s;
    spec.sample_rate = config.sample_rate;
    spec.rate_param = opts.rate_param;
    spec.rng_seed = DeriveSeed(opts.seed, i);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%03zu", prefix.c_str(), i);
    const fs::path wav = opts.out_dir / (std::string(name) + ".wav");
    WriteWav(wav, Generate(spec));
    WriteText(opts.out_dir / (std::string(name) + ".json"), SpecToJson(spec).dump(2) + "\n");
    out[i] = wav;
  });
  return out;
}

fs::path RunMix(const MixOptions& opts, const RunConfig& config) {
  if (opts.heart.empty()) throw InvalidInput("component pool is empty");
  if (opts.lung.size() != opts.heart.size()) {
    throw InvalidInput("need as many lung clips as heart clips");
  }
  if (opts.with_noise && opts.noise.size() != opts.heart.size()) {
    throw InvalidInput("need as many noise clips as heart clips");
  }
  EnsureDir(opts.out_dir);
  std::vector<ComponentTriple> triples;
  for (std::size_t i = 0; i < opts.heart.size(); ++i) {
    ComponentTriple t;
    t.heart = ReadWav(opts.heart[i]);
    t.lung = ReadWav(opts.lung[i]);
    t.heart_id = opts.heart[i].stem().string();
    t.lung_id = opts.lung[i].stem().string();
    if (opts.with_noise) {
      t.noise = ReadWav(opts.noise[i]);
      t.noise_id = opts.noise[i].stem().string();
    }
    triples.push_back(std::move(t));
  }
  GridOptions grid_opts;
  grid_opts.modes = opts.modes;
  grid_opts.with_noise = opts.with_noise;
  grid_opts.seed = opts.seed;
  const std::vector<MixtureInstance> grid = BuildGrid(triples, grid_opts);
  const std::size_t per_triple = grid.size() / triples.size();

  std::vector<json> entries(grid.size());
  ParallelFor(grid.size(), config.jobs, [&](std::size_t i) {
    const MixtureInstance& inst = grid[i];
    const std::size_t t = i / per_triple;
    const std::vector<unsigned char> bytes = EncodeWav(inst.mixture, WavFormat::kFloat32);
    const std::string file = inst.id + ".wav";
    WriteBytes(opts.out_dir / file, bytes);
    json e = {
        {"id", inst.id},
        {"noise_class", opts.with_noise ? NoiseClass(opts.noise[t]) : "none"},
        {"recipe", RecipeToJson(inst.recipe)},
        {"mixture", file},
        {"mixture_sha256", Sha256Hex(bytes)},
        {"heart", Relative(opts.heart[t], opts.out_dir)},
        {"lung", Relative(opts.lung[t], opts.out_dir)},
    };
    e["noise"] = opts.with_noise ? json(Relative(opts.noise[t], opts.out_dir)) : json(nullptr);
    entries[i] = std::move(e);
  });
  json modes = json::array();
  for (MixMode m : opts.modes) modes.push_back(ToString(m));
  const json manifest = {
      {"version", kManifestVersion},
      {"seed", opts.seed},
      {"modes", modes},
      {"with_noise", opts.with_noise},
      {"component_normalization", "unit_rms"},
      {"instances", entries},
  };
  const fs::path path = opts.out_dir / "manifest.json";
  WriteText(path, manifest.dump(2) + "\n");
  return path;
}

std::vector<ManifestEntry> ReadManifest(const fs::path& path) {
  const json j = ReadJson(path);
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> out;
  try {
    if (j.at("version").get<int>() != kManifestVersion) {
      throw InvalidInput("unsupported manifest version");
    }
    for (const json& e : j.at("instances")) {
      ManifestEntry m;
      m.id = e.at("id").get<std::string>();
      m.noise_class = e.at("noise_class").get<std::string>();
      m.recipe = RecipeFromJson(e.at("recipe"));
      m.mixture = base / e.at("mixture").get<std::string>();
      m.mixture_sha256 = e.at("mixture_sha256").get<std::string>();
      m.heart = base / e.at("heart").get<std::string>();
      m.lung = base / e.at("lung").get<std::string>();
      if (!e.at("noise").is_null()) m.noise = base / e.at("noise").get<std::string>();
      if (m.noise.has_value() != m.recipe.chest_to_noise_db.has_value()) {
        throw InvalidInput("instance " + m.id + " pairs noise and ratio inconsistently");
      }
      out.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw InvalidInput("malformed manifest " + path.string() + ": " + e.what());
  }
  return out;
}

MixtureInstance LoadInstance(const ManifestEntry& entry) {
  std::optional<AudioClip> noise;
  if (entry.noise) noise = NormalizeRms(ReadWav(*entry.noise));
  MixtureInstance inst = Remix(entry.recipe, NormalizeRms(ReadWav(entry.heart)),
                               NormalizeRms(ReadWav(entry.lung)), noise);
  inst.id = entry.id;
  return inst;
}

FactorModel RunTrain(const TrainOptions& opts, const RunConfig& config) {
  std::array<std::vector<Spectrogram>, 3> examples = {
      Spectrograms(opts.heart, config.stft), Spectrograms(opts.lung, config.stft),
      Spectrograms(opts.noise, config.stft)};
  const FactorModel model = TrainRoles(examples, config);
  EnsureDir(opts.out.parent_path());
  SaveModel(opts.out, model);
  return model;
}

std::vector<std::string> RunSeparate(const SeparateOptions& opts, const RunConfig& config) {
  std::vector<fs::path> inputs = opts.inputs;
  if (opts.manifest) {
    for (const ManifestEntry& e : ReadManifest(*opts.manifest)) inputs.push_back(e.mixture);
  }
  if (inputs.empty()) throw InvalidInput("no input mixtures");
  std::vector<std::string> stems;
  std::set<std::string> seen;
  for (const fs::path& p : inputs) {
    stems.push_back(p.stem().string());
    if (!seen.insert(stems.back()).second) {
      throw InvalidInput("two inputs share the name " + stems.back());
    }
  }

  std::optional<FactorModel> model;
  std::optional<ReferenceSet> refs;
  if (opts.method == Method::kNmf || opts.method == Method::kNmfUnsupervised) {
    if (!opts.model) throw InvalidInput("--model is required for " + ToString(opts.method));
    model = LoadModel(*opts.model);
  } else if (opts.method == Method::kNmcf) {
    refs = ReferenceSet{Spectrograms(opts.heart_refs, config.stft),
                        Spectrograms(opts.lung_refs, config.stft),
                        Spectrograms(opts.noise_refs, config.stft)};
  }
  EnsureDir(opts.out_dir);

  ParallelFor(inputs.size(), config.jobs, [&](std::size_t i) {
    const AudioClip clip = ReadWav(inputs[i]);
    const SeparationResult r = SeparateWith(opts.method, clip, model ? &*model : nullptr,
                                            refs ? &*refs : nullptr, config);
    const fs::path base = opts.out_dir / stems[i];
    WriteWav(base.string() + "_heart.wav", r.heart);
    WriteWav(base.string() + "_lung.wav", r.lung);
    if (r.noise) WriteWav(base.string() + "_noise.wav", *r.noise);
    if (r.residual) WriteWav(base.string() + "_residual.wav", *r.residual);
    const json diag = {
        {"input", inputs[i].filename().string()},
        {"method", ToString(opts.method)},
        {"iterations", r.diagnostics.iterations},
        {"cost_trace", r.diagnostics.cost_trace},
        {"wall_ms", r.diagnostics.wall_ms},
        {"config", ToJson(config)},
    };
    WriteText(base.string() + "_diagnostics.json", diag.dump(2) + "\n");
  });
  return stems;
}

std::vector<ScoreRow> RunEval(const EvalOptions& opts, const RunConfig& config) {
  const std::vector<ManifestEntry> entries = ReadManifest(opts.manifest);
  std::vector<std::vector<ScoreRow>> per(entries.size());
  ParallelFor(entries.size(), config.jobs, [&](std::size_t i) {
    const ManifestEntry& e = entries[i];
    const MixtureInstance inst = LoadInstance(e);
    const fs::path base = opts.separated_dir / e.id;
    SeparationResult r;
    r.heart = ReadWav(base.string() + "_heart.wav");
    r.lung = ReadWav(base.string() + "_lung.wav");
    const fs::path noise = base.string() + "_noise.wav";
    if (fs::exists(noise)) r.noise = ReadWav(noise);
    try {
      for (const SourceScores& s : ScoreInstance(r, inst, config.filter_len)) {
        per[i].push_back({e.id, e.noise_class, s.source, s.estimate, s.baseline});
      }
    } catch (const UndefinedScore&) {
      const double nan = std::nan("");
      for (const char* source : {"heart", "lung"}) {
        per[i].push_back({e.id, e.noise_class, source, {nan, nan, nan}, {nan, nan, nan}});
      }
    }
  });
  std::vector<ScoreRow> rows;
  for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());

  std::string csv =
      "instance_id,noise_class,source,method,filter_len,sdr_db,sir_db,si_sdr_db,"
      "sdr_improvement_db,sir_improvement_db,si_sdr_improvement_db\n";
  for (const ScoreRow& r : rows) {
    csv += r.instance_id + "," + r.noise_class + "," + r.source + "," + opts.method + "," +
           std::to_string(config.filter_len) + "," + Format(r.estimate.sdr_db) + "," +
           Format(r.estimate.sir_db) + "," + Format(r.estimate.si_sdr_db) + "," +
           Format(r.estimate.sdr_db - r.baseline.sdr_db) + "," +
           Format(r.estimate.sir_db - r.baseline.sir_db) + "," +
           Format(r.estimate.si_sdr_db - r.baseline.si_sdr_db) + "\n";
  }
  WriteText(opts.csv_out, csv);

  if (!opts.summary_out.empty()) {
    std::map<std::pair<std::string, std::string>, std::array<std::vector<double>, 3>> groups;
    for (const ScoreRow& r : rows) {
      for (const std::string& cls : {r.noise_class, std::string("all")}) {
        auto& g = groups[{cls, r.source}];
        g[0].push_back(r.estimate.sdr_db - r.baseline.sdr_db);
        g[1].push_back(r.estimate.sir_db - r.baseline.sir_db);
        g[2].push_back(r.estimate.si_sdr_db - r.baseline.si_sdr_db);
      }
    }
    std::string summary =
        "noise_class,source,method,n,median_sdr_improvement_db,"
        "median_sir_improvement_db,median_si_sdr_improvement_db\n";
    for (const auto& [key, g] : groups) {
      const auto n = std::count_if(g[0].begin(), g[0].end(),
                                   [](double v) { return !std::isnan(v); });
      summary += key.first + "," + key.second + "," + opts.method + "," +
                 std::to_string(n) + "," + Format(Median(g[0])) + "," +
                 Format(Median(g[1])) + "," + Format(Median(g[2])) + "\n";
    }
    WriteText(opts.summary_out, summary);
  }
  return rows;
}

std::vector<BenchRow> RunBench(const BenchOptions& opts, const RunConfig& config) {
  if (opts.runs < 1) throw InvalidInput("bench needs at least one run");
  if (opts.refs_per_class < 1 || opts.refs_per_class > 10) {
    throw InvalidInput("refs_per_class must lie in [1, 10]");
  }
  auto synth = [&](SynthKind kind, std::uint64_t index) {
    SynthSpec spec;
    spec.kind = kind;
    spec.duration_s = opts.duration_s;
    spec.sample_rate = config.sample_rate;
    spec.rng_seed = DeriveSeed(opts.seed, index);
    return Generate(spec);
  };
  const AudioClip mixture =
      MixInstantaneous(synth(SynthKind::kHeart, 0), synth(SynthKind::kLung, 1),
                       synth(SynthKind::kCpapVentilator, 2), 0.0, 0.0)
          .mixture;
  ReferenceSet refs;
  for (int i = 0; i < opts.refs_per_class; ++i) {
    const std::uint64_t k = 100 + 3 * static_cast<std::uint64_t>(i);
    refs.heart.push_back(Stft(synth(SynthKind::kHeart, k), config.stft));
    refs.lung.push_back(Stft(synth(SynthKind::kLung, k + 1), config.stft));
    refs.noise.push_back(Stft(synth(SynthKind::kCpapVentilator, k + 2), config.stft));
  }
  std::optional<FactorModel> model;
  for (Method m : opts.methods) {
    if (m == Method::kNmf || m == Method::kNmfUnsupervised) {
      model = TrainRoles({refs.heart, refs.lung, refs.noise}, config);
      break;
    }
  }

  std::vector<BenchRow> rows;
  for (Method m : opts.methods) {
    std::vector<double> ms;
    for (int r = 0; r < opts.runs; ++r) {
      const auto start = std::chrono::steady_clock::now();
      SeparateWith(m, mixture, model ? &*model : nullptr, &refs, config);
      ms.push_back(std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count());
    }
    rows.push_back({ToString(m), Median(ms), Percentile90(ms), opts.runs});
  }
  if (!opts.out.empty()) {
    std::string csv = "method,median_ms,p90_ms,n_runs\n";
    for (const BenchRow& r : rows) {
      csv += r.method + "," + Format(r.median_ms) + "," + Format(r.p90_ms) + "," +
             std::to_string(r.n_runs) + "\n";
    }
    WriteText(opts.out, csv);
  }
  return rows;
}

}  // namespace chestsep::cli

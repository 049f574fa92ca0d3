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
// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion 4   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chestsep/bss_eval/bss_eval.h"
#include "chestsep/cli/app.h"
#include "chestsep/cli/commands.h"
#include "chestsep/common/random.h"
#include "chestsep/dsp/stft.h"
#include "chestsep/factorization/nmf.h"
#include "chestsep/factorization/updates.h"
#include "chestsep/mixgen/mixgen.h"
#include "chestsep/nmcf/nmcf.h"
#include "chestsep/separation/separation.h"
#include "chestsep/synthdata/synthdata.h"
#include "mask_check.h"
#include "matched_nmf.h"
#include "oracles.h"
#include "test_util.h"

namespace chestsep {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

AudioClip Synth(SynthKind kind, double seconds, std::uint64_t seed) {
  SynthSpec s;
  s.kind = kind;
  s.duration_s = seconds;
  s.rng_seed = seed;
  return Generate(s);
}

// Counts increases beyond `before * 1e-9` along a trace.
struct TraceStats {
  long steps = 0;
  long increases = 0;
  double worst = 0.0;  // largest relative increase

  void Add(const std::vector<double>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
      ++steps;
      const double rel = (trace[i] - trace[i - 1]) / std::abs(trace[i - 1]);
      if (trace[i] > trace[i - 1] + 1e-9 * std::abs(trace[i - 1])) ++increases;
      worst = std::max(worst, rel);
    }
  }
};

// ---------------------------------------------------------------------------

Verdict MonotoneOptimisation() {
  const auto start = Clock::now();
  TraceStats nmf, nmcf;
  constexpr int kSweeps = 20;
  for (int beta = 0; beta <= 2; ++beta) {
    for (double mu : {0.0, 0.01, 0.1}) {
      for (int inst = 0; inst < 100; ++inst) {
        std::mt19937_64 gen(DeriveSeed(1000 * beta + static_cast<int>(mu * 100), inst));
        auto pick = [&](int lo, int hi) {
          return std::uniform_int_distribution<int>(lo, hi)(gen);
        };
        SolverConfig cfg;
        cfg.beta = static_cast<Beta>(beta);
        cfg.mu = mu;
        cfg.max_iter = kSweeps;
        cfg.rng_seed = gen();
        const int f = pick(2, 32);

        // Dictionary learning over two examples, then separation with an
        // extra unsupervised block.
        const int k = pick(1, 16);
        std::vector<Spectrogram> examples = {
            testing::MakeSpec(testing::RandomPositive(gen, f, pick(2, 32), 0.01, 1.0)),
            testing::MakeSpec(testing::RandomPositive(gen, f, pick(2, 32), 0.01, 1.0))};
        const TrainingResult trained = TrainDictionary(examples, k, cfg, Block::kHeart);
        nmf.Add(trained.cost_trace);
        const Spectrogram mix =
            testing::MakeSpec(testing::RandomPositive(gen, f, pick(2, 32), 0.01, 1.0));
        nmf.Add(NmfSeparate(mix, trained.model, cfg, true, pick(1, 16)).cost_trace);

        BlockSizes sizes{pick(1, 8), pick(1, 8), pick(1, 8), pick(0, 8)};
        ReferenceSet refs;
        for (auto* list : {&refs.heart, &refs.lung, &refs.noise}) {
          const int count = pick(1, 3);
          for (int i = 0; i < count; ++i) {
            list->push_back(
                testing::MakeSpec(testing::RandomPositive(gen, f, pick(2, 32), 0.01, 1.0)));
          }
        }
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const CofactorWeights w{unit(gen), unit(gen), unit(gen)};
        nmcf.Add(NmcfSeparate(mix, refs, w, sizes, cfg).objective_trace);
      }
    }
  }
  const double secs = Seconds(start);
  Verdict v;
  v.pass = nmf.increases == 0 && nmcf.increases == 0 && secs < 60.0;
  v.detail = Fmt(
      "NMF cost rose in %ld/%ld sweeps (worst %+.2e); co-factorisation objective rose "
      "in %ld/%ld sweeps (worst %+.2e); %.1f s",
      nmf.increases, nmf.steps, nmf.worst, nmcf.increases, nmcf.steps, nmcf.worst, secs);
  return v;
}

// Twenty planted instances per divergence; each must reach its bound.
Verdict PlantedRecovery() {
  const auto start = Clock::now();
  constexpr int kInstances = 20;
  const double limit[3] = {1e-4, 1e-4, 1e-6};
  double worst[3] = {0, 0, 0};
  int missed[3] = {0, 0, 0};
  for (int beta = 0; beta <= 2; ++beta) {
    for (int inst = 0; inst < kInstances; ++inst) {
      std::mt19937_64 gen(DeriveSeed(77 + beta, inst));
      const Eigen::MatrixXd w0 = NormalizeColumns(testing::RandomPositive(gen, 16, 2));
      const Eigen::MatrixXd v = w0 * testing::RandomPositive(gen, 2, 64);
      SolverConfig cfg;
      cfg.beta = static_cast<Beta>(beta);
      cfg.mu = 0.0;
      DictionaryTrainer trainer({v}, 2, cfg, Rng(DeriveSeed(5 + beta, inst)));
      for (int it = 0; it < 500; ++it) trainer.Step();
      const double fit = trainer.Cost();
      worst[beta] = std::max(worst[beta], fit);
      if (!(fit <= limit[beta])) ++missed[beta];
    }
  }
  const double secs = Seconds(start);
  return {missed[0] + missed[1] + missed[2] == 0 && secs < 5.0,
          Fmt("%d planted instances each; after 500 sweeps IS worst %.2e (%d over), KL worst "
              "%.2e (%d over), Euclidean worst %.2e (%d over); %.2f s",
              kInstances, worst[0], missed[0], worst[1], missed[1], worst[2], missed[2], secs)};
}

Verdict MaskIdentity() {
  const auto start = Clock::now();
  SolverConfig cfg;
  cfg.max_iter = 40;
  ReferenceSet refs;
  for (int i = 0; i < 3; ++i) {
    refs.heart.push_back(Stft(Synth(SynthKind::kHeart, 2.0, 10 + i), {}));
    refs.lung.push_back(Stft(Synth(SynthKind::kLung, 2.0, 20 + i), {}));
    refs.noise.push_back(Stft(Synth(SynthKind::kCpapBubble, 2.0, 30 + i), {}));
  }
  std::vector<FactorModel> parts;
  for (Block b : kSupervisedBlocks) {
    parts.push_back(TrainDictionary(refs[b], 20, cfg, b).model);
  }
  const FactorModel model = CombineModels(parts);

  std::vector<AudioClip> mixtures;
  for (int i = 0; i < 6; ++i) {
    mixtures.push_back(MixInstantaneous(Synth(SynthKind::kHeart, 2.0, 100 + i),
                                        Synth(SynthKind::kLung, 2.0, 200 + i),
                                        Synth(SynthKind::kCpapBubble, 2.0, 300 + i),
                                        kHeartToLungGridDb[i], kChestToNoiseGridDb[i % 5])
                           .mixture);
  }
  mixtures.push_back(AudioClip::Silence(8000, 4000));
  mixtures.push_back(Synth(SynthKind::kHeart, 2.0, 400));

  int runs = 0;
  double partition = 0.0, conservation = 0.0;
  bool bounded = true;
  for (const AudioClip& m : mixtures) {
    const Spectrogram spec = Stft(m, {});
    const SeparationResult results[] = {
        SeparateNmf(m, model, {}, cfg, false), SeparateNmf(m, model, {}, cfg, true),
        SeparateNmcf(m, refs, {}, kDefaultNmcfSizes, {}, cfg)};
    for (const SeparationResult& r : results) {
      const auto err = testing::CheckMaskIdentity(spec, r.masks);
      partition = std::max(partition, err.partition);
      conservation = std::max(conservation, err.conservation);
      bounded = bounded && (err.active == 0 || (err.min_entry >= 0.0 && err.max_entry <= 1.0 + 1e-12));
      ++runs;
    }
  }
  return {partition <= 1e-6 && conservation <= 1e-6 && bounded,
          Fmt("%d runs: max partition error %.2e, max conservation error %.2e; %.1f s", runs,
              partition, conservation, Seconds(start))};
}

Verdict StftRoundTrip() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(DeriveSeed(4, i));
    const double scale = std::pow(10.0, rng.Uniform(-3, 3));
    std::vector<double> x(40000);
    for (double& s : x) s = scale * rng.Normal();
    const AudioClip clip(std::move(x), 4000);
    const AudioClip back = Istft(Stft(clip, {}));
    double num = 0.0;
    for (std::size_t n = 0; n < clip.size(); ++n) num += std::pow(back[n] - clip[n], 2);
    worst = std::max(worst, std::sqrt(num / clip.Energy()));
  }
  return {worst < 1e-6, Fmt("50 clips of 10 s: worst relative L2 error %.2e; %.1f s", worst,
                            Seconds(start))};
}

Verdict MetricOracles() {
  const auto start = Clock::now();
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  auto gaussian = [&](std::size_t n) {
    std::vector<double> x(n);
    for (double& v : x) v = normal(gen);
    return x;
  };
  auto clip = [](std::vector<double> x) { return AudioClip(std::move(x), 4000); };

  double si_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> ref = gaussian(2000);
    const std::vector<double> noise = gaussian(2000);
    // The oracle's step is absolute, so scales near zero would measure the
    // oracle's own resolution rather than the metric.
    std::uniform_real_distribution<double> a(0.5, 3.0), b(0.05, 2.0);
    std::bernoulli_distribution sign(0.5);
    const double alpha = (sign(gen) ? -1.0 : 1.0) * a(gen), beta = b(gen);
    std::vector<double> est(ref.size());
    for (std::size_t n = 0; n < est.size(); ++n) est[n] = alpha * ref[n] + beta * noise[n];
    const double got = SiSdr(clip(est), clip(ref));
    const double want = testing::SiSdrGridSearch(est, ref, -5.0, 5.0);
    si_worst = std::max(si_worst, std::abs(got - want));
  }

  double ratio_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    // Orthonormal target, interferer, noise and artifact directions.
    std::vector<std::vector<double>> q;
    for (int c = 0; c < 4; ++c) {
      std::vector<double> x = gaussian(1000);
      for (const auto& p : q) {
        const double d = testing::Dot(x, p);
        for (std::size_t n = 0; n < x.size(); ++n) x[n] -= d * p[n];
      }
      const double norm = std::sqrt(testing::Dot(x, x));
      for (double& v : x) v /= norm;
      q.push_back(std::move(x));
    }
    std::uniform_real_distribution<double> coef(0.1, 3.0);
    const double c[4] = {coef(gen), coef(gen), coef(gen), coef(gen)};
    std::vector<double> est(1000, 0.0);
    for (int j = 0; j < 4; ++j) {
      for (std::size_t n = 0; n < est.size(); ++n) est[n] += c[j] * q[j][n];
    }
    const AudioClip others[] = {clip(q[1])};
    const Decomposition d = Decompose(clip(est), clip(q[0]), others, clip(q[2]), 1);
    const double sdr = 10 * std::log10(c[0] * c[0] / (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]));
    const double sir = 10 * std::log10(c[0] * c[0] / (c[1] * c[1]));
    ratio_worst = std::max({ratio_worst, std::abs(Sdr(d) - sdr), std::abs(Sir(d) - sir)});
  }

  int nesting_failures = 0;
  for (int i = 0; i < 50; ++i) {
    const MixtureInstance inst =
        MixConvolutive(clip(gaussian(1500)), clip(gaussian(1500)), clip(gaussian(1500)),
                       kHeartToLungGridDb[i % 7], kChestToNoiseGridDb[i % 5], 1000 + i);
    const AudioClip others[] = {inst.scaled_lung};
    const double one = Sdr(Decompose(inst.mixture, inst.scaled_heart, others,
                                     inst.scaled_noise, 1));
    const double many = Sdr(Decompose(inst.mixture, inst.scaled_heart, others,
                                      inst.scaled_noise, 32));
    if (many < one - 1e-9) ++nesting_failures;
  }
  return {si_worst <= 0.01 && ratio_worst <= 0.1 && nesting_failures == 0,
          Fmt("SI-SDR vs grid search worst %.2e dB; SDR/SIR vs closed form worst %.2e dB; "
              "nesting violations %d/50; %.1f s",
              si_worst, ratio_worst, nesting_failures, Seconds(start))};
}

// Five triples of 4 s clips, three references per class, noise classes
// cycling through cry and both CPAP sounds.
Verdict EndToEndOrdering() {
  const auto start = Clock::now();
  constexpr double kSeconds = 4.0;
  constexpr int kRefs = 3;
  constexpr int kFilterLen = 32;
  const SynthKind noise_kinds[] = {SynthKind::kCry, SynthKind::kCpapBubble,
                                   SynthKind::kCpapVentilator};
  SolverConfig cfg;

  ReferenceSet base;
  std::map<SynthKind, std::vector<Spectrogram>> noise_refs;
  for (int i = 0; i < kRefs; ++i) {
    base.heart.push_back(Stft(Synth(SynthKind::kHeart, kSeconds, 5000 + i), {}));
    base.lung.push_back(Stft(Synth(SynthKind::kLung, kSeconds, 5100 + i), {}));
    for (SynthKind k : noise_kinds) {
      noise_refs[k].push_back(
          Stft(Synth(k, kSeconds, 5200 + 10 * static_cast<int>(k) + i), {}));
    }
  }
  const FactorModel heart = TrainDictionary(base.heart, 20, cfg, Block::kHeart).model;
  const FactorModel lung = TrainDictionary(base.lung, 20, cfg, Block::kLung).model;
  std::map<SynthKind, FactorModel> models;
  for (SynthKind k : noise_kinds) {
    const FactorModel parts[] = {heart, lung,
                                 TrainDictionary(noise_refs[k], 20, cfg, Block::kNoise).model};
    models[k] = CombineModels(parts);
  }

  std::vector<ComponentTriple> triples;
  for (int t = 0; t < 5; ++t) {
    const SynthKind k = noise_kinds[t % 3];
    triples.push_back({Synth(SynthKind::kHeart, kSeconds, 6000 + t),
                       Synth(SynthKind::kLung, kSeconds, 6100 + t),
                       Synth(k, kSeconds, 6200 + t), "", "", ToString(k)});
  }
  GridOptions opts;
  opts.modes = {MixMode::kInstantaneous};
  opts.seed = 6;
  const std::vector<MixtureInstance> grid = BuildGrid(triples, opts);

  std::map<std::string, std::vector<double>> heart_gain, lung_gain;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const MixtureInstance& inst = grid[i];
    const SynthKind k = noise_kinds[(i / 35) % 3];
    ReferenceSet refs = base;
    refs.noise = noise_refs[k];
    const std::pair<const char*, SeparationResult> runs[] = {
        {"nmf", SeparateNmf(inst.mixture, models[k], {}, cfg, false)},
        {"nmcf", SeparateNmcf(inst.mixture, refs, {}, kDefaultNmcfSizes, {}, cfg)},
        {"bandpass", SeparateBandpass(inst.mixture)}};
    for (const auto& [name, result] : runs) {
      SeparationResult scored = result;
      scored.noise.reset();
      for (const SourceScores& s : ScoreInstance(scored, inst, kFilterLen)) {
        const double gain = s.estimate.sdr_db - s.baseline.sdr_db;
        (s.source == "heart" ? heart_gain : lung_gain)[name].push_back(gain);
      }
    }
  }
  std::map<std::string, double> mh, ml;
  for (const char* m : {"nmf", "nmcf", "bandpass"}) {
    mh[m] = Median(heart_gain[m]);
    ml[m] = Median(lung_gain[m]);
  }
  const double secs = Seconds(start);
  const bool positive = mh["nmf"] > 0 && mh["nmcf"] > 0 && ml["nmf"] > 0 && ml["nmcf"] > 0;
  const bool beats = mh["nmf"] >= mh["bandpass"] && mh["nmcf"] >= mh["bandpass"];
  return {positive && beats && secs < 600.0,
          Fmt("%zu instances, median SDR gain heart/lung dB: NMF %.2f/%.2f, co-factorisation "
              "%.2f/%.2f, bandpass %.2f/%.2f; %.0f s",
              grid.size(), mh["nmf"], ml["nmf"], mh["nmcf"], ml["nmcf"], mh["bandpass"],
              ml["bandpass"], secs)};
}

Verdict ZeroWeightEquivalence() {
  const auto start = Clock::now();
  SolverConfig cfg;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    cfg.rng_seed = 900 + i;
    ReferenceSet refs;
    for (int r = 0; r < 2; ++r) {
      refs.heart.push_back(Stft(Synth(SynthKind::kHeart, 1.5, 7000 + 10 * i + r), {}));
      refs.lung.push_back(Stft(Synth(SynthKind::kLung, 1.5, 7100 + 10 * i + r), {}));
      refs.noise.push_back(Stft(Synth(SynthKind::kCry, 1.5, 7200 + 10 * i + r), {}));
    }
    const Spectrogram mix =
        Stft(MixInstantaneous(Synth(SynthKind::kHeart, 1.5, 7300 + i),
                              Synth(SynthKind::kLung, 1.5, 7400 + i),
                              Synth(SynthKind::kCry, 1.5, 7500 + i), 0.0, 0.0)
                 .mixture,
             {});
    const NmcfResult r = NmcfSeparate(mix, refs, {0, 0, 0}, kDefaultNmcfSizes, cfg);
    const SourceMasks a = ComputeMasks(r.model, r.activations, cfg.epsilon);
    const SourceMasks b = testing::MatchedScheduleNmfMasks(mix, refs, kDefaultNmcfSizes, cfg);
    worst = std::max(worst, testing::MaskDistance(a, b));
  }
  return {worst <= 1e-5,
          Fmt("10 instances: worst mask Frobenius distance %.2e; %.1f s", worst, Seconds(start))};
}

Verdict TimingEnvelope() {
  const auto start = Clock::now();
  cli::RunConfig config;
  cli::BenchOptions fast;
  fast.methods = {cli::Method::kBandpass, cli::Method::kNmf};
  fast.runs = 21;
  cli::BenchOptions slow;
  slow.methods = {cli::Method::kNmcf};
  slow.runs = 3;
  std::vector<cli::BenchRow> rows = cli::RunBench(fast, config);
  const std::vector<cli::BenchRow> nmcf = cli::RunBench(slow, config);
  rows.insert(rows.end(), nmcf.begin(), nmcf.end());
  const double bp = rows[0].median_ms, nmf = rows[1].median_ms, co = rows[2].median_ms;
  return {nmf < 2000.0 && co < 120000.0 && bp < nmf && nmf < co,
          Fmt("10 s clip median ms: bandpass %.1f (21 runs), NMF %.1f (21 runs), "
              "co-factorisation %.1f (3 runs); %.0f s",
              bp, nmf, co, Seconds(start))};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int Cli(const fs::path& root, std::vector<std::string> args) {
  args.insert(args.begin(), "chestsep");
  for (std::string& a : args) {
    if (a.rfind("@/", 0) == 0) a = (root / a.substr(2)).string();
  }
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::Main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

bool Pipeline(const fs::path& root) {
  fs::remove_all(root);
  bool ok = true;
  auto run = [&](std::vector<std::string> args) { ok = ok && Cli(root, std::move(args)) == 0; };
  run({"synth", "--kind", "heart", "--count", "4", "--duration", "2", "--seed", "1", "-o", "@/c"});
  run({"synth", "--kind", "lung", "--count", "4", "--duration", "2", "--seed", "2", "-o", "@/c"});
  run({"synth", "--kind", "cry", "--count", "4", "--duration", "2", "--seed", "3", "-o", "@/c"});
  run({"mix", "--heart", "@/c/heart_000.wav", "--lung", "@/c/lung_000.wav", "--noise",
       "@/c/cry_000.wav", "--modes", "instantaneous", "--seed", "4", "-o", "@/mix"});
  run({"train", "--heart", "@/c/heart_001.wav", "@/c/heart_002.wav", "@/c/heart_003.wav",
       "--lung", "@/c/lung_001.wav", "@/c/lung_002.wav", "@/c/lung_003.wav", "--noise",
       "@/c/cry_001.wav", "@/c/cry_002.wav", "@/c/cry_003.wav", "-o", "@/model.bin"});
  run({"separate", "--method", "nmf", "--model", "@/model.bin", "--manifest",
       "@/mix/manifest.json", "-j", "2", "-o", "@/sep_nmf"});
  run({"separate", "--method", "bandpass", "--manifest", "@/mix/manifest.json", "-o",
       "@/sep_bp"});
  run({"separate", "--method", "nmcf", "--iterations", "30", "--heart-refs",
       "@/c/heart_001.wav", "@/c/heart_002.wav", "--lung-refs", "@/c/lung_001.wav",
       "@/c/lung_002.wav", "--noise-refs", "@/c/cry_001.wav", "@/c/cry_002.wav", "-o",
       "@/sep_nmcf", "--", "@/mix/t00_inst_hl+00_cn+00.wav", "@/mix/t00_inst_hl+20_cn-10.wav"});
  for (const char* m : {"nmf", "bp"}) {
    run({"eval", "--manifest", "@/mix/manifest.json", "--separated",
         std::string("@/sep_") + m, "--method", m, "--filter-len", "32", "-j", "2", "-o",
         std::string("@/scores_") + m + ".csv"});
  }
  return ok;
}

Verdict Determinism() {
  const auto start = Clock::now();
  const fs::path base = fs::temp_directory_path() / "chestsep_acceptance_determinism";
  const fs::path a = base / "a", b = base / "b";
  if (!Pipeline(a) || !Pipeline(b)) return {false, "pipeline run failed"};
  int compared = 0, differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    const std::string ext = e.path().extension().string();
    if (ext != ".wav" && ext != ".csv" && ext != ".bin") continue;
    const fs::path other = b / fs::relative(e.path(), a);
    ++compared;
    if (!fs::exists(other) || Slurp(e.path()) != Slurp(other)) ++differing;
  }
  fs::remove_all(base);
  return {compared > 0 && differing == 0,
          Fmt("%d WAV/CSV/model artifacts compared across two runs, %d differ; %.1f s",
              compared, differing, Seconds(start))};
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> list = {
      {"monotone optimisation", MonotoneOptimisation},
      {"planted-factor recovery", PlantedRecovery},
      {"mask identity", MaskIdentity},
      {"STFT round trip", StftRoundTrip},
      {"metric oracles", MetricOracles},
      {"end-to-end separation ordering", EndToEndOrdering},
      {"zero-weight equivalence", ZeroWeightEquivalence},
      {"timing envelope", TimingEnvelope},
      {"determinism", Determinism},
  };
  return list;
}

}  // namespace
}  // namespace chestsep

int main(int argc, char** argv) {
  const auto& criteria = chestsep::Criteria();
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const int n = std::atoi(argv[++i]);
      if (n < 1 || n > static_cast<int>(criteria.size())) {
        std::cerr << "no criterion " << n << "\n";
        return 2;
      }
      selected.push_back(n);
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.push_back(n);
  }
  bool all = true;
  for (int n : selected) {
    const auto& c = criteria[n - 1];
    chestsep::Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << c.name
              << "): " << v.detail << std::endl;
  }
  return all ? 0 : 1;
}

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
#include "chestsep/mixgen/mixgen.h"

#include <cmath>
#include <cstdio>

#include "chestsep/common/errors.h"
#include "chestsep/common/random.h"

namespace chestsep {
namespace {

enum FirStream : std::uint64_t { kHeartFir = 11, kLungFir = 12, kNoiseFir = 13 };

double Gain(double db) { return std::pow(10.0, db / 20.0); }

AudioClip Scaled(const AudioClip& clip, double gain) {
  std::vector<double> out(clip.samples());
  for (double& s : out) s *= gain;
  return AudioClip(std::move(out), clip.sample_rate());
}

AudioClip Sum(const AudioClip& a, const AudioClip& b, const AudioClip& c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i] + c[i];
  return AudioClip(std::move(out), a.sample_rate());
}

void RequireInputs(const AudioClip& heart, const AudioClip& lung,
                   const std::optional<AudioClip>& noise,
                   std::optional<double> c2n_db) {
  RequireSameShape(heart, lung, "mixing heart and lung");
  if (noise) RequireSameShape(heart, *noise, "mixing chest and noise");
  if (noise.has_value() != c2n_db.has_value()) {
    throw InvalidInput("a noise clip and a chest-to-noise ratio go together");
  }
}

void CheckFir(const Fir& fir) {
  double norm = 0.0;
  for (double c : fir) {
    if (!std::isfinite(c)) throw InvalidInput("non-finite FIR coefficient");
    norm += c * c;
  }
  if (norm == 0.0) throw InvalidInput("FIR filter is all zeros");
}

std::string InstanceId(std::size_t triple, MixMode mode, double h2l,
                       std::optional<double> c2n) {
  char buf[64];
  if (c2n) {
    std::snprintf(buf, sizeof(buf), "t%02zu_%s_hl%+03d_cn%+03d", triple,
                  mode == MixMode::kInstantaneous ? "inst" : "conv",
                  static_cast<int>(h2l), static_cast<int>(*c2n));
  } else {
    std::snprintf(buf, sizeof(buf), "t%02zu_%s_hl%+03d", triple,
                  mode == MixMode::kInstantaneous ? "inst" : "conv",
                  static_cast<int>(h2l));
  }
  return buf;
}

nlohmann::json FirJson(const Fir& fir) {
  return nlohmann::json::array({fir[0], fir[1], fir[2], fir[3]});
}

Fir FirFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kFirLength) {
    throw InvalidInput("FIR entries must be arrays of 4 numbers");
  }
  Fir fir;
  for (int i = 0; i < kFirLength; ++i) fir[i] = j.at(i).get<double>();
  return fir;
}

}  // namespace

std::string ToString(MixMode mode) {
  return mode == MixMode::kInstantaneous ? "instantaneous" : "convolutive";
}

MixMode MixModeFromString(const std::string& name) {
  if (name == "instantaneous") return MixMode::kInstantaneous;
  if (name == "convolutive") return MixMode::kConvolutive;
  throw InvalidInput("unknown mixing mode '" + name + "'");
}

AudioClip ScalePair(const AudioClip& a, const AudioClip& b, double factor_db) {
  RequireSameShape(a, b, "scale_pair");
  const double g = Gain(factor_db);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g * a[i] + b[i];
  return AudioClip(std::move(out), a.sample_rate());
}

Fir RandomFir(std::uint64_t seed, std::uint64_t stream) {
  Rng rng(DeriveSeed(seed, stream));
  Fir fir;
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : fir) {
      c = rng.Uniform(-1.0, 1.0);
      norm += c * c;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& c : fir) c /= norm;
  return fir;
}

AudioClip ApplyFir(const AudioClip& clip, const Fir& fir) {
  const auto& x = clip.samples();
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < fir.size() && k <= n; ++k) acc += fir[k] * x[n - k];
    y[n] = acc;
  }
  return AudioClip(std::move(y), clip.sample_rate());
}

MixtureInstance MixInstantaneous(const AudioClip& heart, const AudioClip& lung,
                                 const std::optional<AudioClip>& noise,
                                 double h2l_db, std::optional<double> c2n_db) {
  RequireInputs(heart, lung, noise, c2n_db);
  const double chest_gain = c2n_db ? Gain(*c2n_db) : 1.0;
  MixtureInstance inst;
  inst.scaled_heart = Scaled(heart, chest_gain * Gain(h2l_db));
  inst.scaled_lung = Scaled(lung, chest_gain);
  inst.scaled_noise =
      noise ? *noise : AudioClip::Silence(heart.size(), heart.sample_rate());
  inst.mixture = Sum(inst.scaled_heart, inst.scaled_lung, inst.scaled_noise);
  inst.recipe.heart_to_lung_db = h2l_db;
  inst.recipe.chest_to_noise_db = c2n_db;
  inst.recipe.mode = MixMode::kInstantaneous;
  return inst;
}

MixtureInstance MixConvolutive(const AudioClip& heart, const AudioClip& lung,
                               const std::optional<AudioClip>& noise,
                               double h2l_db, std::optional<double> c2n_db,
                               std::uint64_t seed,
                               const std::optional<FirSet>& firs) {
  MixtureInstance inst = MixInstantaneous(heart, lung, noise, h2l_db, c2n_db);
  FirSet set;
  if (firs) {
    set = *firs;
  } else {
    set.heart = RandomFir(seed, kHeartFir);
    set.lung = RandomFir(seed, kLungFir);
    set.noise = RandomFir(seed, kNoiseFir);
  }
  CheckFir(set.heart);
  CheckFir(set.lung);
  CheckFir(set.noise);
  inst.scaled_heart = ApplyFir(inst.scaled_heart, set.heart);
  inst.scaled_lung = ApplyFir(inst.scaled_lung, set.lung);
  inst.scaled_noise = ApplyFir(inst.scaled_noise, set.noise);
  inst.mixture = Sum(inst.scaled_heart, inst.scaled_lung, inst.scaled_noise);
  inst.recipe.mode = MixMode::kConvolutive;
  inst.recipe.firs = set;
  inst.recipe.rng_seed = seed;
  return inst;
}

MixtureInstance Remix(const MixtureRecipe& recipe, const AudioClip& heart,
                      const AudioClip& lung, const std::optional<AudioClip>& noise) {
  MixtureInstance inst =
      recipe.mode == MixMode::kInstantaneous
          ? MixInstantaneous(heart, lung, noise, recipe.heart_to_lung_db,
                             recipe.chest_to_noise_db)
          : MixConvolutive(heart, lung, noise, recipe.heart_to_lung_db,
                           recipe.chest_to_noise_db, recipe.rng_seed, recipe.firs);
  inst.recipe = recipe;
  return inst;
}

std::vector<MixtureInstance> BuildGrid(std::span<const ComponentTriple> triples,
                                       const GridOptions& options) {
  if (triples.empty()) throw InvalidInput("component pool is empty");
  if (options.modes.empty()) throw InvalidInput("no mixing modes selected");
  std::vector<std::optional<double>> c2n_grid;
  if (options.with_noise) {
    for (double db : kChestToNoiseGridDb) c2n_grid.emplace_back(db);
  } else {
    c2n_grid.emplace_back(std::nullopt);
  }

  std::vector<MixtureInstance> out;
  std::uint64_t index = 0;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const ComponentTriple& tri = triples[t];
    if (options.with_noise && !tri.noise) {
      throw InvalidInput("triple " + std::to_string(t) + " has no noise clip");
    }
    const AudioClip heart = tri.heart.Energy() > 0 ? NormalizeRms(tri.heart) : tri.heart;
    const AudioClip lung = tri.lung.Energy() > 0 ? NormalizeRms(tri.lung) : tri.lung;
    std::optional<AudioClip> noise;
    if (options.with_noise) {
      noise = tri.noise->Energy() > 0 ? NormalizeRms(*tri.noise) : *tri.noise;
    }
    for (MixMode mode : options.modes) {
      for (double h2l : kHeartToLungGridDb) {
        for (const auto& c2n : c2n_grid) {
          const std::uint64_t seed = DeriveSeed(options.seed, index++);
          MixtureInstance inst =
              mode == MixMode::kInstantaneous
                  ? MixInstantaneous(heart, lung, noise, h2l, c2n)
                  : MixConvolutive(heart, lung, noise, h2l, c2n, seed);
          inst.recipe.rng_seed = seed;
          inst.recipe.heart_id = tri.heart_id;
          inst.recipe.lung_id = tri.lung_id;
          inst.recipe.noise_id = options.with_noise ? tri.noise_id : "";
          inst.id = InstanceId(t, mode, h2l, c2n);
          out.push_back(std::move(inst));
        }
      }
    }
  }
  return out;
}

nlohmann::json RecipeToJson(const MixtureRecipe& recipe) {
  nlohmann::json j = {
      {"heart_to_lung_db", recipe.heart_to_lung_db},
      {"chest_to_noise_db", recipe.chest_to_noise_db
                                ? nlohmann::json(*recipe.chest_to_noise_db)
                                : nlohmann::json(nullptr)},
      {"mode", ToString(recipe.mode)},
      {"rng_seed", recipe.rng_seed},
      {"heart_id", recipe.heart_id},
      {"lung_id", recipe.lung_id},
      {"noise_id", recipe.noise_id},
  };
  if (recipe.mode == MixMode::kConvolutive) {
    j["fir_normalization"] = "unit_l2";
    j["fir_heart"] = FirJson(recipe.firs.heart);
    j["fir_lung"] = FirJson(recipe.firs.lung);
    j["fir_noise"] = FirJson(recipe.firs.noise);
  }
  return j;
}

MixtureRecipe RecipeFromJson(const nlohmann::json& j) {
  try {
    MixtureRecipe r;
    r.heart_to_lung_db = j.at("heart_to_lung_db").get<double>();
    if (j.contains("chest_to_noise_db") && !j.at("chest_to_noise_db").is_null()) {
      r.chest_to_noise_db = j.at("chest_to_noise_db").get<double>();
    }
    r.mode = MixModeFromString(j.at("mode").get<std::string>());
    r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    r.heart_id = j.value("heart_id", "");
    r.lung_id = j.value("lung_id", "");
    r.noise_id = j.value("noise_id", "");
    if (r.mode == MixMode::kConvolutive) {
      r.firs.heart = FirFromJson(j.at("fir_heart"));
      r.firs.lung = FirFromJson(j.at("fir_lung"));
      r.firs.noise = FirFromJson(j.at("fir_noise"));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed mixture recipe: ") + e.what());
  }
}

}  // namespace chestsep

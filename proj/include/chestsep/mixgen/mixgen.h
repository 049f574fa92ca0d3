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
#ifndef CHESTSEP_MIXGEN_MIXGEN_H_
#define CHESTSEP_MIXGEN_MIXGEN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "chestsep/dsp/audio_clip.h"

namespace chestsep {

enum class MixMode { kInstantaneous, kConvolutive };

std::string ToString(MixMode mode);
MixMode MixModeFromString(const std::string& name);

inline constexpr std::array<double, 7> kHeartToLungGridDb = {-10, -5, 0, 5,
                                                             10,  15, 20};
inline constexpr std::array<double, 5> kChestToNoiseGridDb = {-10, -5, 0, 5, 10};
inline constexpr int kFirLength = 4;

using Fir = std::array<double, kFirLength>;

struct FirSet {
  Fir heart{1, 0, 0, 0};
  Fir lung{1, 0, 0, 0};
  Fir noise{1, 0, 0, 0};
};

struct MixtureRecipe {
  double heart_to_lung_db = 0.0;
  std::optional<double> chest_to_noise_db;  // absent for heart-lung mixtures
  MixMode mode = MixMode::kInstantaneous;
  FirSet firs;  // identity taps in instantaneous mode
  std::uint64_t rng_seed = 0;
  std::string heart_id;
  std::string lung_id;
  std::string noise_id;
};

struct MixtureInstance {
  std::string id;
  AudioClip mixture;
  AudioClip scaled_heart;
  AudioClip scaled_lung;
  AudioClip scaled_noise;  // silence when the recipe has no noise
  MixtureRecipe recipe;
};

// 10^(factor_db / 20) * a + b.
AudioClip ScalePair(const AudioClip& a, const AudioClip& b, double factor_db);

// Four uniform(-1, 1) taps scaled to unit Euclidean norm.
Fir RandomFir(std::uint64_t seed, std::uint64_t stream);
// Same-length causal convolution (the filter's tail is discarded).
AudioClip ApplyFir(const AudioClip& clip, const Fir& fir);

// chest = 10^(h2l/20) heart + lung, mixture = 10^(c2n/20) chest + noise.
// The stored components carry their final gains and the mixture is their
// sample-wise sum. Without noise the mixture is the chest signal itself.
MixtureInstance MixInstantaneous(const AudioClip& heart, const AudioClip& lung,
                                 const std::optional<AudioClip>& noise,
                                 double h2l_db, std::optional<double> c2n_db);

// As MixInstantaneous, then each component is filtered by its own FIR before
// summation. FIRs are drawn from the seed unless firs overrides them.
MixtureInstance MixConvolutive(const AudioClip& heart, const AudioClip& lung,
                               const std::optional<AudioClip>& noise,
                               double h2l_db, std::optional<double> c2n_db,
                               std::uint64_t seed,
                               const std::optional<FirSet>& firs = std::nullopt);

// Rebuilds an instance from its recipe and the (already normalised) clips.
MixtureInstance Remix(const MixtureRecipe& recipe, const AudioClip& heart,
                      const AudioClip& lung, const std::optional<AudioClip>& noise);

struct ComponentTriple {
  AudioClip heart;
  AudioClip lung;
  std::optional<AudioClip> noise;
  std::string heart_id;
  std::string lung_id;
  std::string noise_id;
};

struct GridOptions {
  std::vector<MixMode> modes = {MixMode::kInstantaneous, MixMode::kConvolutive};
  bool with_noise = true;
  std::uint64_t seed = 0;
};

// Components are RMS-normalised (zero-energy clips are left alone), then the
// full dB grid is enumerated per triple and mode, in that nesting order.
// Instance i uses seed DeriveSeed(options.seed, i).
std::vector<MixtureInstance> BuildGrid(std::span<const ComponentTriple> triples,
                                       const GridOptions& options);

nlohmann::json RecipeToJson(const MixtureRecipe& recipe);
MixtureRecipe RecipeFromJson(const nlohmann::json& j);

}  // namespace chestsep

#endif  // CHESTSEP_MIXGEN_MIXGEN_H_

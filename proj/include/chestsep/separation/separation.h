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
#ifndef CHESTSEP_SEPARATION_SEPARATION_H_
#define CHESTSEP_SEPARATION_SEPARATION_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chestsep/dsp/audio_clip.h"
#include "chestsep/dsp/stft.h"
#include "chestsep/factorization/model.h"
#include "chestsep/nmcf/nmcf.h"

namespace chestsep {

// Ratio masks, one per non-empty model block.
struct SourceMasks {
  std::optional<Eigen::MatrixXd> heart;
  std::optional<Eigen::MatrixXd> lung;
  std::optional<Eigen::MatrixXd> noise;
  std::optional<Eigen::MatrixXd> unsupervised;
  Eigen::MatrixXd reconstruction;  // W_hat H, the shared denominator

  std::optional<Eigen::MatrixXd>& operator[](Block b);
  const std::optional<Eigen::MatrixXd>& operator[](Block b) const;
};

struct SeparationDiagnostics {
  std::string method;
  std::vector<double> cost_trace;
  int iterations = 0;
  double wall_ms = 0.0;
};

struct SeparationResult {
  AudioClip heart;
  AudioClip lung;
  std::optional<AudioClip> noise;
  std::optional<AudioClip> residual;  // unsupervised block
  SourceMasks masks;                  // empty for the bandpass method
  SeparationDiagnostics diagnostics;
};

// mask_b = W_hat_b H_b / max(W_hat H, epsilon), W_hat column-normalised.
SourceMasks ComputeMasks(const FactorModel& model, const Activations& acts,
                         double epsilon = 1e-12);

// mask * |mixture| for every present mask. Throws InvalidInput on a shape
// mismatch.
std::vector<std::pair<Block, Eigen::MatrixXd>> MaskedMagnitudes(
    const Spectrogram& mixture, const SourceMasks& masks);

// Masked magnitudes resynthesised with the mixture phase. Sources without a
// mask come back as silence (heart, lung) or absent (noise, residual).
SeparationResult Reconstruct(const Spectrogram& mixture, const SourceMasks& masks);

// The model's fingerprint must match stft and the clip's rate (ConfigError).
SeparationResult SeparateNmf(const AudioClip& mixture, const FactorModel& model,
                             const StftConfig& stft, const SolverConfig& cfg,
                             bool with_unsupervised,
                             int unsupervised_bases = kDefaultUnsupervisedBases);

SeparationResult SeparateNmcf(const AudioClip& mixture, const ReferenceSet& refs,
                              const CofactorWeights& weights,
                              const BlockSizes& sizes, const StftConfig& stft,
                              const SolverConfig& cfg);

inline constexpr double kHeartBandLowHz = 50.0;
inline constexpr double kHeartBandHighHz = 250.0;
inline constexpr double kLungBandLowHz = 200.0;
inline constexpr double kLungBandHighHz = 1000.0;

// Zero-phase 4th-order Butterworth bandpasses. Requires a rate above 2000 Hz.
SeparationResult SeparateBandpass(const AudioClip& mixture);

}  // namespace chestsep

#endif  // CHESTSEP_SEPARATION_SEPARATION_H_

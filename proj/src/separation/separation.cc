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
#include "chestsep/separation/separation.h"

#include <chrono>

#include "chestsep/common/errors.h"
#include "chestsep/dsp/butterworth.h"
#include "chestsep/factorization/nmf.h"

namespace chestsep {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void RequireStft(const FactorModel& model, const StftConfig& stft,
                 const AudioClip& clip) {
  const ModelFingerprint wanted{stft, clip.sample_rate()};
  if (!(model.fingerprint == wanted)) {
    throw ConfigError("model was trained under " + Describe(model.fingerprint) +
                      " but separation uses " + Describe(wanted));
  }
}

}  // namespace

std::optional<Eigen::MatrixXd>& SourceMasks::operator[](Block b) {
  switch (b) {
    case Block::kHeart:
      return heart;
    case Block::kLung:
      return lung;
    case Block::kNoise:
      return noise;
    case Block::kUnsupervised:
      break;
  }
  return unsupervised;
}

const std::optional<Eigen::MatrixXd>& SourceMasks::operator[](Block b) const {
  return const_cast<SourceMasks&>(*this)[b];
}

SourceMasks ComputeMasks(const FactorModel& model, const Activations& acts,
                         double epsilon) {
  if (acts.coeffs.rows() != model.columns() || !(acts.blocks == model.blocks)) {
    throw InvalidInput("activations are not paired with the model's blocks");
  }
  const Eigen::MatrixXd w_hat = NormalizeColumns(model.basis);
  SourceMasks masks;
  masks.reconstruction = w_hat * acts.coeffs;
  const Eigen::ArrayXXd denom = masks.reconstruction.array().max(epsilon);
  for (Block b : kAllBlocks) {
    const int count = model.blocks[b];
    if (count == 0) continue;
    const int begin = model.blocks.offset(b);
    masks[b] = ((w_hat.middleCols(begin, count) *
                 acts.coeffs.middleRows(begin, count)).array() / denom)
                   .matrix();
  }
  return masks;
}

std::vector<std::pair<Block, Eigen::MatrixXd>> MaskedMagnitudes(
    const Spectrogram& mixture, const SourceMasks& masks) {
  std::vector<std::pair<Block, Eigen::MatrixXd>> out;
  for (Block b : kAllBlocks) {
    const auto& mask = masks[b];
    if (!mask) continue;
    if (mask->rows() != mixture.bins() || mask->cols() != mixture.frames()) {
      throw InvalidInput("mask shape does not match the mixture spectrogram");
    }
    out.emplace_back(b, mask->cwiseProduct(mixture.magnitude));
  }
  return out;
}

SeparationResult Reconstruct(const Spectrogram& mixture, const SourceMasks& masks) {
  SeparationResult result;
  const auto silence = AudioClip::Silence(mixture.original_length,
                                          mixture.sample_rate);
  result.heart = silence;
  result.lung = silence;
  for (auto& [block, magnitude] : MaskedMagnitudes(mixture, masks)) {
    AudioClip clip = Istft(magnitude, mixture);
    switch (block) {
      case Block::kHeart:
        result.heart = std::move(clip);
        break;
      case Block::kLung:
        result.lung = std::move(clip);
        break;
      case Block::kNoise:
        result.noise = std::move(clip);
        break;
      case Block::kUnsupervised:
        result.residual = std::move(clip);
        break;
    }
  }
  result.masks = masks;
  return result;
}

SeparationResult SeparateNmf(const AudioClip& mixture, const FactorModel& model,
                             const StftConfig& stft, const SolverConfig& cfg,
                             bool with_unsupervised, int unsupervised_bases) {
  const auto start = Clock::now();
  RequireStft(model, stft, mixture);
  const Spectrogram spec = Stft(mixture, stft);
  NmfResult nmf = NmfSeparate(spec, model, cfg, with_unsupervised,
                              unsupervised_bases);
  SeparationResult result =
      Reconstruct(spec, ComputeMasks(nmf.model, nmf.activations, cfg.epsilon));
  result.diagnostics.method = with_unsupervised ? "nmf+unsupervised" : "nmf";
  result.diagnostics.cost_trace = std::move(nmf.cost_trace);
  result.diagnostics.iterations = nmf.iterations;
  result.diagnostics.wall_ms = ElapsedMs(start);
  return result;
}

SeparationResult SeparateNmcf(const AudioClip& mixture, const ReferenceSet& refs,
                              const CofactorWeights& weights,
                              const BlockSizes& sizes, const StftConfig& stft,
                              const SolverConfig& cfg) {
  const auto start = Clock::now();
  const Spectrogram spec = Stft(mixture, stft);
  NmcfResult nmcf = NmcfSeparate(spec, refs, weights, sizes, cfg);
  SeparationResult result =
      Reconstruct(spec, ComputeMasks(nmcf.model, nmcf.activations, cfg.epsilon));
  result.diagnostics.method = "nmcf";
  result.diagnostics.cost_trace = std::move(nmcf.objective_trace);
  result.diagnostics.iterations = nmcf.iterations;
  result.diagnostics.wall_ms = ElapsedMs(start);
  return result;
}

SeparationResult SeparateBandpass(const AudioClip& mixture) {
  const auto start = Clock::now();
  if (mixture.sample_rate() <= 2 * kLungBandHighHz) {
    throw InvalidInput("bandpass separation needs a sample rate above 2000 Hz");
  }
  SeparationResult result;
  result.heart = ButterworthBandpass(mixture, kHeartBandLowHz, kHeartBandHighHz);
  result.lung = ButterworthBandpass(mixture, kLungBandLowHz, kLungBandHighHz);
  result.diagnostics.method = "bandpass";
  result.diagnostics.wall_ms = ElapsedMs(start);
  return result;
}

}  // namespace chestsep

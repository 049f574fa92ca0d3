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
#include "chestsep/factorization/model.h"

#include <cmath>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep {

std::string_view BlockName(Block block) {
  switch (block) {
    case Block::kHeart:
      return "heart";
    case Block::kLung:
      return "lung";
    case Block::kNoise:
      return "noise";
    case Block::kUnsupervised:
      return "unsupervised";
  }
  return "unknown";
}

Block BlockFromName(std::string_view name) {
  for (Block b : kAllBlocks) {
    if (BlockName(b) == name) return b;
  }
  throw InvalidInput("unknown block '" + std::string(name) + "'");
}

int BlockSizes::operator[](Block b) const {
  switch (b) {
    case Block::kHeart:
      return heart;
    case Block::kLung:
      return lung;
    case Block::kNoise:
      return noise;
    case Block::kUnsupervised:
      return unsupervised;
  }
  return 0;
}

int& BlockSizes::operator[](Block b) {
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

int BlockSizes::offset(Block b) const {
  int off = 0;
  for (Block other : kAllBlocks) {
    if (other == b) return off;
    off += (*this)[other];
  }
  return off;
}

void BlockSizes::Validate() const {
  for (Block b : kAllBlocks) {
    if ((*this)[b] < 0) {
      throw InvalidInput("negative size for block " + std::string(BlockName(b)));
    }
  }
  if (total() == 0) throw InvalidInput("all blocks are empty");
}

Beta BetaFromInt(int value) {
  switch (value) {
    case 0:
      return Beta::kItakuraSaito;
    case 1:
      return Beta::kKullbackLeibler;
    case 2:
      return Beta::kEuclidean;
    default:
      throw InvalidInput("beta must be 0, 1 or 2, got " + std::to_string(value));
  }
}

void SolverConfig::Validate() const {
  BetaFromInt(static_cast<int>(beta));
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidInput("mu must be >= 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be > 0");
  if (early_stop && !(early_stop_tolerance > 0.0)) {
    throw InvalidInput("early_stop_tolerance must be > 0");
  }
}

std::string Describe(const ModelFingerprint& fp) {
  return "stft(" + std::to_string(fp.stft.fft_size) + "/" +
         std::to_string(fp.stft.window_size) + "/" +
         std::to_string(fp.stft.hop_size) + ", " + ToString(fp.stft.window) +
         ") @ " + std::to_string(fp.sample_rate) + " Hz";
}

void RequireFingerprint(const ModelFingerprint& fp, const Spectrogram& spec) {
  const ModelFingerprint other = ModelFingerprint::Of(spec);
  if (!(fp == other)) {
    throw ConfigError("fingerprint mismatch: model " + Describe(fp) +
                      ", input " + Describe(other));
  }
}

void FactorModel::Validate() const {
  blocks.Validate();
  if (basis.cols() != blocks.total()) {
    throw InvalidInput("basis has " + std::to_string(basis.cols()) +
                       " columns but blocks sum to " +
                       std::to_string(blocks.total()));
  }
  if (basis.size() > 0 && !(basis.minCoeff() >= 0.0)) {
    throw InvalidInput("basis has negative or NaN entries");
  }
}

void NormalizeColumnsInPlace(Eigen::Ref<Eigen::MatrixXd> w) {
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double n = w.col(j).norm();
    if (n > 0.0) w.col(j) /= n;
  }
}

Eigen::MatrixXd NormalizeColumns(const Eigen::MatrixXd& w) {
  Eigen::MatrixXd out = w;
  NormalizeColumnsInPlace(out);
  return out;
}

}  // namespace chestsep

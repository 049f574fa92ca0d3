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
#ifndef CHESTSEP_FACTORIZATION_MODEL_H_
#define CHESTSEP_FACTORIZATION_MODEL_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "chestsep/dsp/stft.h"

namespace chestsep {

// Sources a basis column can belong to, in column order.
enum class Block { kHeart = 0, kLung = 1, kNoise = 2, kUnsupervised = 3 };

inline constexpr std::array<Block, 4> kAllBlocks = {
    Block::kHeart, Block::kLung, Block::kNoise, Block::kUnsupervised};
inline constexpr std::array<Block, 3> kSupervisedBlocks = {
    Block::kHeart, Block::kLung, Block::kNoise};

std::string_view BlockName(Block block);
Block BlockFromName(std::string_view name);

// Column counts of W = [W_heart, W_lung, W_noise, W_unsupervised].
struct BlockSizes {
  int heart = 0;
  int lung = 0;
  int noise = 0;
  int unsupervised = 0;

  int operator[](Block b) const;
  int& operator[](Block b);
  int total() const { return heart + lung + noise + unsupervised; }
  int offset(Block b) const;

  // Non-negative sizes, at least one non-empty block.
  void Validate() const;

  friend bool operator==(const BlockSizes&, const BlockSizes&) = default;
};

class BlockSet {
 public:
  constexpr BlockSet() = default;
  constexpr BlockSet(std::initializer_list<Block> blocks) {
    for (Block b : blocks) bits_ |= Bit(b);
  }
  static constexpr BlockSet All() {
    return {Block::kHeart, Block::kLung, Block::kNoise, Block::kUnsupervised};
  }

  constexpr bool contains(Block b) const { return (bits_ & Bit(b)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }

 private:
  static constexpr unsigned Bit(Block b) { return 1u << static_cast<unsigned>(b); }
  unsigned bits_ = 0;
};

// Only beta in {0, 1, 2} is supported.
enum class Beta : int { kItakuraSaito = 0, kKullbackLeibler = 1, kEuclidean = 2 };

Beta BetaFromInt(int value);
inline int ToInt(Beta beta) { return static_cast<int>(beta); }

struct SolverConfig {
  Beta beta = Beta::kKullbackLeibler;
  double mu = 0.1;          // L1 weight on activations
  int max_iter = 100;
  double epsilon = 1e-12;   // floor for reconstructions and divisors
  std::uint64_t rng_seed = 0;
  bool early_stop = false;  // stop once the relative cost change drops below
  double early_stop_tolerance = 1e-6;

  void Validate() const;
};

// STFT settings and sample rate a dictionary was learned under.
struct ModelFingerprint {
  StftConfig stft;
  int sample_rate = kDefaultSampleRate;

  static ModelFingerprint Of(const Spectrogram& spec) {
    return {spec.config, spec.sample_rate};
  }
  friend bool operator==(const ModelFingerprint&, const ModelFingerprint&) = default;
};

std::string Describe(const ModelFingerprint& fp);

// Throws ConfigError when the spectrogram was not produced under fp.
void RequireFingerprint(const ModelFingerprint& fp, const Spectrogram& spec);

// Non-negative basis matrix with block-partitioned columns.
struct FactorModel {
  Eigen::MatrixXd basis;  // F x K
  BlockSizes blocks;
  ModelFingerprint fingerprint;

  Eigen::Index bins() const { return basis.rows(); }
  Eigen::Index columns() const { return basis.cols(); }
  auto block(Block b) const {
    return basis.middleCols(blocks.offset(b), blocks[b]);
  }
  auto block(Block b) { return basis.middleCols(blocks.offset(b), blocks[b]); }

  // Column count agrees with the block sizes and all entries are >= 0.
  void Validate() const;
};

// Non-negative activations; rows follow the paired model's blocks.
struct Activations {
  Eigen::MatrixXd coeffs;  // K x T
  BlockSizes blocks;

  auto block(Block b) const {
    return coeffs.middleRows(blocks.offset(b), blocks[b]);
  }
  auto block(Block b) { return coeffs.middleRows(blocks.offset(b), blocks[b]); }
};

// Returns W with every non-zero column scaled to unit Euclidean norm.
Eigen::MatrixXd NormalizeColumns(const Eigen::MatrixXd& w);
void NormalizeColumnsInPlace(Eigen::Ref<Eigen::MatrixXd> w);

}  // namespace chestsep

#endif  // CHESTSEP_FACTORIZATION_MODEL_H_

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
#ifndef CHESTSEP_FACTORIZATION_NMF_H_
#define CHESTSEP_FACTORIZATION_NMF_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chestsep/common/random.h"
#include "chestsep/dsp/stft.h"
#include "chestsep/factorization/model.h"

namespace chestsep {

inline constexpr int kDefaultBasesPerSource = 20;
inline constexpr int kDefaultUnsupervisedBases = 10;
inline constexpr int kMaxExamplesPerSource = 10;

// Random streams. Every block's dictionary, the mixture activations, and the
// unsupervised basis draw from their own stream derived from the solver
// seed, so dictionary training and co-factorisation with the same seed start
// from identical values.
enum class Stream : std::uint64_t {
  kHeart = 1,
  kLung = 2,
  kNoise = 3,
  kUnsupervised = 4,
  kMixture = 5,
};

Stream StreamFor(Block block);
Rng MakeRng(std::uint64_t seed, Stream stream);

// Entries uniform on (0.1, 1.1); basis columns are then normalised.
Eigen::MatrixXd RandomBasis(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Eigen::MatrixXd RandomActivations(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Learns one dictionary from a set of example magnitude spectrograms. Each
// example keeps private activations; the basis update sums the examples'
// numerator and denominator terms with weight 1/e.
class DictionaryTrainer {
 public:
  // Basis drawn first, then each example's activations in order.
  DictionaryTrainer(std::vector<Eigen::MatrixXd> examples, int bases,
                    const SolverConfig& cfg, Rng rng);

  // One sweep: every example's activations, then the basis.
  void Step();

  // (1/e) sum_i [ D(V_i | W_hat H_i) + mu |H_i|_1 ].
  double Cost() const;

  const Eigen::MatrixXd& basis() const { return basis_; }
  const std::vector<Eigen::MatrixXd>& activations() const { return activations_; }
  const std::vector<Eigen::MatrixXd>& examples() const { return examples_; }

 private:
  std::vector<Eigen::MatrixXd> examples_;
  std::vector<Eigen::MatrixXd> activations_;
  Eigen::MatrixXd basis_;
  SolverConfig cfg_;
};

struct TrainingResult {
  FactorModel model;  // one non-empty block, `role`
  std::vector<double> cost_trace;  // initial cost, then one entry per sweep
};

// Throws InvalidInput for an empty example list, mismatched bin counts or
// bases < 1, and ConfigError when examples disagree on STFT settings.
TrainingResult TrainDictionary(std::span<const Spectrogram> examples, int bases,
                               const SolverConfig& cfg,
                               Block role = Block::kHeart);

// Column-concatenates single- or multi-block models trained under the same
// fingerprint; blocks must not overlap.
FactorModel CombineModels(std::span<const FactorModel> parts);

struct NmfResult {
  FactorModel model;        // input model, plus the unsupervised block if any
  Activations activations;
  std::vector<double> cost_trace;  // initial cost, then one entry per iteration
  int iterations = 0;
};

// Supervised separation: the model's existing blocks stay fixed and the
// mixture activations are optimised from a fresh random start. With
// with_unsupervised, `unsupervised_bases` random columns are appended and
// learned jointly (activations first, then those columns, each iteration).
NmfResult NmfSeparate(const Spectrogram& mixture, const FactorModel& model,
                      const SolverConfig& cfg, bool with_unsupervised,
                      int unsupervised_bases = kDefaultUnsupervisedBases);

}  // namespace chestsep

#endif  // CHESTSEP_FACTORIZATION_NMF_H_

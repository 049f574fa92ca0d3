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
#ifndef CHESTSEP_NMCF_NMCF_H_
#define CHESTSEP_NMCF_NMCF_H_

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "chestsep/dsp/stft.h"
#include "chestsep/factorization/model.h"
#include "chestsep/factorization/nmf.h"

namespace chestsep {

// Co-factorisation weight of each supervised block's mixture term.
struct CofactorWeights {
  double heart = 0.0;
  double lung = 0.0;
  double noise = 0.25;

  double operator[](Block b) const;
  // Each weight must lie in [0, 1].
  void Validate() const;
};

// Example spectrograms per supervised source.
struct ReferenceSet {
  std::vector<Spectrogram> heart;
  std::vector<Spectrogram> lung;
  std::vector<Spectrogram> noise;

  const std::vector<Spectrogram>& operator[](Block b) const;
};

inline constexpr BlockSizes kDefaultNmcfSizes = {
    kDefaultBasesPerSource, kDefaultBasesPerSource, kDefaultBasesPerSource,
    kDefaultUnsupervisedBases};

// Per-block state of the joint factorisation of a mixture with its
// reference examples. Exposes the individual update steps so callers can
// observe the cost each one descends.
class NmcfSolver {
 public:
  // Throws InvalidInput for an empty reference list on a non-empty
  // supervised block, more than max_examples examples, invalid weights or
  // mismatched bin counts; ConfigError when a reference disagrees with the
  // mixture's STFT settings. Initialisation draws each supervised block
  // (basis, then example activations) from that block's stream, then the
  // unsupervised basis, then the mixture activations.
  NmcfSolver(const Spectrogram& mixture, const ReferenceSet& refs,
             const CofactorWeights& weights, const BlockSizes& sizes,
             const SolverConfig& cfg, int max_examples = kMaxExamplesPerSource);

  void UpdateMixtureActivations();
  void UpdateExampleActivations(Block b);
  // Supervised block: lambda_b * mixture terms + (1/e_b) * sum of example
  // terms. Unsupervised block: mixture terms only.
  void UpdateBasis(Block b);
  // One sweep: mixture activations, every example's activations, then the
  // heart, lung, noise and unsupervised bases.
  void Sweep();

  // D(V_m | W_hat H_m) + mu |H_m|_1 over the full model.
  double MixtureCost() const;
  // (1/e_b) sum_i [ D(V_b^i | W_hat_b H_b^i) + mu |H_b^i|_1 ].
  double ExampleCost(Block b) const;
  // Cost a basis update of block b descends: lambda_b * MixtureCost() +
  // ExampleCost(b), or MixtureCost() for the unsupervised block.
  double BasisStepCost(Block b) const;
  double Objective() const;

  const FactorModel& model() const { return model_; }
  const Activations& activations() const { return activations_; }
  const std::vector<Eigen::MatrixXd>& example_activations(Block b) const {
    return example_h_[static_cast<int>(b)];
  }
  const std::vector<Eigen::MatrixXd>& examples(Block b) const {
    return examples_[static_cast<int>(b)];
  }
  const Eigen::MatrixXd& mixture() const { return mixture_; }
  const CofactorWeights& weights() const { return weights_; }
  const SolverConfig& config() const { return cfg_; }

 private:
  bool HasExamples(Block b) const;

  Eigen::MatrixXd mixture_;
  std::array<std::vector<Eigen::MatrixXd>, 3> examples_;
  std::array<std::vector<Eigen::MatrixXd>, 3> example_h_;
  FactorModel model_;  // basis kept column-normalised
  Activations activations_;
  CofactorWeights weights_;
  SolverConfig cfg_;
};

struct NmcfResult {
  FactorModel model;
  Activations activations;
  std::array<std::vector<Eigen::MatrixXd>, 3> example_activations;
  std::vector<double> objective_trace;  // initial value, then one per sweep
  int iterations = 0;
};

NmcfResult NmcfSeparate(const Spectrogram& mixture, const ReferenceSet& refs,
                        const CofactorWeights& weights,
                        const BlockSizes& sizes = kDefaultNmcfSizes,
                        const SolverConfig& cfg = {});

// Full objective:
//   sum_b lambda_b [D(V_m | W_hat_b H_mb) + mu |H_mb|_1]
//   + D(V_m | W_hat_un H_mun) + mu |H_mun|_1          (when b_un > 0)
//   + sum_b (1/e_b) sum_i [D(V_b^i | W_hat_b H_b^i) + mu |H_b^i|_1]
// Blocks of size zero contribute nothing. Throws InvalidInput on any shape
// mismatch.
double NmcfObjective(const Eigen::MatrixXd& mixture,
                     const std::array<std::vector<Eigen::MatrixXd>, 3>& examples,
                     const FactorModel& model, const Activations& activations,
                     const std::array<std::vector<Eigen::MatrixXd>, 3>& example_h,
                     const CofactorWeights& weights, const SolverConfig& cfg);

}  // namespace chestsep

#endif  // CHESTSEP_NMCF_NMCF_H_

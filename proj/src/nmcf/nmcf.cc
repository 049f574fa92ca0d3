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
#include "chestsep/nmcf/nmcf.h"

#include <cmath>
#include <string>

#include "chestsep/common/errors.h"
#include "chestsep/factorization/updates.h"

namespace chestsep {
namespace {

int Index(Block b) { return static_cast<int>(b); }

}  // namespace

double CofactorWeights::operator[](Block b) const {
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
  return 1.0;
}

void CofactorWeights::Validate() const {
  for (Block b : kSupervisedBlocks) {
    const double w = (*this)[b];
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidInput("co-factorisation weight for " +
                         std::string(BlockName(b)) + " must lie in [0, 1]");
    }
  }
}

const std::vector<Spectrogram>& ReferenceSet::operator[](Block b) const {
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
  throw InvalidInput("the unsupervised block has no reference examples");
}

NmcfSolver::NmcfSolver(const Spectrogram& mixture, const ReferenceSet& refs,
                       const CofactorWeights& weights, const BlockSizes& sizes,
                       const SolverConfig& cfg, int max_examples)
    : mixture_(mixture.magnitude), weights_(weights), cfg_(cfg) {
  cfg_.Validate();
  weights_.Validate();
  sizes.Validate();
  const ModelFingerprint fp = ModelFingerprint::Of(mixture);
  const Eigen::Index bins = mixture.bins();

  model_.fingerprint = fp;
  model_.blocks = sizes;
  model_.basis.resize(bins, sizes.total());
  for (Block b : kSupervisedBlocks) {
    if (sizes[b] == 0) continue;
    const auto& list = refs[b];
    if (list.empty()) {
      throw InvalidInput("no reference examples for the " +
                         std::string(BlockName(b)) + " block");
    }
    if (static_cast<int>(list.size()) > max_examples) {
      throw InvalidInput("too many " + std::string(BlockName(b)) +
                         " examples: " + std::to_string(list.size()) + " > " +
                         std::to_string(max_examples));
    }
    for (const Spectrogram& s : list) {
      RequireFingerprint(fp, s);
      if (s.bins() != bins) {
        throw InvalidInput("reference and mixture disagree on bin count");
      }
      examples_[Index(b)].push_back(s.magnitude);
    }
    Rng rng = MakeRng(cfg_.rng_seed, StreamFor(b));
    model_.block(b) = RandomBasis(rng, bins, sizes[b]);
    for (const auto& v : examples_[Index(b)]) {
      example_h_[Index(b)].push_back(RandomActivations(rng, sizes[b], v.cols()));
    }
  }
  if (sizes.unsupervised > 0) {
    Rng rng = MakeRng(cfg_.rng_seed, Stream::kUnsupervised);
    model_.block(Block::kUnsupervised) =
        RandomBasis(rng, bins, sizes.unsupervised);
  }
  Rng rng = MakeRng(cfg_.rng_seed, Stream::kMixture);
  activations_.blocks = sizes;
  activations_.coeffs = RandomActivations(rng, sizes.total(), mixture.frames());
}

bool NmcfSolver::HasExamples(Block b) const {
  return b != Block::kUnsupervised && model_.blocks[b] > 0;
}

void NmcfSolver::UpdateMixtureActivations() {
  UpdateActivationsInPlace(mixture_, model_.basis, activations_.coeffs, cfg_);
}

void NmcfSolver::UpdateExampleActivations(Block b) {
  if (!HasExamples(b)) return;
  const auto w = model_.block(b);
  for (std::size_t i = 0; i < examples_[Index(b)].size(); ++i) {
    UpdateActivationsInPlace(examples_[Index(b)][i], w, example_h_[Index(b)][i],
                             cfg_);
  }
}

void NmcfSolver::UpdateBasis(Block b) {
  const int count = model_.blocks[b];
  if (count == 0) return;
  const int begin = model_.blocks.offset(b);
  BasisUpdateTerms sum;
  const double lambda = weights_[b];
  if (lambda > 0.0) {
    sum.AddScaled(ComputeBasisUpdateTerms(mixture_, model_.basis,
                                          activations_.coeffs, begin, count, cfg_),
                  lambda);
  }
  if (HasExamples(b)) {
    const auto& list = examples_[Index(b)];
    const double weight = 1.0 / static_cast<double>(list.size());
    const Eigen::MatrixXd w = model_.block(b);
    for (std::size_t i = 0; i < list.size(); ++i) {
      sum.AddScaled(ComputeBasisUpdateTerms(list[i], w, example_h_[Index(b)][i],
                                            0, count, cfg_),
                    weight);
    }
  }
  if (sum.numerator.size() == 0) return;  // weight 0 and no examples
  ApplyBasisUpdate(model_.block(b), sum, cfg_.epsilon);
}

void NmcfSolver::Sweep() {
  UpdateMixtureActivations();
  for (Block b : kSupervisedBlocks) UpdateExampleActivations(b);
  for (Block b : kAllBlocks) UpdateBasis(b);
}

double NmcfSolver::MixtureCost() const {
  return FactorCost(mixture_, model_.basis, activations_.coeffs, cfg_);
}

double NmcfSolver::ExampleCost(Block b) const {
  if (!HasExamples(b)) return 0.0;
  const auto& list = examples_[Index(b)];
  const Eigen::MatrixXd w = model_.block(b);
  double total = 0.0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    total += FactorCost(list[i], w, example_h_[Index(b)][i], cfg_);
  }
  return total / static_cast<double>(list.size());
}

double NmcfSolver::BasisStepCost(Block b) const {
  if (b == Block::kUnsupervised) return MixtureCost();
  const double lambda = weights_[b];
  return (lambda > 0.0 ? lambda * MixtureCost() : 0.0) + ExampleCost(b);
}

double NmcfSolver::Objective() const {
  return NmcfObjective(mixture_, examples_, model_, activations_, example_h_,
                       weights_, cfg_);
}

NmcfResult NmcfSeparate(const Spectrogram& mixture, const ReferenceSet& refs,
                        const CofactorWeights& weights, const BlockSizes& sizes,
                        const SolverConfig& cfg) {
  NmcfSolver solver(mixture, refs, weights, sizes, cfg);
  NmcfResult result;
  result.objective_trace.push_back(solver.Objective());
  for (int it = 0; it < cfg.max_iter; ++it) {
    solver.Sweep();
    ++result.iterations;
    const double value = solver.Objective();
    if (!std::isfinite(value)) {
      throw NumericalError("co-factorisation produced a non-finite objective");
    }
    result.objective_trace.push_back(value);
    if (cfg.early_stop) {
      const double prev = result.objective_trace[result.objective_trace.size() - 2];
      const double scale = std::max(std::abs(prev), cfg.epsilon);
      if (std::abs(prev - value) / scale < cfg.early_stop_tolerance) break;
    }
  }
  result.model = solver.model();
  result.activations = solver.activations();
  for (Block b : kSupervisedBlocks) {
    result.example_activations[Index(b)] = solver.example_activations(b);
  }
  return result;
}

double NmcfObjective(const Eigen::MatrixXd& mixture,
                     const std::array<std::vector<Eigen::MatrixXd>, 3>& examples,
                     const FactorModel& model, const Activations& activations,
                     const std::array<std::vector<Eigen::MatrixXd>, 3>& example_h,
                     const CofactorWeights& weights, const SolverConfig& cfg) {
  if (activations.coeffs.rows() != model.columns() ||
      !(activations.blocks == model.blocks)) {
    throw InvalidInput("activations are not paired with the model's blocks");
  }
  double total = 0.0;
  for (Block b : kAllBlocks) {
    if (model.blocks[b] == 0) continue;
    const double lambda = weights[b];
    if (lambda > 0.0) {
      total += lambda * FactorCost(mixture, model.block(b), activations.block(b), cfg);
    }
    if (b == Block::kUnsupervised) continue;
    const auto& vs = examples[Index(b)];
    const auto& hs = example_h[Index(b)];
    if (vs.size() != hs.size()) {
      throw InvalidInput("example and activation counts differ for " +
                         std::string(BlockName(b)));
    }
    if (vs.empty()) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      sum += FactorCost(vs[i], model.block(b), hs[i], cfg);
    }
    total += sum / static_cast<double>(vs.size());
  }
  return total;
}

}  // namespace chestsep

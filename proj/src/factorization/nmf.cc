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
#include "chestsep/factorization/nmf.h"

#include <cmath>
#include <string>

#include "chestsep/common/errors.h"
#include "chestsep/factorization/updates.h"

namespace chestsep {

Stream StreamFor(Block block) {
  switch (block) {
    case Block::kHeart:
      return Stream::kHeart;
    case Block::kLung:
      return Stream::kLung;
    case Block::kNoise:
      return Stream::kNoise;
    case Block::kUnsupervised:
      break;
  }
  return Stream::kUnsupervised;
}

Rng MakeRng(std::uint64_t seed, Stream stream) {
  return Rng(DeriveSeed(seed, static_cast<std::uint64_t>(stream)));
}

Eigen::MatrixXd RandomActivations(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.Uniform(0.1, 1.1);
  }
  return m;
}

Eigen::MatrixXd RandomBasis(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd w = RandomActivations(rng, rows, cols);
  NormalizeColumnsInPlace(w);
  return w;
}

DictionaryTrainer::DictionaryTrainer(std::vector<Eigen::MatrixXd> examples,
                                     int bases, const SolverConfig& cfg, Rng rng)
    : examples_(std::move(examples)), cfg_(cfg) {
  cfg_.Validate();
  if (examples_.empty()) throw InvalidInput("dictionary training needs examples");
  if (bases < 1) throw InvalidInput("dictionary needs at least one basis");
  const Eigen::Index bins = examples_.front().rows();
  for (const auto& v : examples_) {
    if (v.rows() != bins) {
      throw InvalidInput("examples disagree on the number of frequency bins");
    }
  }
  basis_ = RandomBasis(rng, bins, bases);
  activations_.reserve(examples_.size());
  for (const auto& v : examples_) {
    activations_.push_back(RandomActivations(rng, bases, v.cols()));
  }
}

void DictionaryTrainer::Step() {
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    UpdateActivationsInPlace(examples_[i], basis_, activations_[i], cfg_);
  }
  const double weight = 1.0 / static_cast<double>(examples_.size());
  BasisUpdateTerms sum;
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    sum.AddScaled(ComputeBasisUpdateTerms(examples_[i], basis_, activations_[i],
                                          0, basis_.cols(), cfg_),
                  weight);
  }
  ApplyBasisUpdate(basis_, sum, cfg_.epsilon);
}

double DictionaryTrainer::Cost() const {
  double total = 0.0;
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    total += FactorCost(examples_[i], basis_, activations_[i], cfg_);
  }
  return total / static_cast<double>(examples_.size());
}

namespace {

bool Converged(double previous, double current, const SolverConfig& cfg) {
  if (!cfg.early_stop) return false;
  const double scale = std::max(std::abs(previous), cfg.epsilon);
  return std::abs(previous - current) / scale < cfg.early_stop_tolerance;
}

}  // namespace

TrainingResult TrainDictionary(std::span<const Spectrogram> examples, int bases,
                               const SolverConfig& cfg, Block role) {
  if (examples.empty()) throw InvalidInput("dictionary training needs examples");
  const ModelFingerprint fp = ModelFingerprint::Of(examples.front());
  std::vector<Eigen::MatrixXd> magnitudes;
  magnitudes.reserve(examples.size());
  for (const Spectrogram& s : examples) {
    if (s.bins() != examples.front().bins()) {
      throw InvalidInput("examples disagree on the number of frequency bins");
    }
    RequireFingerprint(fp, s);
    magnitudes.push_back(s.magnitude);
  }
  DictionaryTrainer trainer(std::move(magnitudes), bases, cfg,
                            MakeRng(cfg.rng_seed, StreamFor(role)));
  TrainingResult result;
  result.cost_trace.push_back(trainer.Cost());
  for (int it = 0; it < cfg.max_iter; ++it) {
    trainer.Step();
    result.cost_trace.push_back(trainer.Cost());
    if (!std::isfinite(result.cost_trace.back())) {
      throw NumericalError("dictionary training produced a non-finite cost");
    }
    if (Converged(result.cost_trace[result.cost_trace.size() - 2],
                  result.cost_trace.back(), cfg)) {
      break;
    }
  }
  result.model.basis = trainer.basis();
  result.model.blocks[role] = bases;
  result.model.fingerprint = fp;
  return result;
}

FactorModel CombineModels(std::span<const FactorModel> parts) {
  if (parts.empty()) throw InvalidInput("no models to combine");
  FactorModel out;
  out.fingerprint = parts.front().fingerprint;
  const Eigen::Index bins = parts.front().bins();
  for (const FactorModel& part : parts) {
    if (!(part.fingerprint == out.fingerprint)) {
      throw ConfigError("cannot combine models trained under " +
                        Describe(out.fingerprint) + " and " +
                        Describe(part.fingerprint));
    }
    if (part.bins() != bins) throw InvalidInput("models differ in bin count");
    for (Block b : kAllBlocks) {
      if (part.blocks[b] > 0 && out.blocks[b] > 0) {
        throw InvalidInput("block " + std::string(BlockName(b)) +
                           " appears in more than one model");
      }
      if (part.blocks[b] > 0) out.blocks[b] = part.blocks[b];
    }
  }
  out.basis.resize(bins, out.blocks.total());
  for (const FactorModel& part : parts) {
    for (Block b : kAllBlocks) {
      if (part.blocks[b] > 0) out.block(b) = part.block(b);
    }
  }
  out.Validate();
  return out;
}

NmfResult NmfSeparate(const Spectrogram& mixture, const FactorModel& model,
                      const SolverConfig& cfg, bool with_unsupervised,
                      int unsupervised_bases) {
  cfg.Validate();
  model.Validate();
  RequireFingerprint(model.fingerprint, mixture);
  if (mixture.bins() != model.bins()) {
    throw InvalidInput("mixture and model disagree on the number of bins");
  }

  NmfResult result;
  result.model = model;
  if (with_unsupervised) {
    if (unsupervised_bases < 1) {
      throw InvalidInput("unsupervised block needs at least one basis");
    }
    if (model.blocks.unsupervised != 0) {
      throw InvalidInput("model already carries an unsupervised block");
    }
    result.model.blocks.unsupervised = unsupervised_bases;
    result.model.basis.conservativeResize(Eigen::NoChange,
                                          result.model.blocks.total());
    Rng un_rng = MakeRng(cfg.rng_seed, Stream::kUnsupervised);
    result.model.block(Block::kUnsupervised) =
        RandomBasis(un_rng, model.bins(), unsupervised_bases);
  }
  Rng mix_rng = MakeRng(cfg.rng_seed, Stream::kMixture);
  result.activations.blocks = result.model.blocks;
  result.activations.coeffs =
      RandomActivations(mix_rng, result.model.columns(), mixture.frames());

  const Eigen::MatrixXd& v = mixture.magnitude;
  Eigen::MatrixXd w_hat = NormalizeColumns(result.model.basis);
  const int un_begin = result.model.blocks.offset(Block::kUnsupervised);
  const int un_count = result.model.blocks.unsupervised;

  result.cost_trace.push_back(FactorCost(v, w_hat, result.activations.coeffs, cfg));
  for (int it = 0; it < cfg.max_iter; ++it) {
    UpdateActivationsInPlace(v, w_hat, result.activations.coeffs, cfg);
    if (with_unsupervised) {
      const BasisUpdateTerms terms = ComputeBasisUpdateTerms(
          v, w_hat, result.activations.coeffs, un_begin, un_count, cfg);
      ApplyBasisUpdate(w_hat.middleCols(un_begin, un_count), terms, cfg.epsilon);
    }
    result.cost_trace.push_back(
        FactorCost(v, w_hat, result.activations.coeffs, cfg));
    ++result.iterations;
    if (!std::isfinite(result.cost_trace.back())) {
      throw NumericalError("separation produced a non-finite cost");
    }
    if (Converged(result.cost_trace[result.cost_trace.size() - 2],
                  result.cost_trace.back(), cfg)) {
      break;
    }
  }
  if (with_unsupervised) {
    result.model.block(Block::kUnsupervised) =
        w_hat.middleCols(un_begin, un_count);
  }
  return result;
}

}  // namespace chestsep

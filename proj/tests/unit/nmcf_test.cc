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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "chestsep/common/errors.h"
#include "chestsep/factorization/nmf.h"
#include "chestsep/factorization/updates.h"
#include "chestsep/nmcf/nmcf.h"
#include "chestsep/separation/separation.h"
#include "oracles.h"
#include "test_util.h"

namespace chestsep {
namespace {

using testing::MakeSpec;
using testing::NonIncreasing;
using testing::RandomPositive;

SolverConfig Config(Beta beta, double mu, int iters, std::uint64_t seed = 3) {
  SolverConfig cfg;
  cfg.beta = beta;
  cfg.mu = mu;
  cfg.max_iter = iters;
  cfg.rng_seed = seed;
  return cfg;
}

ReferenceSet RandomRefs(std::mt19937_64& gen, int f, int eh, int el, int en, int t = 10) {
  ReferenceSet refs;
  for (int i = 0; i < eh; ++i) refs.heart.push_back(MakeSpec(RandomPositive(gen, f, t)));
  for (int i = 0; i < el; ++i) refs.lung.push_back(MakeSpec(RandomPositive(gen, f, t + 2)));
  for (int i = 0; i < en; ++i) refs.noise.push_back(MakeSpec(RandomPositive(gen, f, t + 4)));
  return refs;
}

TEST(CofactorWeightsTest, DefaultsAndRange) {
  const CofactorWeights w;
  EXPECT_EQ(w.heart, 0.0);
  EXPECT_EQ(w.lung, 0.0);
  EXPECT_EQ(w.noise, 0.25);
  EXPECT_NO_THROW(w.Validate());
  EXPECT_THROW((CofactorWeights{1.5, 0, 0}).Validate(), InvalidInput);
  EXPECT_THROW((CofactorWeights{0, -0.1, 0}).Validate(), InvalidInput);
}

TEST(NmcfTest, ZeroWeightsReproduceTrainedDictionaries) {
  std::mt19937_64 gen(1);
  const ReferenceSet refs = RandomRefs(gen, 16, 3, 2, 2);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 16, 20));
  const SolverConfig cfg = Config(Beta::kKullbackLeibler, 0.1, 40);
  const BlockSizes sizes{4, 3, 2, 2};
  const NmcfResult r = NmcfSeparate(mix, refs, {0, 0, 0}, sizes, cfg);
  for (Block b : kSupervisedBlocks) {
    const TrainingResult t = TrainDictionary(refs[b], sizes[b], cfg, b);
    EXPECT_LT((Eigen::MatrixXd(r.model.block(b)) - t.model.basis).cwiseAbs().maxCoeff(),
              1e-6)
        << BlockName(b);
  }
}

TEST(NmcfTest, PlantedDisjointSupportsSeparate) {
  std::mt19937_64 gen(2);
  const int f = 24;
  Eigen::MatrixXd wh = Eigen::MatrixXd::Zero(f, 3);
  Eigen::MatrixXd wn = Eigen::MatrixXd::Zero(f, 3);
  wh.topRows(12) = RandomPositive(gen, 12, 3);
  wn.bottomRows(12) = RandomPositive(gen, 12, 3);
  wh = NormalizeColumns(wh);
  wn = NormalizeColumns(wn);
  const Eigen::MatrixXd heart = wh * RandomPositive(gen, 3, 30);
  const Eigen::MatrixXd noise = wn * RandomPositive(gen, 3, 30);
  ReferenceSet refs;
  for (int i = 0; i < 3; ++i) {
    refs.heart.push_back(MakeSpec(wh * RandomPositive(gen, 3, 15)));
    refs.noise.push_back(MakeSpec(wn * RandomPositive(gen, 3, 15)));
  }
  const Spectrogram mix = MakeSpec(heart + noise);
  const NmcfResult r = NmcfSeparate(mix, refs, {0.25, 0, 0.25}, {3, 0, 3, 0},
                                    Config(Beta::kKullbackLeibler, 0.0, 200));
  const SourceMasks masks = ComputeMasks(r.model, r.activations);
  const Eigen::MatrixXd est = masks.heart->cwiseProduct(mix.magnitude);
  const double captured = est.squaredNorm() / heart.squaredNorm();
  EXPECT_GE(captured, 0.9);
  EXPECT_LE(captured, 1.1);
}

TEST(NmcfTest, TwoSourceObjectiveTraceMonotone) {
  std::mt19937_64 gen(3);
  ReferenceSet refs = RandomRefs(gen, 20, 3, 3, 0);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 20, 25));
  for (int b : {0, 1, 2}) {
    const NmcfResult r = NmcfSeparate(mix, refs, {0, 0, 0}, {4, 4, 0, 0},
                                      Config(BetaFromInt(b), 0.1, 60));
    double scale = mix.magnitude.sum();
    for (const auto& s : refs.heart) scale += s.magnitude.sum();
    for (const auto& s : refs.lung) scale += s.magnitude.sum();
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_TRUE(NonIncreasing(r.objective_trace[i - 1], r.objective_trace[i], scale))
          << "beta " << b << " sweep " << i;
    }
  }
}

// Every update step descends the cost it is derived from; checked on a small
// grid here and on the full grid by the acceptance suite.
TEST(NmcfTest, EachStepDescendsItsCost) {
  std::mt19937_64 gen(4);
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::uniform_int_distribution<int> pick(0, 4);
  for (int b : {0, 1, 2}) {
    for (double mu : {0.0, 0.01, 0.1}) {
      for (int trial = 0; trial < 4; ++trial) {
        const ReferenceSet refs = RandomRefs(gen, 12, 2, 2, 2, 8);
        const Spectrogram mix = MakeSpec(RandomPositive(gen, 12, 9));
        const CofactorWeights w{grid[pick(gen)], grid[pick(gen)], grid[pick(gen)]};
        NmcfSolver s(mix, refs, w, {2, 2, 2, 2}, Config(BetaFromInt(b), mu, 1));
        const double scale = 100.0;
        for (int it = 0; it < 25; ++it) {
          double before = s.MixtureCost();
          s.UpdateMixtureActivations();
          ASSERT_TRUE(NonIncreasing(before, s.MixtureCost(), scale));
          for (Block blk : kSupervisedBlocks) {
            before = s.ExampleCost(blk);
            s.UpdateExampleActivations(blk);
            ASSERT_TRUE(NonIncreasing(before, s.ExampleCost(blk), scale));
          }
          for (Block blk : kAllBlocks) {
            before = s.BasisStepCost(blk);
            s.UpdateBasis(blk);
            ASSERT_TRUE(NonIncreasing(before, s.BasisStepCost(blk), scale))
                << BlockName(blk) << " beta " << b << " mu " << mu;
          }
        }
      }
    }
  }
}

TEST(NmcfTest, NoiseRefsIgnoredWithoutNoiseBlock) {
  std::mt19937_64 gen(5);
  ReferenceSet refs = RandomRefs(gen, 14, 2, 2, 2);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 14, 12));
  const SolverConfig cfg = Config(Beta::kKullbackLeibler, 0.1, 20);
  const CofactorWeights w{0.5, 0.5, 0.0};
  const NmcfResult a = NmcfSeparate(mix, refs, w, {3, 3, 0, 2}, cfg);
  refs.noise = RandomRefs(gen, 14, 0, 0, 4).noise;
  const NmcfResult b = NmcfSeparate(mix, refs, w, {3, 3, 0, 2}, cfg);
  EXPECT_EQ(a.model.basis, b.model.basis);
  EXPECT_EQ(a.activations.coeffs, b.activations.coeffs);
}

TEST(NmcfTest, DeterministicAndNormalised) {
  std::mt19937_64 gen(6);
  const ReferenceSet refs = RandomRefs(gen, 10, 2, 2, 2);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 10, 12));
  const SolverConfig cfg = Config(Beta::kItakuraSaito, 0.01, 15);
  const NmcfResult a = NmcfSeparate(mix, refs, {}, {2, 2, 2, 2}, cfg);
  const NmcfResult b = NmcfSeparate(mix, refs, {}, {2, 2, 2, 2}, cfg);
  EXPECT_EQ(a.model.basis, b.model.basis);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
  for (int k = 0; k < a.model.columns(); ++k) {
    EXPECT_NEAR(a.model.basis.col(k).norm(), 1.0, 1e-9);
  }
  EXPECT_GE(a.model.basis.minCoeff(), 0.0);
  EXPECT_GE(a.activations.coeffs.minCoeff(), 0.0);
}

TEST(NmcfTest, InputErrors) {
  std::mt19937_64 gen(7);
  ReferenceSet refs = RandomRefs(gen, 10, 0, 2, 2);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 10, 12));
  EXPECT_THROW(NmcfSeparate(mix, refs, {}, {2, 2, 2, 0}, {}), InvalidInput);
  EXPECT_NO_THROW(NmcfSeparate(mix, refs, {}, {0, 2, 2, 0}, Config(Beta::kKullbackLeibler, 0.1, 2)));
  refs.heart = RandomRefs(gen, 10, 11, 0, 0).heart;
  EXPECT_THROW(NmcfSeparate(mix, refs, {}, {2, 2, 2, 0}, {}), InvalidInput);
  refs.heart.resize(2);
  refs.heart[0].config.hop_size = 128;
  EXPECT_THROW(NmcfSeparate(mix, refs, {}, {2, 2, 2, 0}, {}), ConfigError);
  refs.heart[0] = MakeSpec(RandomPositive(gen, 9, 5));
  EXPECT_THROW(NmcfSeparate(mix, refs, {}, {2, 2, 2, 0}, {}), InvalidInput);
  EXPECT_THROW(NmcfSeparate(mix, refs, {2, 0, 0}, {2, 2, 2, 0}, {}), InvalidInput);
}

// Term-by-term evaluation with the naive cost oracle.
double NaiveObjective(const NmcfSolver& s, const CofactorWeights& w, int beta, double mu) {
  const FactorModel& m = s.model();
  const Activations& h = s.activations();
  double total = 0.0;
  for (Block b : kAllBlocks) {
    if (m.blocks[b] == 0) continue;
    const double lambda = b == Block::kUnsupervised ? 1.0 : w[b];
    total += lambda * testing::NaiveCost(s.mixture(), m.block(b), h.block(b), beta, mu);
    if (b == Block::kUnsupervised) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.examples(b).size(); ++i) {
      sum += testing::NaiveCost(s.examples(b)[i], m.block(b), s.example_activations(b)[i],
                                beta, mu);
    }
    total += sum / s.examples(b).size();
  }
  return total;
}

TEST(NmcfObjectiveTest, MatchesTermByTermOracle) {
  std::mt19937_64 gen(8);
  const ReferenceSet refs = RandomRefs(gen, 9, 2, 3, 1);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 9, 11));
  const CofactorWeights w{0.75, 0.25, 0.5};
  for (int b : {0, 1, 2}) {
    NmcfSolver s(mix, refs, w, {2, 3, 1, 2}, Config(BetaFromInt(b), 0.1, 1));
    s.Sweep();
    const double want = NaiveObjective(s, w, b, 0.1);
    EXPECT_NEAR(s.Objective(), want, 1e-10 * (1 + want));
  }
}

TEST(NmcfObjectiveTest, ZeroWeightsLeaveExampleAndUnsupervisedTerms) {
  std::mt19937_64 gen(9);
  const ReferenceSet refs = RandomRefs(gen, 9, 2, 2, 2);
  const Spectrogram mix = MakeSpec(RandomPositive(gen, 9, 11));
  NmcfSolver s(mix, refs, {0, 0, 0}, {2, 2, 2, 3}, Config(Beta::kKullbackLeibler, 0.1, 1));
  const auto& m = s.model();
  SolverConfig cfg = Config(Beta::kKullbackLeibler, 0.1, 1);
  const double un = FactorCost(mix.magnitude, m.block(Block::kUnsupervised),
                               s.activations().block(Block::kUnsupervised), cfg);
  const double ex = s.ExampleCost(Block::kHeart) + s.ExampleCost(Block::kLung) +
                    s.ExampleCost(Block::kNoise);
  EXPECT_NEAR(s.Objective(), un + ex, 1e-12 * (un + ex));
}

TEST(NmcfObjectiveTest, ExactFitsGiveZero) {
  std::mt19937_64 gen(10);
  const Eigen::MatrixXd w = NormalizeColumns(RandomPositive(gen, 8, 2));
  FactorModel m;
  m.basis = w;
  m.blocks = {2, 0, 0, 0};
  const Eigen::MatrixXd hm = RandomPositive(gen, 2, 5);
  const Eigen::MatrixXd he = RandomPositive(gen, 2, 7);
  std::array<std::vector<Eigen::MatrixXd>, 3> examples;
  std::array<std::vector<Eigen::MatrixXd>, 3> acts;
  examples[0] = {w * he};
  acts[0] = {he};
  const double v = NmcfObjective(w * hm, examples, m, {hm, m.blocks}, acts, {1, 0, 0},
                                 Config(Beta::kKullbackLeibler, 0.0, 1));
  EXPECT_NEAR(v, 0.0, 1e-12);
  acts[0].clear();
  EXPECT_THROW(NmcfObjective(w * hm, examples, m, {hm, m.blocks}, acts, {1, 0, 0}, {}),
               InvalidInput);
}

}  // namespace
}  // namespace chestsep

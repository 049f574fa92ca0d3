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
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "chestsep/bss_eval/bss_eval.h"
#include "chestsep/common/errors.h"
#include "chestsep/mixgen/mixgen.h"
#include "oracles.h"

namespace chestsep {
namespace {

using testing::Dot;
using testing::NaiveProjection;

std::vector<double> Gaussian(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (double& v : x) v = d(gen);
  return x;
}

// Gram-Schmidt on random vectors: mutually orthogonal, unit norm.
std::vector<std::vector<double>> Orthonormal(std::uint64_t seed, int count,
                                             std::size_t n) {
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> out;
  for (int c = 0; c < count; ++c) {
    std::vector<double> x = Gaussian(gen, n);
    for (const auto& q : out) {
      const double p = Dot(x, q);
      for (std::size_t i = 0; i < n; ++i) x[i] -= p * q[i];
    }
    const double norm = std::sqrt(Dot(x, x));
    for (double& v : x) v /= norm;
    out.push_back(std::move(x));
  }
  return out;
}

AudioClip Clip(std::vector<double> x) { return AudioClip(std::move(x), 4000); }

AudioClip Combine(const std::vector<std::vector<double>>& basis,
                  const std::vector<double>& coef) {
  std::vector<double> x(basis[0].size(), 0.0);
  for (std::size_t b = 0; b < coef.size(); ++b) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += coef[b] * basis[b][i];
  }
  return Clip(std::move(x));
}

double Energy(const std::vector<double>& x) { return Dot(x, x); }

TEST(DecomposeTest, PerfectEstimate) {
  std::mt19937_64 gen(1);
  const AudioClip t = Clip(Gaussian(gen, 400));
  const AudioClip o = Clip(Gaussian(gen, 400));
  const AudioClip others[] = {o};
  for (int len : {1, 8}) {
    const Decomposition d = Decompose(t, t, others, {}, len);
    ASSERT_EQ(d.s_target.size(), 400u + len - 1);
    EXPECT_LE(Energy(d.e_interf), 1e-16 * t.Energy());
    EXPECT_LE(Energy(d.e_artif), 1e-16 * t.Energy());
    EXPECT_EQ(Energy(d.e_noise), 0.0);
    EXPECT_NEAR(Energy(d.s_target), t.Energy(), 1e-9 * t.Energy());
    // The ridge term leaves a residual near 1e-20 of the energy, which
    // lands at the cap.
    EXPECT_NEAR(Sdr(d), kScoreCapDb, 0.5);
  }
}

TEST(DecomposeTest, EstimateIsOrthogonalInterferer) {
  const auto q = Orthonormal(2, 2, 300);
  const AudioClip target = Clip(q[0]);
  const AudioClip other = Clip(q[1]);
  const AudioClip others[] = {other};
  const Decomposition d = Decompose(other, target, others, {}, 1);
  EXPECT_LE(Energy(d.s_target), 1e-18);
  EXPECT_NEAR(Energy(d.e_interf), 1.0, 1e-9);
  EXPECT_LE(Energy(d.e_artif), 1e-18);
}

TEST(DecomposeTest, SingleTapIsScalarProjection) {
  std::mt19937_64 gen(3);
  const AudioClip est = Clip(Gaussian(gen, 257));
  const AudioClip tgt = Clip(Gaussian(gen, 257));
  const Decomposition d = Decompose(est, tgt, {}, {}, 1);
  const double a = Dot(est.samples(), tgt.samples()) / tgt.Energy();
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    EXPECT_NEAR(d.s_target[i], a * tgt[i], 1e-9 * std::abs(a * tgt[i]) + 1e-15);
  }
}

TEST(ReferenceSpaceTest, ProjectionMatchesDesignMatrixOracle) {
  std::mt19937_64 gen(4);
  std::vector<std::vector<double>> raw = {Gaussian(gen, 150), Gaussian(gen, 150),
                                          Gaussian(gen, 150)};
  std::vector<AudioClip> refs;
  for (const auto& r : raw) refs.push_back(Clip(r));
  const AudioClip est = Clip(Gaussian(gen, 150));
  for (int len : {1, 5, 16}) {
    const ReferenceSpace space(refs, len);
    const int subset[] = {0, 2};
    const std::vector<double> fast = space.Project(est, subset);
    const std::vector<double> slow =
        NaiveProjection(est.samples(), {raw[0], raw[2]}, len);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-8);
  }
  EXPECT_THROW(ReferenceSpace(refs, 0), InvalidInput);
  EXPECT_THROW(ReferenceSpace({}, 4), InvalidInput);
  EXPECT_THROW(ReferenceSpace({refs[0], Clip(std::vector<double>(10, 1.0))}, 2),
               InvalidInput);
}

TEST(SdrTest, TwentyDbWithOrthogonalNoise) {
  const auto q = Orthonormal(5, 2, 500);
  const AudioClip tgt = Combine(q, {3.0});
  const AudioClip est = Combine(q, {3.0, 0.3});
  const Decomposition d = Decompose(est, tgt, {}, {}, 1);
  EXPECT_NEAR(Sdr(d), 20.0, 0.1);
  EXPECT_EQ(Sir(d), kScoreCapDb);
}

TEST(SdrTest, EqualEnergyIsZeroDb) {
  const auto q = Orthonormal(6, 3, 500);
  const AudioClip tgt = Clip(q[0]);
  const AudioClip oth = Clip(q[1]);
  const AudioClip others[] = {oth};
  const Decomposition d = Decompose(Combine(q, {1.0, 1.0}), tgt, others, {}, 1);
  EXPECT_NEAR(Sdr(d), 0.0, 1e-9);
  EXPECT_NEAR(Sir(d), 0.0, 1e-9);
  const Decomposition e = Decompose(Combine(q, {1.0, 0.0, 1.0}), tgt, others, {}, 1);
  EXPECT_NEAR(Sdr(e), 0.0, 1e-9);
}

TEST(SirTest, PlantedTenToOne) {
  const auto q = Orthonormal(7, 3, 600);
  const AudioClip tgt = Clip(q[0]);
  const AudioClip oth = Clip(q[1]);
  const AudioClip noise = Clip(q[2]);
  const AudioClip others[] = {oth};
  const AudioClip est = Combine(q, {std::sqrt(10.0), 1.0, 0.5});
  const Decomposition d = Decompose(est, tgt, others, noise, 1);
  EXPECT_NEAR(Sir(d), 10.0, 0.1);
  EXPECT_NEAR(Energy(d.e_noise), 0.25, 1e-9);
  EXPECT_NEAR(Sdr(d), 10 * std::log10(10.0 / 1.25), 1e-6);
}

TEST(SdrTest, ZeroTargetComponentIsUndefined) {
  const auto q = Orthonormal(8, 2, 100);
  const AudioClip silent = AudioClip::Silence(100, 4000);
  const AudioClip others[] = {Clip(q[1])};
  EXPECT_THROW(Sdr(Decompose(Clip(q[1]), silent, others, {}, 1)), UndefinedScore);
  EXPECT_THROW(Sdr(Decompose(Clip(q[1]), silent, {}, {}, 4)), UndefinedScore);
  EXPECT_THROW(SiSdr(Clip(q[1]), AudioClip::Silence(100, 4000)), UndefinedScore);
}

TEST(SiSdrTest, ClosedFormCases) {
  const auto q = Orthonormal(9, 2, 400);
  const AudioClip t = Clip(q[0]);
  EXPECT_EQ(SiSdr(Combine(q, {2.0}), t), kScoreCapDb);
  EXPECT_NEAR(SiSdr(Combine(q, {1.0, 1.0}), t), 0.0, 1e-9);
}

TEST(SiSdrTest, MatchesGridSearchAndIsScaleInvariant) {
  std::mt19937_64 gen(10);
  std::vector<double> ref = Gaussian(gen, 800);
  std::vector<double> est = ref;
  const std::vector<double> n = Gaussian(gen, 800);
  for (std::size_t i = 0; i < est.size(); ++i) est[i] = 0.7 * est[i] + 0.4 * n[i];
  const double score = SiSdr(Clip(est), Clip(ref));
  EXPECT_NEAR(score, testing::SiSdrGridSearch(est, ref, 0.0, 2.0), 0.01);
  for (double c : {0.01, 3.0, 1e4}) {
    std::vector<double> scaled = est;
    for (double& v : scaled) v *= c;
    EXPECT_NEAR(SiSdr(Clip(scaled), Clip(ref)), score, 1e-9);
  }
}

TEST(DecomposeTest, CompletenessAndNesting) {
  std::mt19937_64 gen(11);
  const AudioClip t = Clip(Gaussian(gen, 1000));
  const AudioClip o = Clip(Gaussian(gen, 1000));
  const AudioClip nz = Clip(Gaussian(gen, 1000));
  const MixtureInstance inst = MixConvolutive(t, o, nz, 0.0, 5.0, 99);
  const AudioClip others[] = {inst.scaled_lung};
  double previous_target = 0.0;
  double previous_sdr = -1e9;
  for (int len : {1, 4, 32}) {
    const Decomposition d =
        Decompose(inst.mixture, t, others, inst.scaled_noise, len);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.s_target.size(); ++i) {
      const double est = i < inst.mixture.size() ? inst.mixture[i] : 0.0;
      worst = std::max(worst, std::abs(d.s_target[i] + d.e_interf[i] + d.e_noise[i] +
                                       d.e_artif[i] - est));
    }
    EXPECT_LE(worst, 1e-9 * std::sqrt(inst.mixture.Energy()));
    EXPECT_GE(Energy(d.s_target), previous_target * (1 - 1e-12));
    EXPECT_GE(Sdr(d), previous_sdr - 1e-9);
    previous_target = Energy(d.s_target);
    previous_sdr = Sdr(d);
  }
}

TEST(DecomposeTest, SwappingTargetSwapsRoles) {
  const auto q = Orthonormal(12, 2, 300);
  const AudioClip a = Clip(q[0]);
  const AudioClip b = Clip(q[1]);
  const AudioClip est = Combine(q, {2.0, 0.5});
  const AudioClip only_b[] = {b};
  const AudioClip only_a[] = {a};
  const Decomposition da = Decompose(est, a, only_b, {}, 1);
  const Decomposition db = Decompose(est, b, only_a, {}, 1);
  EXPECT_NEAR(Energy(da.s_target), Energy(db.e_interf), 1e-9);
  EXPECT_NEAR(Energy(da.e_interf), Energy(db.s_target), 1e-9);
}

TEST(ScoreInstanceTest, GroundTruthHitsTheCap) {
  const auto q = Orthonormal(13, 3, 500);
  const MixtureInstance inst =
      MixInstantaneous(Clip(q[0]), Clip(q[1]), Clip(q[2]), 0.0, 0.0);
  SeparationResult r;
  r.heart = inst.scaled_heart;
  r.lung = inst.scaled_lung;
  r.noise = inst.scaled_noise;
  const auto scores = ScoreInstance(r, inst, 1);
  ASSERT_EQ(scores.size(), 3u);
  for (const auto& s : scores) {
    EXPECT_GE(s.estimate.sdr_db, 150.0) << s.source;
    EXPECT_GE(s.estimate.sir_db, 150.0) << s.source;
    EXPECT_GE(s.estimate.si_sdr_db, 150.0) << s.source;
  }
}

TEST(ScoreInstanceTest, MixtureAsEstimateMatchesEnergyRatio) {
  const auto q = Orthonormal(14, 3, 2000);
  const MixtureInstance inst =
      MixInstantaneous(Clip(q[0]), Clip(q[1]), Clip(q[2]), 5.0, -5.0);
  SeparationResult r;
  r.heart = inst.mixture;
  r.lung = inst.mixture;
  const auto scores = ScoreInstance(r, inst, 1);
  ASSERT_EQ(scores.size(), 2u);
  const double expected = 10 * std::log10(
      inst.scaled_heart.Energy() /
      (inst.scaled_lung.Energy() + inst.scaled_noise.Energy()));
  EXPECT_NEAR(scores[0].estimate.sdr_db, expected, 0.5);
  EXPECT_NEAR(scores[0].baseline.sdr_db, expected, 0.5);
  EXPECT_EQ(scores[1].source, "lung");
}

TEST(ScoreInstanceTest, LongerFilterNeverLowersSdr) {
  std::mt19937_64 gen(15);
  const MixtureInstance inst = MixConvolutive(
      Clip(Gaussian(gen, 1500)), Clip(Gaussian(gen, 1500)), Clip(Gaussian(gen, 1500)),
      0.0, 0.0, 5);
  SeparationResult r;
  std::vector<double> est = inst.scaled_heart.samples();
  for (std::size_t i = 0; i < est.size(); ++i) est[i] += 0.3 * inst.scaled_lung[i];
  r.heart = Clip(est);
  r.lung = inst.mixture;
  const auto one = ScoreInstance(r, inst, 1);
  const auto many = ScoreInstance(r, inst, 32);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_GE(many[i].estimate.sdr_db, one[i].estimate.sdr_db - 1e-9);
  }
}

}  // namespace
}  // namespace chestsep

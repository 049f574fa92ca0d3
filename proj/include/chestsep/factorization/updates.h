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
#ifndef CHESTSEP_FACTORIZATION_UPDATES_H_
#define CHESTSEP_FACTORIZATION_UPDATES_H_

#include <Eigen/Dense>

#include "chestsep/factorization/model.h"

namespace chestsep {

using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

// Element-wise beta-divergence summed over all entries.
//   beta = 2: (x - y)^2 / 2
//   beta = 1: x log(x / y) - x + y, with 0 log 0 = 0
//   beta = 0: x / y - log(x / y) - 1
// y is floored at epsilon; for beta = 0 x is floored as well, which is the
// limit convention for zero data. Throws InvalidInput on a shape mismatch.
double BetaDivergence(MatrixRef x, MatrixRef y, Beta beta,
                      double epsilon = 1e-12);

// D_beta(V | W_hat H) + mu * |H|_1, with W_hat the column-normalised basis.
double FactorCost(MatrixRef v, MatrixRef w, MatrixRef h, const SolverConfig& cfg);
double Cost(const Eigen::MatrixXd& v, const FactorModel& model,
            const Activations& h, const SolverConfig& cfg);

// Multiplicative activation update
//   H <- H * W^T (V * L^(beta-2)) / (W^T L^(beta-1) + mu),  L = W H.
// w must already be column-normalised. Rows of blocks listed in fixed keep
// their values.
void UpdateActivationsInPlace(MatrixRef v, MatrixRef w, Eigen::Ref<Eigen::MatrixXd> h,
                              const SolverConfig& cfg);

Activations UpdateH(const Eigen::MatrixXd& v, const FactorModel& model,
                    const Activations& h, const SolverConfig& cfg,
                    BlockSet fixed = {});

// Numerator and denominator of the normalisation-aware basis update for a
// contiguous column range [begin, begin + count) of a normalised W:
//   num = P + W_c * 1 1^T (W_c * Q),   den = Q + W_c * 1 1^T (W_c * P)
// with P = (L^(beta-2) * V) H_c^T, Q = L^(beta-1) H_c^T and L = W H.
// Both are linear in the data term, so contributions from several data
// matrices sharing the same columns may be summed before applying.
struct BasisUpdateTerms {
  Eigen::MatrixXd numerator;
  Eigen::MatrixXd denominator;

  BasisUpdateTerms& AddScaled(const BasisUpdateTerms& other, double weight);
};

BasisUpdateTerms ComputeBasisUpdateTerms(MatrixRef v, MatrixRef w, MatrixRef h,
                                         Eigen::Index begin, Eigen::Index count,
                                         const SolverConfig& cfg);

// W_c <- W_c * num / den, then renormalise each column.
void ApplyBasisUpdate(Eigen::Ref<Eigen::MatrixXd> w_cols,
                      const BasisUpdateTerms& terms, double epsilon);

// Updates the columns of every block in `blocks` (in block order, each block
// seeing the previous ones' new columns) and renormalises them. Throws
// InvalidInput for an empty selection.
FactorModel UpdateWNormalized(const Eigen::MatrixXd& v, const FactorModel& model,
                              const Activations& h, const SolverConfig& cfg,
                              BlockSet blocks);

}  // namespace chestsep

#endif  // CHESTSEP_FACTORIZATION_UPDATES_H_

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
#include "chestsep/factorization/updates.h"

#include <cmath>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep {
namespace {

void RequireProductShape(MatrixRef v, MatrixRef w, MatrixRef h) {
  if (w.rows() != v.rows() || w.cols() != h.rows() || h.cols() != v.cols()) {
    throw InvalidInput("dimension mismatch: V " + std::to_string(v.rows()) + "x" +
                       std::to_string(v.cols()) + ", W " +
                       std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                       ", H " + std::to_string(h.rows()) + "x" +
                       std::to_string(h.cols()));
  }
}

void RequirePaired(const FactorModel& model, const Activations& h) {
  if (h.coeffs.rows() != model.columns() || !(h.blocks == model.blocks)) {
    throw InvalidInput("activations are not paired with the model's blocks");
  }
}

}  // namespace

double BetaDivergence(MatrixRef x, MatrixRef y, Beta beta, double epsilon) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidInput("beta divergence of differently shaped matrices");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double yi = std::max(y(i, j), epsilon);
      const double xi = x(i, j);
      switch (beta) {
        case Beta::kEuclidean: {
          const double d = xi - yi;
          total += 0.5 * d * d;
          break;
        }
        case Beta::kKullbackLeibler:
          total += (xi > 0.0 ? xi * std::log(xi / yi) : 0.0) - xi + yi;
          break;
        case Beta::kItakuraSaito: {
          const double r = std::max(xi, epsilon) / yi;
          total += r - std::log(r) - 1.0;
          break;
        }
      }
    }
  }
  return total;
}

double FactorCost(MatrixRef v, MatrixRef w, MatrixRef h, const SolverConfig& cfg) {
  RequireProductShape(v, w, h);
  const Eigen::MatrixXd w_hat = NormalizeColumns(w);
  const Eigen::MatrixXd recon = w_hat * h;
  return BetaDivergence(v, recon, cfg.beta, cfg.epsilon) + cfg.mu * h.sum();
}

double Cost(const Eigen::MatrixXd& v, const FactorModel& model,
            const Activations& h, const SolverConfig& cfg) {
  RequirePaired(model, h);
  return FactorCost(v, model.basis, h.coeffs, cfg);
}

void UpdateActivationsInPlace(MatrixRef v, MatrixRef w,
                              Eigen::Ref<Eigen::MatrixXd> h,
                              const SolverConfig& cfg) {
  RequireProductShape(v, w, h);
  if (h.rows() == 0) return;
  const Eigen::MatrixXd recon = (w * h).cwiseMax(cfg.epsilon);
  Eigen::MatrixXd num;
  Eigen::MatrixXd den;
  switch (cfg.beta) {
    case Beta::kEuclidean:
      num = w.transpose() * v;
      den = w.transpose() * recon;
      break;
    case Beta::kKullbackLeibler:
      num = w.transpose() * (v.array() / recon.array()).matrix();
      den = w.colwise().sum().transpose().replicate(1, v.cols());
      break;
    case Beta::kItakuraSaito:
      num = w.transpose() * (v.array() / recon.array().square()).matrix();
      den = w.transpose() * recon.cwiseInverse();
      break;
  }
  h.array() *= num.array() / (den.array() + cfg.mu).max(cfg.epsilon);
}

Activations UpdateH(const Eigen::MatrixXd& v, const FactorModel& model,
                    const Activations& h, const SolverConfig& cfg,
                    BlockSet fixed) {
  RequirePaired(model, h);
  Activations out = h;
  bool any_free = false;
  for (Block b : kAllBlocks) {
    if (model.blocks[b] > 0 && !fixed.contains(b)) any_free = true;
  }
  if (!any_free) return out;

  UpdateActivationsInPlace(v, NormalizeColumns(model.basis), out.coeffs, cfg);
  for (Block b : kAllBlocks) {
    if (fixed.contains(b) && model.blocks[b] > 0) out.block(b) = h.block(b);
  }
  return out;
}

BasisUpdateTerms& BasisUpdateTerms::AddScaled(const BasisUpdateTerms& other,
                                              double weight) {
  if (numerator.size() == 0) {
    numerator = weight * other.numerator;
    denominator = weight * other.denominator;
  } else {
    numerator += weight * other.numerator;
    denominator += weight * other.denominator;
  }
  return *this;
}

BasisUpdateTerms ComputeBasisUpdateTerms(MatrixRef v, MatrixRef w, MatrixRef h,
                                         Eigen::Index begin, Eigen::Index count,
                                         const SolverConfig& cfg) {
  RequireProductShape(v, w, h);
  if (begin < 0 || count < 0 || begin + count > w.cols()) {
    throw InvalidInput("basis column range out of bounds");
  }
  const Eigen::MatrixXd recon = (w * h).cwiseMax(cfg.epsilon);
  const auto h_cols = h.middleRows(begin, count);
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
  switch (cfg.beta) {
    case Beta::kEuclidean:
      p = v * h_cols.transpose();
      q = recon * h_cols.transpose();
      break;
    case Beta::kKullbackLeibler:
      p = (v.array() / recon.array()).matrix() * h_cols.transpose();
      q = Eigen::VectorXd::Ones(v.rows()) * h_cols.rowwise().sum().transpose();
      break;
    case Beta::kItakuraSaito:
      p = (v.array() / recon.array().square()).matrix() * h_cols.transpose();
      q = recon.cwiseInverse() * h_cols.transpose();
      break;
  }
  const auto w_cols = w.middleCols(begin, count);
  const Eigen::RowVectorXd wq = w_cols.cwiseProduct(q).colwise().sum();
  const Eigen::RowVectorXd wp = w_cols.cwiseProduct(p).colwise().sum();

  BasisUpdateTerms terms;
  terms.numerator = p + (w_cols.array().rowwise() * wq.array()).matrix();
  terms.denominator = q + (w_cols.array().rowwise() * wp.array()).matrix();
  return terms;
}

void ApplyBasisUpdate(Eigen::Ref<Eigen::MatrixXd> w_cols,
                      const BasisUpdateTerms& terms, double epsilon) {
  w_cols.array() *=
      terms.numerator.array() / terms.denominator.array().max(epsilon);
  NormalizeColumnsInPlace(w_cols);
}

FactorModel UpdateWNormalized(const Eigen::MatrixXd& v, const FactorModel& model,
                              const Activations& h, const SolverConfig& cfg,
                              BlockSet blocks) {
  RequirePaired(model, h);
  bool any = false;
  for (Block b : kAllBlocks) any = any || (blocks.contains(b) && model.blocks[b] > 0);
  if (!any) throw InvalidInput("block selector names no non-empty block");

  Eigen::MatrixXd w_hat = NormalizeColumns(model.basis);
  FactorModel out = model;
  for (Block b : kAllBlocks) {
    if (!blocks.contains(b) || model.blocks[b] == 0) continue;
    const Eigen::Index begin = model.blocks.offset(b);
    const Eigen::Index count = model.blocks[b];
    const BasisUpdateTerms terms =
        ComputeBasisUpdateTerms(v, w_hat, h.coeffs, begin, count, cfg);
    ApplyBasisUpdate(w_hat.middleCols(begin, count), terms, cfg.epsilon);
    out.basis.middleCols(begin, count) = w_hat.middleCols(begin, count);
  }
  return out;
}

}  // namespace chestsep

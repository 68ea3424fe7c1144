#include "opdhg/precond.hpp"

#include <cmath>
#include <string>

#include "opdhg/log.hpp"

namespace opdhg {

DiagPreconditioner pockChambolle(const SparseMatrix& a, double beta) {
  if (!(beta >= 0.0 && beta <= 2.0)) {
    throw InvalidInputError("pockChambolle: beta must lie in [0, 2]");
  }
  const Vector col_sums = axisNorms(a, Axis::kCols, NormKind::kPowerSum, 2.0 - beta);
  const Vector row_sums = axisNorms(a, Axis::kRows, NormKind::kPowerSum, beta);
  DiagPreconditioner pre{Vector::Zero(a.cols()), Vector::Zero(a.rows())};
  for (Index j = 0; j < a.cols(); ++j) {
    if (col_sums[j] > 0.0) pre.primal[j] = 1.0 / col_sums[j];
  }
  for (Index i = 0; i < a.rows(); ++i) {
    if (row_sums[i] > 0.0) pre.dual[i] = 1.0 / row_sums[i];
  }
  return pre;
}

ScalingResult ruiz(const SparseMatrix& a, int num_rounds) {
  if (num_rounds < 1) throw InvalidInputError("ruiz: need at least one round");
  ScalingResult result{ScalingRecord::identity(a.rows(), a.cols()), a};
  Index zero_guards = 0;
  for (int round = 0; round < num_rounds; ++round) {
    const Vector row_inf = axisNorms(result.scaled, Axis::kRows, NormKind::kInf);
    const Vector col_inf = axisNorms(result.scaled, Axis::kCols, NormKind::kInf);
    Vector row_factor = Vector::Ones(a.rows());
    Vector col_factor = Vector::Ones(a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      if (row_inf[i] > 0.0) {
        result.record.row_scaling[i] /= row_inf[i];
        row_factor[i] = 1.0 / std::sqrt(row_inf[i]);
      } else if (round == 0) {
        ++zero_guards;
      }
    }
    for (Index j = 0; j < a.cols(); ++j) {
      if (col_inf[j] > 0.0) {
        result.record.col_scaling[j] /= col_inf[j];
        col_factor[j] = 1.0 / std::sqrt(col_inf[j]);
      } else if (round == 0) {
        ++zero_guards;
      }
    }
    result.scaled = row_factor.asDiagonal() * result.scaled * col_factor.asDiagonal();
  }
  if (zero_guards > 0) {
    logWarn("ruiz: " + std::to_string(zero_guards) +
            " zero row(s)/column(s); their scaling was left unchanged");
  }
  return result;
}

ScalingResult l2Rescale(const SparseMatrix& a) {
  const Vector row_l2 = axisNorms(a, Axis::kRows, NormKind::kL2);
  const Vector col_l2 = axisNorms(a, Axis::kCols, NormKind::kL2);
  ScalingResult result{ScalingRecord::identity(a.rows(), a.cols()), a};
  Vector row_factor = Vector::Ones(a.rows());
  Vector col_factor = Vector::Ones(a.cols());
  Index zero_guards = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    if (row_l2[i] > 0.0) {
      result.record.row_scaling[i] = 1.0 / row_l2[i];
      row_factor[i] = 1.0 / std::sqrt(row_l2[i]);
    } else {
      ++zero_guards;
    }
  }
  for (Index j = 0; j < a.cols(); ++j) {
    if (col_l2[j] > 0.0) {
      result.record.col_scaling[j] = 1.0 / col_l2[j];
      col_factor[j] = 1.0 / std::sqrt(col_l2[j]);
    } else {
      ++zero_guards;
    }
  }
  if (zero_guards > 0) {
    logWarn("l2Rescale: " + std::to_string(zero_guards) +
            " zero row(s)/column(s) left unscaled");
  }
  result.scaled = row_factor.asDiagonal() * a * col_factor.asDiagonal();
  return result;
}

SafeguardScalars safeguardScalars(const SparseMatrix& a_scaled, double ratio) {
  if (!(ratio > 0.0)) throw InvalidInputError("safeguardScalars: ratio must be positive");
  const double estimate = estimateSpectralNorm(a_scaled);
  if (estimate == 0.0) return {1.0, 1.0};
  const double inflated = 1.01 * estimate;  // power iteration underestimates
  const double t = std::sqrt(0.99 * ratio) / inflated;
  return {t, t / ratio};
}

ScalingRecord composeScalings(const ScalingRecord& first, const ScalingRecord& second) {
  if (first.row_scaling.size() != second.row_scaling.size() ||
      first.col_scaling.size() != second.col_scaling.size()) {
    throw InvalidInputError("composeScalings: dimension mismatch");
  }
  return {first.row_scaling.cwiseProduct(second.row_scaling),
          first.col_scaling.cwiseProduct(second.col_scaling),
          first.primal_scalar * second.primal_scalar,
          first.dual_scalar * second.dual_scalar};
}

LpProblem applyScaling(const LpProblem& p, const ScalingRecord& rec) {
  p.validate();
  if (rec.row_scaling.size() != p.numRows() || rec.col_scaling.size() != p.numCols()) {
    throw InvalidInputError("applyScaling: record does not match problem dimensions");
  }
  const Vector row_factor = rec.rowFactors();
  const Vector col_factor = rec.colFactors();
  LpProblem scaled;
  scaled.a = row_factor.asDiagonal() * p.a * col_factor.asDiagonal();
  scaled.a.makeCompressed();
  scaled.b = row_factor.cwiseProduct(p.b);
  scaled.c = col_factor.cwiseProduct(p.c);
  return scaled;
}

Vector scaledToOriginalPrimal(const ScalingRecord& rec, const Vector& x_scaled) {
  return rec.colFactors().cwiseProduct(x_scaled);
}

Vector scaledToOriginalDual(const ScalingRecord& rec, const Vector& dual_scaled) {
  return rec.rowFactors().cwiseProduct(dual_scaled);
}

}  // namespace opdhg

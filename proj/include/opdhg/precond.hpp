#pragma once

#include "opdhg/problem.hpp"
#include "opdhg/sparse.hpp"

namespace opdhg {

/// Diagonal primal/dual step scalings used inside the saddle-point iteration.
/// Both vectors are nonnegative; a zero coordinate freezes that coordinate.
struct DiagPreconditioner {
  Vector primal;  // length n
  Vector dual;    // length m

  static DiagPreconditioner identity(Index n, Index m) {
    return {Vector::Ones(n), Vector::Ones(m)};
  }
};

/// Cumulative equilibration state. The stored vectors live in preconditioner
/// space: the multiplier actually applied to row i of the matrix is
/// sqrt(row_scaling[i]), and likewise for columns, so the vectors double as
/// the diagonal preconditioners T = primal_scalar·Diag(col_scaling),
/// Σ = dual_scalar·Diag(row_scaling).
struct ScalingRecord {
  Vector row_scaling;          // length m, all entries > 0
  Vector col_scaling;          // length n, all entries > 0
  double primal_scalar = 1.0;  // t
  double dual_scalar = 1.0;    // s

  Vector rowFactors() const { return row_scaling.cwiseSqrt(); }
  Vector colFactors() const { return col_scaling.cwiseSqrt(); }

  static ScalingRecord identity(Index m, Index n) {
    return {Vector::Ones(m), Vector::Ones(n), 1.0, 1.0};
  }
};

struct ScalingResult {
  ScalingRecord record;
  SparseMatrix scaled;
};

struct SafeguardScalars {
  double primal;  // t
  double dual;    // s
};

/// Diagonal scalings 1/Σᵢ|A_ij|^{2−β} (primal) and 1/Σⱼ|A_ij|^β (dual) for
/// β ∈ [0, 2]. Coordinates whose denominator vanishes (empty row or column)
/// are set to 0 so the result is always finite.
DiagPreconditioner pockChambolle(const SparseMatrix& a, double beta);

/// K rounds of row/column infinity-norm equilibration. Each round divides the
/// cumulative scalings by the current scaled matrix's inf-norms and applies
/// the square-root factors, so on return scaled == D_r A D_c with
/// D_r = rowFactors(), D_c = colFactors(). Zero rows/columns keep their
/// current scaling and produce a warning.
ScalingResult ruiz(const SparseMatrix& a, int num_rounds);

/// One simultaneous pass dividing each row and column by the square root of
/// its l2 norm, both norms taken on the input matrix. Zero rows/columns are
/// left untouched with a warning.
ScalingResult l2Rescale(const SparseMatrix& a);

/// Scalar steps (t, s) with t/s == ratio and t·s·(1.01·‖A‖₂ estimate)² = 0.99,
/// keeping the product strictly inside the step-size stability bound even
/// though the power-iteration estimate approaches the norm from below.
/// A zero matrix yields t = s = 1.
SafeguardScalars safeguardScalars(const SparseMatrix& a_scaled, double ratio);

/// Sequential composition: applying `first` then `second` equals applying the
/// returned record once.
ScalingRecord composeScalings(const ScalingRecord& first, const ScalingRecord& second);

/// Rescales problem data: Ã = D_r A D_c, b̃ = D_r b, c̃ = D_c c. Solutions map
/// back as x = D_c x̃ and λ = D_r λ̃, which scaledToOriginalPrimal/Dual apply.
LpProblem applyScaling(const LpProblem& p, const ScalingRecord& rec);

Vector scaledToOriginalPrimal(const ScalingRecord& rec, const Vector& x_scaled);
Vector scaledToOriginalDual(const ScalingRecord& rec, const Vector& dual_scaled);

}  // namespace opdhg

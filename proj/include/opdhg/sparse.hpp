#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace opdhg {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;
using Triplet = Eigen::Triplet<double>;

/// Builds a compressed column matrix from triplets, summing duplicates and
/// dropping entries that are exactly zero.
SparseMatrix buildSparse(Index rows, Index cols, const std::vector<Triplet>& entries);

Vector matvec(const SparseMatrix& a, const Vector& x);
Vector matvecTranspose(const SparseMatrix& a, const Vector& dual);

enum class Axis { kRows, kCols };
enum class NormKind { kInf, kL2, kPowerSum };

/// Per-row or per-column norms. kPowerSum returns the plain sum of
/// |a_ij|^power (no root), which is what the diagonal preconditioner
/// formulas consume. Empty rows/columns yield 0.
Vector axisNorms(const SparseMatrix& a, Axis axis, NormKind kind, double power = 2.0);

/// Largest singular value via power iteration on AᵀA, started from the
/// normalized all-ones vector so repeated runs are identical. Returns the
/// Rayleigh-quotient estimate, which converges to the true norm from below;
/// callers that need a safe upper bound must inflate it.
double estimateSpectralNorm(const SparseMatrix& a, int max_iters = 5000, double tol = 1e-4);

}  // namespace opdhg

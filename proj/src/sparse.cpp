#include "opdhg/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace opdhg {

SparseMatrix buildSparse(Index rows, Index cols, const std::vector<Triplet>& entries) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(entries.begin(), entries.end());
  a.prune([](Index, Index, double v) { return v != 0.0; });
  a.makeCompressed();
  return a;
}

Vector matvec(const SparseMatrix& a, const Vector& x) {
  if (x.size() != a.cols()) {
    throw std::invalid_argument("matvec: vector length does not match column count");
  }
  return a * x;
}

Vector matvecTranspose(const SparseMatrix& a, const Vector& dual) {
  if (dual.size() != a.rows()) {
    throw std::invalid_argument("matvecTranspose: vector length does not match row count");
  }
  return a.transpose() * dual;
}

Vector axisNorms(const SparseMatrix& a, Axis axis, NormKind kind, double power) {
  const bool rows = axis == Axis::kRows;
  Vector out = Vector::Zero(rows ? a.rows() : a.cols());
  for (Index outer = 0; outer < a.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(a, outer); it; ++it) {
      const Index i = rows ? it.row() : it.col();
      const double mag = std::abs(it.value());
      switch (kind) {
        case NormKind::kInf:
          out[i] = std::max(out[i], mag);
          break;
        case NormKind::kL2:
          out[i] += mag * mag;
          break;
        case NormKind::kPowerSum:
          out[i] += std::pow(mag, power);
          break;
      }
    }
  }
  if (kind == NormKind::kL2) out = out.cwiseSqrt();
  return out;
}

double estimateSpectralNorm(const SparseMatrix& a, int max_iters, double tol) {
  if (max_iters < 1) throw std::invalid_argument("estimateSpectralNorm: max_iters must be >= 1");
  if (a.nonZeros() == 0) return 0.0;

  const Index n = a.cols();
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  // The all-ones start can be orthogonal to the dominant singular vector on
  // contrived matrices; fall back to a fixed pseudo-random direction.
  if ((a * v).isZero(0.0)) {
    for (Index j = 0; j < n; ++j) v[j] = std::sin(static_cast<double>(j) + 1.0);
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    v /= norm;
    if ((a * v).isZero(0.0)) return 0.0;
  }

  double estimate = 0.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    Vector image = a * v;
    Vector next = a.transpose() * image;
    const double next_norm = next.norm();
    if (next_norm == 0.0) return 0.0;
    const double previous = estimate;
    estimate = std::sqrt(image.squaredNorm());  // Rayleigh quotient for unit v
    v = next / next_norm;
    if (iter > 0 && std::abs(estimate - previous) <= tol * std::max(estimate, 1e-300)) {
      break;
    }
  }
  return estimate;
}

}  // namespace opdhg

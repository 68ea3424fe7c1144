#pragma once

#include <stdexcept>

#include "opdhg/sparse.hpp"

namespace opdhg {

/// Raised for malformed problem data (inconsistent dimensions, infeasible
/// bound pairs, out-of-range parameters).
class InvalidInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Equality-form LP data: minimize cᵀx subject to Ax = b, x ≥ 0.
struct LpProblem {
  Vector c;
  Vector b;
  SparseMatrix a;

  Index numRows() const { return a.rows(); }
  Index numCols() const { return a.cols(); }

  void validate() const {
    if (c.size() != a.cols() || b.size() != a.rows()) {
      throw InvalidInputError("LpProblem: dimension mismatch between c, b and A");
    }
  }
};

}  // namespace opdhg

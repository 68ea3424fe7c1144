#pragma once

#include <vector>

#include "opdhg/mps.hpp"
#include "opdhg/problem.hpp"

namespace opdhg {

/// How one original variable appears in the standard-form problem:
///   x_original = sign * (x[col] - (neg_col >= 0 ? x[neg_col] : 0)) + shift.
struct VarTransform {
  Index col = -1;
  Index neg_col = -1;  // second column of a free-variable split, or -1
  double shift = 0.0;
  double sign = 1.0;
};

struct VarMap {
  std::vector<VarTransform> vars;
  double objective_offset = 0.0;  // original objective = standard objective + offset
  Index standard_num_cols = 0;

  bool isIdentity() const;
};

struct StandardFormLp {
  LpProblem problem;
  VarMap map;
};

/// Reduces a general-form LP to min cᵀx, Ax = b, x ≥ 0:
///   - finite lower bounds are shifted to zero,
///   - variables bounded only above are reflected (negated around the bound),
///   - free variables are split into positive and negative parts,
///   - ≤/≥ rows gain slack/surplus columns,
///   - remaining finite upper bounds become extra equality rows with slacks.
StandardFormLp toStandardForm(const GeneralLp& gp);

/// Maps a standard-form point back to the original variable space.
Vector recoverSolution(const VarMap& map, const Vector& x_std);

}  // namespace opdhg

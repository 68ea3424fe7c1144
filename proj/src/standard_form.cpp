#include "opdhg/standard_form.hpp"

#include <cmath>
#include <limits>

namespace opdhg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool VarMap::isIdentity() const {
  if (objective_offset != 0.0) return false;
  if (standard_num_cols != static_cast<Index>(vars.size())) return false;
  for (Index j = 0; j < static_cast<Index>(vars.size()); ++j) {
    const VarTransform& v = vars[j];
    if (v.col != j || v.neg_col >= 0 || v.shift != 0.0 || v.sign != 1.0) return false;
  }
  return true;
}

StandardFormLp toStandardForm(const GeneralLp& gp) {
  gp.validate();
  const Index m0 = gp.numRows();
  const Index n0 = gp.numCols();
  const SparseMatrix a0 = gp.matrix();

  VarMap map;
  map.vars.resize(n0);
  map.objective_offset = gp.objective_offset;

  std::vector<double> c(gp.objective.data(), gp.objective.data() + n0);
  std::vector<double> b(gp.rhs.data(), gp.rhs.data() + m0);
  std::vector<Triplet> entries;
  entries.reserve(gp.entries.size() * 2);
  std::vector<std::pair<Index, double>> upper_rows;  // (standard column, bound)
  Index next_col = n0;

  for (Index j = 0; j < n0; ++j) {
    const double lo = gp.lower[j];
    const double up = gp.upper[j];
    VarTransform& var = map.vars[j];
    var.col = j;

    double shift = 0.0;
    bool reflect = false;
    if (std::isfinite(lo)) {
      shift = lo;
      if (std::isfinite(up)) upper_rows.emplace_back(j, up - lo);
    } else if (std::isfinite(up)) {
      shift = up;
      reflect = true;
    } else {
      var.neg_col = next_col++;
      c.push_back(-c[j]);
    }
    var.shift = shift;
    var.sign = reflect ? -1.0 : 1.0;
    if (shift != 0.0) map.objective_offset += c[j] * shift;
    if (reflect) c[j] = -c[j];

    for (SparseMatrix::InnerIterator it(a0, j); it; ++it) {
      if (shift != 0.0) b[it.row()] -= it.value() * shift;
      entries.emplace_back(it.row(), j, reflect ? -it.value() : it.value());
      if (var.neg_col >= 0) entries.emplace_back(it.row(), var.neg_col, -it.value());
    }
  }

  for (Index i = 0; i < m0; ++i) {
    if (gp.senses[i] == RowSense::kLe) {
      entries.emplace_back(i, next_col++, 1.0);
      c.push_back(0.0);
    } else if (gp.senses[i] == RowSense::kGe) {
      entries.emplace_back(i, next_col++, -1.0);
      c.push_back(0.0);
    }
  }

  Index next_row = m0;
  for (const auto& [col, bound] : upper_rows) {
    entries.emplace_back(next_row, col, 1.0);
    entries.emplace_back(next_row, next_col++, 1.0);
    c.push_back(0.0);
    b.push_back(bound);
    ++next_row;
  }

  StandardFormLp out;
  out.problem.a = buildSparse(next_row, next_col, entries);
  out.problem.c = Eigen::Map<const Vector>(c.data(), static_cast<Index>(c.size()));
  out.problem.b = Eigen::Map<const Vector>(b.data(), static_cast<Index>(b.size()));
  out.problem.validate();
  map.standard_num_cols = next_col;
  out.map = std::move(map);
  return out;
}

Vector recoverSolution(const VarMap& map, const Vector& x_std) {
  if (x_std.size() != map.standard_num_cols) {
    throw InvalidInputError("recoverSolution: point does not match standard-form dimension");
  }
  Vector original(static_cast<Index>(map.vars.size()));
  for (Index j = 0; j < original.size(); ++j) {
    const VarTransform& v = map.vars[j];
    double value = x_std[v.col];
    if (v.neg_col >= 0) value -= x_std[v.neg_col];
    original[j] = v.sign * value + v.shift;
  }
  return original;
}

}  // namespace opdhg

#include "opdhg/pdhg.hpp"

#include <cmath>

namespace opdhg {

SaddleState SaddleState::initial(const LpProblem& p) {
  p.validate();
  SaddleState st;
  st.primal = Vector::Zero(p.numCols());
  st.dual = Vector::Zero(p.numRows());
  st.primal_product = Vector::Zero(p.numRows());
  st.dual_product = Vector::Zero(p.numCols());
  st.avg_primal_sum = Vector::Zero(p.numCols());
  st.avg_dual_sum = Vector::Zero(p.numRows());
  return st;
}

void SaddleState::addToAverage(double weight) {
  avg_primal_sum += weight * primal;
  avg_dual_sum += weight * dual;
  avg_weight += weight;
}

void SaddleState::resetAverage() {
  avg_primal_sum.setZero();
  avg_dual_sum.setZero();
  avg_weight = 0.0;
}

Vector SaddleState::averagePrimal() const {
  return avg_weight > 0.0 ? Vector(avg_primal_sum / avg_weight) : primal;
}

Vector SaddleState::averageDual() const {
  return avg_weight > 0.0 ? Vector(avg_dual_sum / avg_weight) : dual;
}

bool SaddleState::cacheConsistent(const LpProblem& p, double tol) const {
  const Vector ax = p.a * primal;
  const Vector at = p.a.transpose() * dual;
  const double scale_p = std::max(1.0, ax.norm());
  const double scale_d = std::max(1.0, at.norm());
  return (ax - primal_product).norm() <= tol * scale_p &&
         (at - dual_product).norm() <= tol * scale_d;
}

double evaluateLagrangian(const LpProblem& p, const Vector& x, const Vector& dual) {
  if (x.size() != p.numCols() || dual.size() != p.numRows()) {
    throw InvalidInputError("evaluateLagrangian: dimension mismatch");
  }
  if (!x.allFinite() || !dual.allFinite()) {
    throw InvalidInputError("evaluateLagrangian: non-finite input");
  }
  return p.c.dot(x) - dual.dot(p.a * x) + p.b.dot(dual);
}

StepOutcome pdhgStep(const LpProblem& p, const SaddleState& st, const DiagPreconditioner& pre,
                     double step_size, double primal_weight) {
  if (pre.primal.size() != p.numCols() || pre.dual.size() != p.numRows()) {
    throw InvalidInputError("pdhgStep: preconditioner does not match problem dimensions");
  }
  if (!(step_size > 0.0) || !(primal_weight > 0.0)) {
    throw InvalidInputError("pdhgStep: step size and primal weight must be positive");
  }

  StepOutcome out;
  out.dual_slack = p.c - st.dual_product;
  out.primal_residual = p.b - st.primal_product;
  out.pre_projection =
      st.primal - (step_size / primal_weight) * pre.primal.cwiseProduct(out.dual_slack);

  SaddleState next;
  next.primal = out.pre_projection.cwiseMax(0.0);
  next.primal_product = p.a * next.primal;
  out.extrap_residual = p.b - (2.0 * next.primal_product - st.primal_product);
  next.dual = st.dual + (step_size * primal_weight) * pre.dual.cwiseProduct(out.extrap_residual);
  next.dual_product = p.a.transpose() * next.dual;
  next.iteration = st.iteration + 1;
  next.avg_primal_sum = st.avg_primal_sum;
  next.avg_dual_sum = st.avg_dual_sum;
  next.avg_weight = st.avg_weight;

  out.finite = next.primal.allFinite() && next.dual.allFinite();
  out.step_size_used = step_size;
  out.next = std::move(next);
  return out;
}

Residuals computeResiduals(const LpProblem& p, const Vector& x, const Vector& dual) {
  Residuals r;
  r.primal = (p.a * x - p.b).norm();
  r.dual = (Vector(p.a.transpose() * dual) - p.c).cwiseMax(0.0).norm();
  r.primal_objective = p.c.dot(x);
  r.dual_objective = p.b.dot(dual);
  r.gap = std::abs(r.primal_objective - r.dual_objective);
  r.rel_primal = r.primal / (1.0 + p.b.norm());
  r.rel_dual = r.dual / (1.0 + p.c.norm());
  r.rel_gap = r.gap / (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));
  return r;
}

bool Residuals::isFinite() const {
  return std::isfinite(primal) && std::isfinite(dual) && std::isfinite(gap) &&
         std::isfinite(rel_primal) && std::isfinite(rel_dual) && std::isfinite(rel_gap);
}

double compositeKkt(const Residuals& r) {
  return std::sqrt(r.rel_primal * r.rel_primal + r.rel_dual * r.rel_dual +
                   r.rel_gap * r.rel_gap);
}

}  // namespace opdhg

#pragma once

#include <cstdint>

#include "opdhg/precond.hpp"
#include "opdhg/problem.hpp"

namespace opdhg {

/// Primal-dual iterate with cached matrix-vector products and the running
/// step-size-weighted averages of the current restart window.
struct SaddleState {
  Vector primal;          // x, nonnegative
  Vector dual;            // λ
  Vector primal_product;  // A·primal
  Vector dual_product;    // Aᵀ·dual
  std::int64_t iteration = 0;

  Vector avg_primal_sum;
  Vector avg_dual_sum;
  double avg_weight = 0.0;

  static SaddleState initial(const LpProblem& p);

  void addToAverage(double weight);
  void resetAverage();
  /// Average iterate of the window; the current point when the window is empty.
  Vector averagePrimal() const;
  Vector averageDual() const;

  /// Re-derives the cached products and compares; exercised by tests.
  bool cacheConsistent(const LpProblem& p, double tol = 1e-12) const;
};

/// One preconditioned step. `next` holds the advanced iterate; the remaining
/// vectors are the byproducts the online preconditioner feedback needs:
/// the pre-projection primal point, c − Aᵀλᵏ, b − Axᵏ and the extrapolated
/// residual b − A(2x^{k+1} − xᵏ).
struct StepOutcome {
  SaddleState next;
  Vector pre_projection;
  Vector dual_slack;
  Vector primal_residual;
  Vector extrap_residual;
  double step_size_used = 1.0;
  bool finite = true;
};

/// L(x, λ) = cᵀx − λᵀAx + bᵀλ.
double evaluateLagrangian(const LpProblem& p, const Vector& x, const Vector& dual);

/// x⁺ = proj₊(x − (η/ω)·T(c − Aᵀλ)),  λ⁺ = λ + ηω·Σ(b − A(2x⁺ − x)).
/// With η = ω = 1 this is the plain preconditioned iteration.
StepOutcome pdhgStep(const LpProblem& p, const SaddleState& st, const DiagPreconditioner& pre,
                     double step_size, double primal_weight);

struct Residuals {
  double primal = 0.0;  // ‖Ax − b‖₂
  double dual = 0.0;    // ‖(Aᵀλ − c)₊‖₂
  double gap = 0.0;     // |cᵀx − bᵀλ|
  double rel_primal = 0.0;
  double rel_dual = 0.0;
  double rel_gap = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;

  bool isFinite() const;
};

/// Relative forms divide by 1+‖b‖, 1+‖c‖ and 1+|cᵀx|+|bᵀλ| respectively.
Residuals computeResiduals(const LpProblem& p, const Vector& x, const Vector& dual);

/// √(rel_primal² + rel_dual² + rel_gap²); the trace column and the restart
/// progress metric.
double compositeKkt(const Residuals& r);

}  // namespace opdhg

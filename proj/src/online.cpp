#include "opdhg/online.hpp"

#include <cmath>

#include "opdhg/log.hpp"

namespace opdhg {

namespace {
constexpr double kNormFloor = 1e-30;
}

void OnlineConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw InvalidInputError("OnlineConfig: learning rate must be >= 0");
  if (update_period < 1) throw InvalidInputError("OnlineConfig: update period must be >= 1");
  if (!(adagrad_epsilon > 0.0)) throw InvalidInputError("OnlineConfig: epsilon must be > 0");
  if (max_value && !(*max_value > 0.0)) {
    throw InvalidInputError("OnlineConfig: preconditioner cap must be > 0");
  }
}

OnlineLearner::OnlineLearner(OnlineConfig cfg, Index num_cols, Index num_rows)
    : config(std::move(cfg)),
      primal_accumulator(Vector::Zero(num_cols)),
      dual_accumulator(Vector::Zero(num_rows)) {
  config.validate();
}

double primalLoss(const LpProblem& p, const SaddleState& before, const SaddleState& after) {
  return evaluateLagrangian(p, after.primal, before.dual) -
         evaluateLagrangian(p, before.primal, before.dual);
}

double dualLoss(const LpProblem& p, const SaddleState& before, const SaddleState& after,
                DualLossAnchor anchor) {
  const Vector& x = anchor == DualLossAnchor::kXk ? before.primal : after.primal;
  return evaluateLagrangian(p, x, before.dual) - evaluateLagrangian(p, x, after.dual);
}

Vector primalGradFromStep(const Vector& dual_slack, const Vector& pre_projection,
                          double step_size, double primal_weight) {
  if (dual_slack.size() != pre_projection.size()) {
    throw InvalidInputError("primalGrad: dimension mismatch");
  }
  const double factor = -step_size / primal_weight;
  Vector grad(dual_slack.size());
  for (Index j = 0; j < grad.size(); ++j) {
    grad[j] = pre_projection[j] >= 0.0 ? factor * dual_slack[j] * dual_slack[j] : 0.0;
  }
  return grad;
}

Vector primalGrad(const LpProblem& p, const Vector& dual, const Vector& pre_projection,
                  double step_size, double primal_weight) {
  const Vector dual_slack = p.c - matvecTranspose(p.a, dual);
  return primalGradFromStep(dual_slack, pre_projection, step_size, primal_weight);
}

Vector dualGradFromStep(const Vector& primal_residual, const Vector& extrap_residual,
                        double step_size, double primal_weight) {
  if (primal_residual.size() != extrap_residual.size()) {
    throw InvalidInputError("dualGrad: dimension mismatch");
  }
  return (-step_size * primal_weight) * primal_residual.cwiseProduct(extrap_residual);
}

Vector dualGrad(const LpProblem& p, const Vector& x_k, const Vector& x_next, double step_size,
                double primal_weight) {
  const Vector residual_k = p.b - matvec(p.a, x_k);
  const Vector extrap = p.b - matvec(p.a, Vector(2.0 * x_next - x_k));
  return dualGradFromStep(residual_k, extrap, step_size, primal_weight);
}

std::pair<Vector, Vector> normalizeGradients(Vector primal_grad, Vector dual_grad,
                                             const Vector& dual_slack,
                                             const Vector& primal_residual) {
  const double primal_denom = dual_slack.squaredNorm();
  const double dual_denom = primal_residual.squaredNorm();
  if (primal_denom < kNormFloor) {
    primal_grad.setZero();
  } else {
    primal_grad /= primal_denom;
  }
  if (dual_denom < kNormFloor) {
    dual_grad.setZero();
  } else {
    dual_grad /= dual_denom;
  }
  return {std::move(primal_grad), std::move(dual_grad)};
}

namespace {

void updateSide(Vector& values, Vector& accumulator, const Vector& grad,
                const OnlineConfig& cfg) {
  if (cfg.scheduler == Scheduler::kAdaGrad) {
    accumulator += grad.cwiseProduct(grad);
    values -= cfg.learning_rate *
              grad.cwiseQuotient((accumulator.array() + cfg.adagrad_epsilon).sqrt().matrix());
  } else {
    values -= cfg.learning_rate * grad;
  }
  values = values.cwiseMax(0.0);
  if (cfg.max_value) values = values.cwiseMin(*cfg.max_value);
}

}  // namespace

DiagPreconditioner ogdUpdate(OnlineLearner& learner, const DiagPreconditioner& pre,
                             const Vector& primal_grad, const Vector& dual_grad) {
  if (primal_grad.size() != pre.primal.size() || dual_grad.size() != pre.dual.size()) {
    throw InvalidInputError("ogdUpdate: gradient dimensions do not match preconditioner");
  }
  if (!primal_grad.allFinite() || !dual_grad.allFinite()) {
    logWarn("ogdUpdate: non-finite gradient, preconditioner update skipped");
    return pre;
  }
  DiagPreconditioner next = pre;
  updateSide(next.primal, learner.primal_accumulator, primal_grad, learner.config);
  updateSide(next.dual, learner.dual_accumulator, dual_grad, learner.config);
  ++learner.updates;
  return next;
}

OnlineStepResult onlineStep(const LpProblem& p, const SaddleState& st,
                            const DiagPreconditioner& pre, OnlineLearner& learner,
                            double step_size, double primal_weight, std::int64_t iteration) {
  OnlineStepResult result{pdhgStep(p, st, pre, step_size, primal_weight), pre};
  if (iteration % learner.config.update_period != 0) return result;

  Vector g_primal =
      primalGradFromStep(result.step.dual_slack, result.step.pre_projection, step_size,
                         primal_weight);
  Vector g_dual = dualGradFromStep(result.step.primal_residual, result.step.extrap_residual,
                                   step_size, primal_weight);
  if (learner.config.normalize) {
    std::tie(g_primal, g_dual) =
        normalizeGradients(std::move(g_primal), std::move(g_dual), result.step.dual_slack,
                           result.step.primal_residual);
  }
  result.preconditioner = ogdUpdate(learner, pre, g_primal, g_dual);
  return result;
}

}  // namespace opdhg

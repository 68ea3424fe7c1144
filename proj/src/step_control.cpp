#include "opdhg/step_control.hpp"

#include <cmath>

namespace opdhg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared norm of v in the metric Diag(weights)⁻¹; coordinates with zero
// weight cannot move and are skipped.
double inverseWeightedSquaredNorm(const Vector& v, const Vector& weights) {
  double sum = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (weights[i] > 0.0) sum += v[i] * v[i] / weights[i];
  }
  return sum;
}

}  // namespace

StepOutcome adaptiveStepsize(const LpProblem& p, const SaddleState& st,
                             const DiagPreconditioner& pre, StepController& ctrl) {
  StepOutcome trial;
  for (int attempt = 0; attempt <= ctrl.max_retries; ++attempt) {
    trial = pdhgStep(p, st, pre, ctrl.step_size, ctrl.primal_weight);
    ++ctrl.total_attempts;
    if (!trial.finite) {
      ctrl.step_size *= 0.5;
      continue;
    }

    const Vector delta_primal = trial.next.primal - st.primal;
    const Vector delta_dual = trial.next.dual - st.dual;
    const double movement =
        0.5 * ctrl.primal_weight * inverseWeightedSquaredNorm(delta_primal, pre.primal) +
        0.5 / ctrl.primal_weight * inverseWeightedSquaredNorm(delta_dual, pre.dual);
    const double nonlinearity =
        std::abs(delta_dual.dot(trial.next.primal_product - st.primal_product));
    const double limit = nonlinearity == 0.0 ? kInf : movement / nonlinearity;

    const bool accepted = ctrl.step_size <= limit;
    const double base = static_cast<double>(ctrl.total_attempts + 1);
    const double shrunk = (1.0 - std::pow(base, -0.3)) * limit;
    const double grown = (1.0 + std::pow(base, -0.6)) * ctrl.step_size;
    const double next_step = std::min(shrunk, grown);
    if (std::isfinite(next_step) && next_step > 0.0) {
      ctrl.step_size = next_step;
    } else {
      ctrl.step_size *= 0.5;
    }
    if (accepted) return trial;
  }
  trial.finite = false;  // retry budget exhausted
  return trial;
}

double primalWeightInit(const LpProblem& p) {
  const double c_norm = p.c.norm();
  const double b_norm = p.b.norm();
  if (c_norm > 1e-12 && b_norm > 1e-12) return c_norm / b_norm;
  return 1.0;
}

RestartState RestartState::initial(const SaddleState& st, double initial_metric) {
  RestartState rst;
  rst.last_restart_iteration = st.iteration;
  rst.metric_at_restart = initial_metric;
  rst.primal_at_restart = st.primal;
  rst.dual_at_restart = st.dual;
  return rst;
}

RestartDecision restartCheck(RestartState& rst, std::int64_t iteration, double current_metric,
                             double average_metric) {
  const std::int64_t period = iteration - rst.last_restart_iteration;
  if (period < 2) return RestartDecision::kNone;

  const double best = std::min(current_metric, average_metric);
  const RestartDecision candidate = average_metric <= current_metric
                                        ? RestartDecision::kToAverage
                                        : RestartDecision::kToCurrent;
  const bool sufficient = best <= rst.sufficient_decay * rst.metric_at_restart;
  const bool stalled_necessary = best <= rst.necessary_decay * rst.metric_at_restart &&
                                 best > rst.best_metric_last_check;
  const bool long_period =
      static_cast<double>(period) >= rst.long_period_fraction * static_cast<double>(iteration);
  rst.best_metric_last_check = best;
  return (sufficient || stalled_necessary || long_period) ? candidate : RestartDecision::kNone;
}

void applyRestart(RestartState& rst, SaddleState& st, const LpProblem& p,
                  RestartDecision decision, double chosen_metric, StepController* ctrl,
                  bool update_primal_weight) {
  if (decision == RestartDecision::kNone) return;
  if (decision == RestartDecision::kToAverage) {
    st.primal = st.averagePrimal();
    st.dual = st.averageDual();
    st.primal_product = p.a * st.primal;
    st.dual_product = p.a.transpose() * st.dual;
  }
  st.resetAverage();

  if (update_primal_weight && ctrl != nullptr) {
    const double primal_move = (st.primal - rst.primal_at_restart).norm();
    const double dual_move = (st.dual - rst.dual_at_restart).norm();
    if (primal_move > 1e-12 && dual_move > 1e-12) {
      ctrl->primal_weight =
          std::exp(0.5 * std::log(dual_move / primal_move) + 0.5 * std::log(ctrl->primal_weight));
    }
  }

  rst.last_restart_iteration = st.iteration;
  rst.metric_at_restart = chosen_metric;
  rst.best_metric_last_check = kInf;
  rst.primal_at_restart = st.primal;
  rst.dual_at_restart = st.dual;
  ++rst.restart_count;
}

}  // namespace opdhg

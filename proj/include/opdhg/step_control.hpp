#pragma once

#include <cstdint>
#include <limits>

#include "opdhg/online.hpp"
#include "opdhg/pdhg.hpp"

namespace opdhg {

/// Adaptive step-size state. After every trial the step size moves to
/// min((1 − (a+1)^{-0.3})·limit, (1 + (a+1)^{-0.6})·η) where `a` counts all
/// attempts so far and `limit` is the movement/nonlinearity bound evaluated
/// on the trial.
struct StepController {
  double step_size = 1.0;      // η
  double primal_weight = 1.0;  // ω
  std::int64_t total_attempts = 0;
  int max_retries = 60;
};

/// Repeats trial steps until the acceptance bound η ≤ ‖Δz‖²_ω / (2|ΔλᵀAΔx|)
/// holds, where ‖Δz‖²_ω = ω‖Δx‖²_{T⁻¹} + (1/ω)‖Δλ‖²_{Σ⁻¹} (zero preconditioner
/// coordinates contribute nothing). Returns the accepted outcome with
/// step_size_used set; if the retry budget runs out the last trial is
/// returned flagged non-finite so the caller reports a numerical failure.
StepOutcome adaptiveStepsize(const LpProblem& p, const SaddleState& st,
                             const DiagPreconditioner& pre, StepController& ctrl);

/// ω₀ = ‖c‖/‖b‖ when both norms exceed 1e-12, else 1.
double primalWeightInit(const LpProblem& p);

enum class RestartDecision { kNone, kToAverage, kToCurrent };

struct RestartState {
  std::int64_t last_restart_iteration = 0;
  double metric_at_restart = std::numeric_limits<double>::infinity();
  double best_metric_last_check = std::numeric_limits<double>::infinity();
  Vector primal_at_restart;
  Vector dual_at_restart;
  std::int64_t restart_count = 0;

  double sufficient_decay = 0.2;
  double necessary_decay = 0.8;
  double long_period_fraction = 0.36;

  static RestartState initial(const SaddleState& st, double initial_metric);
};

/// Progress-based restart test on the composite KKT metric of the current
/// iterate and the window average: fire on sufficient decay, on necessary
/// decay that has stopped improving since the previous check, or when the
/// window exceeds long_period_fraction of all iterations so far. The better
/// candidate wins (average on ties).
RestartDecision restartCheck(RestartState& rst, std::int64_t iteration, double current_metric,
                             double average_metric);

/// Moves the iterate to the chosen candidate, resets the averaging window and
/// bookkeeping, and optionally re-balances the primal weight from the
/// primal/dual movement over the finished window. Preconditioners are not
/// touched: the next window starts from the learned values.
void applyRestart(RestartState& rst, SaddleState& st, const LpProblem& p,
                  RestartDecision decision, double chosen_metric, StepController* ctrl,
                  bool update_primal_weight);

}  // namespace opdhg

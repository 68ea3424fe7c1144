#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "opdhg/pdhg.hpp"

namespace opdhg {

enum class Scheduler { kAdaGrad, kFixed };

/// Eq. anchor for the diagnostic dual loss: the loss difference may be
/// evaluated holding the primal at xᵏ (consistent with the closed-form
/// gradient used for updates) or at x^{k+1} (the form the normalized loss
/// is written in). The update path is unaffected.
enum class DualLossAnchor { kXk, kXNext };

struct OnlineConfig {
  double learning_rate = 0.0;  // α; zero leaves the preconditioners untouched
  int update_period = 20;      // φ: update only when the iteration index is a multiple
  bool normalize = false;
  Scheduler scheduler = Scheduler::kAdaGrad;
  double adagrad_epsilon = 1e-10;
  DualLossAnchor dual_loss_anchor = DualLossAnchor::kXk;
  std::optional<double> max_value;  // optional stability cap on preconditioner entries

  void validate() const;
};

/// Per-solve state of the projected online-gradient scheme: squared-gradient
/// accumulators (coordinate-wise non-decreasing) and an update counter.
struct OnlineLearner {
  OnlineConfig config;
  Vector primal_accumulator;
  Vector dual_accumulator;
  std::int64_t updates = 0;

  OnlineLearner(OnlineConfig cfg, Index num_cols, Index num_rows);
};

/// Feedback losses: change in the Lagrangian caused by the primal update
/// (evaluated at the incoming dual) and by the dual update.
double primalLoss(const LpProblem& p, const SaddleState& before, const SaddleState& after);
double dualLoss(const LpProblem& p, const SaddleState& before, const SaddleState& after,
                DualLossAnchor anchor = DualLossAnchor::kXk);

/// Diagonal of the primal feedback gradient:
///   g_j = −(η/ω)·(c − Aᵀλᵏ)_j²·[x^{k+1/2}_j ≥ 0].
/// The indicator is inclusive at zero.
Vector primalGradFromStep(const Vector& dual_slack, const Vector& pre_projection,
                          double step_size, double primal_weight);
Vector primalGrad(const LpProblem& p, const Vector& dual, const Vector& pre_projection,
                  double step_size, double primal_weight);

/// Diagonal of the dual feedback gradient:
///   g_i = −ηω·(b − Axᵏ)_i·(b − A(2x^{k+1} − xᵏ))_i.
Vector dualGradFromStep(const Vector& primal_residual, const Vector& extrap_residual,
                        double step_size, double primal_weight);
Vector dualGrad(const LpProblem& p, const Vector& x_k, const Vector& x_next, double step_size,
                double primal_weight);

/// Divides the gradients by ‖c − Aᵀλᵏ‖² and ‖b − Axᵏ‖²; a squared norm below
/// 1e-30 zeroes the corresponding gradient instead.
std::pair<Vector, Vector> normalizeGradients(Vector primal_grad, Vector dual_grad,
                                             const Vector& dual_slack,
                                             const Vector& primal_residual);

/// Projected online gradient descent on the diagonal preconditioners, with
/// the configured per-coordinate step (AdaGrad or fixed). Non-finite
/// gradients skip the update and leave both preconditioner and accumulators
/// untouched.
DiagPreconditioner ogdUpdate(OnlineLearner& learner, const DiagPreconditioner& pre,
                             const Vector& primal_grad, const Vector& dual_grad);

struct OnlineStepResult {
  StepOutcome step;
  DiagPreconditioner preconditioner;
};

/// One iteration of the learned-preconditioner scheme: a PDHG step, then —
/// only when iteration % φ == 0 — a feedback-gradient update of the
/// preconditioners computed from that step's byproducts.
OnlineStepResult onlineStep(const LpProblem& p, const SaddleState& st,
                            const DiagPreconditioner& pre, OnlineLearner& learner,
                            double step_size, double primal_weight, std::int64_t iteration);

}  // namespace opdhg

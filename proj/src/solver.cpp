#include "opdhg/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "opdhg/log.hpp"

namespace opdhg {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool hasNan(const Residuals& r) {
  return std::isnan(r.rel_primal) || std::isnan(r.rel_dual) || std::isnan(r.rel_gap) ||
         std::isnan(r.primal) || std::isnan(r.dual) || std::isnan(r.gap);
}

bool belowTolerance(const Residuals& r, double tol) {
  return r.rel_primal <= tol && r.rel_dual <= tol && r.rel_gap <= tol;
}

// Residuals of the scaled iterate measured in original units, using the
// identity A x = D_r⁻¹ (Ã x̃) so the cached scaled products suffice.
class ResidualEvaluator {
 public:
  ResidualEvaluator(const LpProblem& original, const LpProblem& scaled,
                    const ScalingRecord& rec)
      : scaled_(scaled),
        inv_row_factor_(rec.rowFactors().cwiseInverse()),
        inv_col_factor_(rec.colFactors().cwiseInverse()),
        b_norm_(original.b.norm()),
        c_norm_(original.c.norm()) {}

  Residuals fromProducts(const Vector& x, const Vector& dual, const Vector& primal_product,
                         const Vector& dual_product) const {
    Residuals r;
    r.primal = inv_row_factor_.cwiseProduct(primal_product - scaled_.b).norm();
    r.dual = inv_col_factor_.cwiseProduct(dual_product - scaled_.c).cwiseMax(0.0).norm();
    r.primal_objective = scaled_.c.dot(x);
    r.dual_objective = scaled_.b.dot(dual);
    r.gap = std::abs(r.primal_objective - r.dual_objective);
    r.rel_primal = r.primal / (1.0 + b_norm_);
    r.rel_dual = r.dual / (1.0 + c_norm_);
    r.rel_gap = r.gap / (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));
    return r;
  }

  Residuals fromState(const SaddleState& st) const {
    return fromProducts(st.primal, st.dual, st.primal_product, st.dual_product);
  }

  Residuals fromPoint(const Vector& x, const Vector& dual) const {
    return fromProducts(x, dual, scaled_.a * x, scaled_.a.transpose() * dual);
  }

 private:
  const LpProblem& scaled_;
  Vector inv_row_factor_;
  Vector inv_col_factor_;
  double b_norm_;
  double c_norm_;
};

ScalingRecord buildScalingRecord(const LpProblem& problem, const SolveConfig& cfg) {
  switch (cfg.scaling) {
    case Scaling::kNone:
      return ScalingRecord::identity(problem.numRows(), problem.numCols());
    case Scaling::kL2:
      return l2Rescale(problem.a).record;
    case Scaling::kRuiz:
      return ruiz(problem.a, cfg.ruiz_rounds).record;
    case Scaling::kRuizL2: {
      ScalingResult first = ruiz(problem.a, cfg.ruiz_rounds);
      ScalingResult second = l2Rescale(first.scaled);
      return composeScalings(first.record, second.record);
    }
    case Scaling::kPockChambolle: {
      DiagPreconditioner pc = pockChambolle(problem.a, cfg.pock_chambolle_beta);
      ScalingRecord rec{std::move(pc.dual), std::move(pc.primal), 1.0, 1.0};
      // Empty rows/columns carry value 0 there; keep them unscaled instead.
      Index guarded = 0;
      for (Index i = 0; i < rec.row_scaling.size(); ++i) {
        if (rec.row_scaling[i] == 0.0) rec.row_scaling[i] = 1.0, ++guarded;
      }
      for (Index j = 0; j < rec.col_scaling.size(); ++j) {
        if (rec.col_scaling[j] == 0.0) rec.col_scaling[j] = 1.0, ++guarded;
      }
      if (guarded > 0) logWarn("scaling: empty rows/columns left unscaled");
      return rec;
    }
  }
  return ScalingRecord::identity(problem.numRows(), problem.numCols());
}

}  // namespace

const char* toString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kIterationLimit: return "ITERATION_LIMIT";
    case SolveStatus::kTimeLimit: return "TIME_LIMIT";
    case SolveStatus::kNumericalError: return "NUMERICAL_ERROR";
  }
  return "UNKNOWN";
}

const char* toString(Mode mode) { return mode == Mode::kVanilla ? "vanilla" : "pdlp"; }

const char* toString(Scaling scaling) {
  switch (scaling) {
    case Scaling::kNone: return "none";
    case Scaling::kL2: return "l2";
    case Scaling::kRuiz: return "ruiz";
    case Scaling::kRuizL2: return "ruiz_l2";
    case Scaling::kPockChambolle: return "pock_chambolle";
  }
  return "unknown";
}

void SolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidInputError("SolveConfig: tolerance must be positive");
  if (iteration_limit < 1) throw InvalidInputError("SolveConfig: iteration limit must be >= 1");
  if (!(time_limit_sec > 0.0)) throw InvalidInputError("SolveConfig: time limit must be positive");
  if (check_stride < 1 || trace_stride < 1) {
    throw InvalidInputError("SolveConfig: strides must be >= 1");
  }
  if (ruiz_rounds < 1) throw InvalidInputError("SolveConfig: ruiz rounds must be >= 1");
  if (!(safeguard_ratio > 0.0)) throw InvalidInputError("SolveConfig: safeguard ratio must be > 0");
  if (fixed_step_size && !(*fixed_step_size > 0.0)) {
    throw InvalidInputError("SolveConfig: fixed step size must be positive");
  }
  if (fixed_primal_weight && !(*fixed_primal_weight > 0.0)) {
    throw InvalidInputError("SolveConfig: fixed primal weight must be positive");
  }
  if (online) online->validate();
}

std::optional<SolveStatus> checkTermination(const Residuals& r, const SolveConfig& cfg,
                                            std::int64_t iteration, double elapsed_sec) {
  if (hasNan(r)) return SolveStatus::kNumericalError;
  if (belowTolerance(r, cfg.tolerance)) return SolveStatus::kOptimal;
  if (iteration >= cfg.iteration_limit) return SolveStatus::kIterationLimit;
  if (elapsed_sec >= cfg.time_limit_sec) return SolveStatus::kTimeLimit;
  return std::nullopt;
}

SolveReport solve(const LpProblem& problem, const SolveConfig& cfg) {
  cfg.validate();
  problem.validate();
  const auto start = Clock::now();
  const Index n = problem.numCols();
  const Index m = problem.numRows();

  const ScalingRecord rec = buildScalingRecord(problem, cfg);
  const LpProblem work = applyScaling(problem, rec);

  StepController ctrl;
  const bool adaptive = cfg.mode == Mode::kPdlp && !cfg.fixed_step_size;
  if (cfg.fixed_step_size) {
    ctrl.step_size = *cfg.fixed_step_size;
    ctrl.primal_weight = cfg.fixed_primal_weight.value_or(1.0);
  } else if (cfg.mode == Mode::kVanilla) {
    const SafeguardScalars sg = safeguardScalars(work.a, cfg.safeguard_ratio);
    ctrl.step_size = std::sqrt(sg.primal * sg.dual);
    ctrl.primal_weight = cfg.fixed_primal_weight.value_or(std::sqrt(sg.dual / sg.primal));
  } else {
    const Vector row_inf = axisNorms(work.a, Axis::kRows, NormKind::kInf);
    const double max_inf = row_inf.size() > 0 ? row_inf.maxCoeff() : 0.0;
    ctrl.step_size = max_inf > 0.0 ? 1.0 / max_inf : 1.0;
    ctrl.primal_weight = cfg.fixed_primal_weight.value_or(primalWeightInit(work));
  }

  SaddleState st = SaddleState::initial(work);
  DiagPreconditioner pre = DiagPreconditioner::identity(n, m);
  std::optional<OnlineLearner> learner;
  if (cfg.online) learner.emplace(*cfg.online, n, m);

  const ResidualEvaluator eval(problem, work, rec);
  SolveReport report;
  {
    const Residuals res0 = eval.fromState(st);
    report.trace.push_back({0, res0.rel_primal, res0.rel_dual, res0.rel_gap, compositeKkt(res0)});
  }
  RestartState rst = RestartState::initial(st, report.trace.front().kkt);
  const bool use_restarts = cfg.mode == Mode::kPdlp && cfg.restarts;

  // Declares OPTIMAL only if the plain original-space residuals confirm it.
  Vector final_primal = st.primal;
  Vector final_dual = st.dual;
  auto confirmOptimal = [&](const Vector& x_scaled, const Vector& dual_scaled) {
    const Vector x = scaledToOriginalPrimal(rec, x_scaled);
    const Vector dual = scaledToOriginalDual(rec, dual_scaled);
    return belowTolerance(computeResiduals(problem, x, dual), cfg.tolerance);
  };

  std::optional<SolveStatus> status;
  std::int64_t k = 0;
  while (k < cfg.iteration_limit) {
    StepOutcome out;
    if (adaptive) {
      out = adaptiveStepsize(work, st, pre, ctrl);
      if (learner && out.finite && k % learner->config.update_period == 0) {
        Vector g_primal = primalGradFromStep(out.dual_slack, out.pre_projection,
                                             out.step_size_used, ctrl.primal_weight);
        Vector g_dual = dualGradFromStep(out.primal_residual, out.extrap_residual,
                                         out.step_size_used, ctrl.primal_weight);
        if (learner->config.normalize) {
          std::tie(g_primal, g_dual) = normalizeGradients(
              std::move(g_primal), std::move(g_dual), out.dual_slack, out.primal_residual);
        }
        pre = ogdUpdate(*learner, pre, g_primal, g_dual);
      }
    } else if (learner) {
      OnlineStepResult res =
          onlineStep(work, st, pre, *learner, ctrl.step_size, ctrl.primal_weight, k);
      out = std::move(res.step);
      pre = std::move(res.preconditioner);
    } else {
      out = pdhgStep(work, st, pre, ctrl.step_size, ctrl.primal_weight);
    }
    st = std::move(out.next);
    st.addToAverage(out.step_size_used);
    ++k;

    if (!out.finite) {
      status = SolveStatus::kNumericalError;
      final_primal = st.primal;
      final_dual = st.dual;
      break;
    }

    const bool at_trace = k % cfg.trace_stride == 0;
    const bool at_check = k % cfg.check_stride == 0 || k == cfg.iteration_limit;
    if (!at_trace && !at_check) continue;

    const Residuals res_cur = eval.fromState(st);
    if (at_trace) {
      report.trace.push_back(
          {k, res_cur.rel_primal, res_cur.rel_dual, res_cur.rel_gap, compositeKkt(res_cur)});
    }
    if (!at_check) continue;

    const Vector avg_primal = st.averagePrimal();
    const Vector avg_dual = st.averageDual();
    const Residuals res_avg = eval.fromPoint(avg_primal, avg_dual);
    const double elapsed = secondsSince(start);

    if (hasNan(res_cur) || hasNan(res_avg)) {
      status = SolveStatus::kNumericalError;
      final_primal = st.primal;
      final_dual = st.dual;
      break;
    }

    const double kkt_cur = compositeKkt(res_cur);
    const double kkt_avg = compositeKkt(res_avg);
    const bool cur_ok = belowTolerance(res_cur, cfg.tolerance);
    const bool avg_ok = belowTolerance(res_avg, cfg.tolerance);
    if (cur_ok || avg_ok) {
      const bool pick_avg = avg_ok && (!cur_ok || kkt_avg <= kkt_cur);
      const Vector& cand_primal = pick_avg ? avg_primal : st.primal;
      const Vector& cand_dual = pick_avg ? avg_dual : st.dual;
      if (confirmOptimal(cand_primal, cand_dual)) {
        status = SolveStatus::kOptimal;
        final_primal = cand_primal;
        final_dual = cand_dual;
        break;
      }
    }
    if (elapsed >= cfg.time_limit_sec || k >= cfg.iteration_limit) {
      status = elapsed >= cfg.time_limit_sec ? SolveStatus::kTimeLimit
                                             : SolveStatus::kIterationLimit;
      const bool pick_avg = kkt_avg <= kkt_cur;
      final_primal = pick_avg ? avg_primal : st.primal;
      final_dual = pick_avg ? avg_dual : st.dual;
      break;
    }

    if (use_restarts) {
      const RestartDecision decision = restartCheck(rst, k, kkt_cur, kkt_avg);
      if (decision != RestartDecision::kNone) {
        const double chosen_metric =
            decision == RestartDecision::kToAverage ? kkt_avg : kkt_cur;
        const DiagPreconditioner before = cfg.restart_callback ? pre : DiagPreconditioner{};
        applyRestart(rst, st, work, decision, chosen_metric, &ctrl, cfg.update_primal_weight);
        if (cfg.restart_callback) cfg.restart_callback({k, before, pre});
      }
    }
  }

  if (!status) {  // loop ran off the iteration budget between checks
    status = SolveStatus::kIterationLimit;
    final_primal = st.primal;
    final_dual = st.dual;
  }

  if (report.trace.empty() || report.trace.back().iteration != k) {
    const Residuals res_last = eval.fromState(st);
    report.trace.push_back(
        {k, res_last.rel_primal, res_last.rel_dual, res_last.rel_gap, compositeKkt(res_last)});
  }

  report.status = *status;
  report.iterations = k;
  report.wall_time_sec = secondsSince(start);
  report.primal = scaledToOriginalPrimal(rec, final_primal);
  report.dual = scaledToOriginalDual(rec, final_dual);
  report.residuals = computeResiduals(problem, report.primal, report.dual);
  report.objective = report.residuals.primal_objective;
  report.restart_count = rst.restart_count;
  report.final_step_size = ctrl.step_size;
  report.final_primal_weight = ctrl.primal_weight;
  return report;
}

void writeTraceCsv(const std::vector<TraceRow>& trace, std::ostream& out) {
  out << "iter,rel_primal,rel_dual,rel_gap,kkt\n";
  out.precision(12);
  for (const TraceRow& row : trace) {
    out << row.iteration << ',' << row.rel_primal << ',' << row.rel_dual << ',' << row.rel_gap
        << ',' << row.kkt << '\n';
  }
}

}  // namespace opdhg

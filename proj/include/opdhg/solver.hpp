#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "opdhg/online.hpp"
#include "opdhg/pdhg.hpp"
#include "opdhg/precond.hpp"
#include "opdhg/problem.hpp"
#include "opdhg/step_control.hpp"

namespace opdhg {

enum class Mode { kVanilla, kPdlp };

enum class Scaling { kNone, kL2, kRuiz, kRuizL2, kPockChambolle };

enum class SolveStatus { kOptimal, kIterationLimit, kTimeLimit, kNumericalError };

const char* toString(SolveStatus status);
const char* toString(Mode mode);
const char* toString(Scaling scaling);

struct TraceRow {
  std::int64_t iteration = 0;
  double rel_primal = 0.0;
  double rel_dual = 0.0;
  double rel_gap = 0.0;
  double kkt = 0.0;
};

struct RestartInfo {
  std::int64_t iteration;
  const DiagPreconditioner& before;
  const DiagPreconditioner& after;
};

struct SolveConfig {
  double tolerance = 1e-4;
  std::int64_t iteration_limit = 50'000;
  double time_limit_sec = 600.0;
  Mode mode = Mode::kPdlp;

  Scaling scaling = Scaling::kRuizL2;
  int ruiz_rounds = 10;
  double pock_chambolle_beta = 1.0;
  double safeguard_ratio = 1.0;  // t/s ratio of the vanilla step scalars

  std::optional<OnlineConfig> online;

  bool restarts = true;             // pdlp mode only
  bool update_primal_weight = true; // re-balance ω at restarts
  std::optional<double> fixed_step_size;     // disables step-size adaptivity
  std::optional<double> fixed_primal_weight; // overrides ω in any mode

  int check_stride = 40;  // termination/restart cadence
  int trace_stride = 10;  // residual trace cadence

  std::function<void(const RestartInfo&)> restart_callback;

  void validate() const;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kIterationLimit;
  std::int64_t iterations = 0;
  double wall_time_sec = 0.0;
  Vector primal;        // standard-form units
  Vector dual;
  Residuals residuals;  // evaluated on the unscaled problem at (primal, dual)
  double objective = 0.0;
  std::vector<TraceRow> trace;
  std::int64_t restart_count = 0;
  double final_step_size = 0.0;
  double final_primal_weight = 0.0;
};

/// Termination test for one candidate point. NaN residuals dominate, then
/// the three-part relative optimality test, then the iteration and time
/// limits. Returns nothing while the solve should continue.
std::optional<SolveStatus> checkTermination(const Residuals& r, const SolveConfig& cfg,
                                            std::int64_t iteration, double elapsed_sec);

/// Full solve: static rescaling per config, zero starting point with identity
/// online preconditioners, then the configured iteration (fixed-step vanilla
/// or adaptive-step with restarts) with optional online preconditioning.
/// Never throws on valid input; numerical failures surface as a status.
SolveReport solve(const LpProblem& problem, const SolveConfig& cfg);

void writeTraceCsv(const std::vector<TraceRow>& trace, std::ostream& out);

}  // namespace opdhg

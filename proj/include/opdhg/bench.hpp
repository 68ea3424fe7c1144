#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opdhg/solver.hpp"
#include "opdhg/standard_form.hpp"

namespace opdhg {

/// Shifted geometric mean (∏(vᵢ + shift))^{1/N} − shift, computed in log
/// space. Values must be nonnegative and the input non-empty.
double shiftedGeometricMean(const std::vector<double>& values, double shift);

/// Plain geometric mean of strictly positive values.
double geometricMean(const std::vector<double>& values);

struct VariantSpec {
  std::string name;
  Mode mode = Mode::kVanilla;
  bool normalize = false;
  int update_period = 20;               // φ
  std::vector<double> lr_grid = {0.0};  // online learning rates to try per instance
  Scaling scaling = Scaling::kRuizL2;
  Scheduler scheduler = Scheduler::kAdaGrad;
};

struct InstanceResult {
  std::string instance;
  std::string variant;
  std::string status;  // OPTIMAL, ITERATION_LIMIT, TIME_LIMIT, NUMERICAL_ERROR or LOAD_ERROR
  std::int64_t iterations = 0;
  double wall_time_sec = 0.0;  // chosen grid run
  double grid_time_sec = 0.0;  // all grid runs together
  double learning_rate = 0.0;  // chosen grid point
  double rel_primal = 0.0;
  double rel_dual = 0.0;
  double rel_gap = 0.0;
  double objective = 0.0;  // in the units of the input file

  bool optimal() const { return status == "OPTIMAL"; }
};

struct AggregateReport {
  std::string variant;
  std::string baseline;
  int attempted = 0;
  int opt_count = 0;
  int common_count = 0;  // instances optimal under every compared variant
  double sgm10_iterations = 0.0;
  double mean_iterations = 0.0;
  double gm_time_sec = 0.0;
  double mean_time_sec = 0.0;
  int improved = 0;
  int worsened = 0;
};

/// Iteration/time aggregates and improved/worsened counts of `variant`
/// against `baseline`, restricted to instances where both (or, when
/// `common_override` is given, all compared variants) reached OPTIMAL.
/// Solve times are clamped below at 1e-3 s before the geometric mean.
AggregateReport compare(const std::vector<InstanceResult>& baseline,
                        const std::vector<InstanceResult>& variant,
                        const std::optional<std::set<std::string>>& common_override = {});

struct Manifest {
  std::vector<std::string> instances;
  std::vector<VariantSpec> variants;  // the first variant is the baseline
  double tolerance = 1e-4;
  std::int64_t iteration_limit = 50'000;
  double time_limit_sec = 600.0;
  std::string out_dir = "report";
  std::uint64_t seed = 0;  // recorded for reproducibility bookkeeping
};

/// Reads the subset of TOML the run manifests use: top-level scalars and
/// single-line arrays, plus [[variant]] tables.
Manifest loadManifest(const std::string& path);
Manifest parseManifest(std::istream& in);

struct LoadedInstance {
  std::string name;
  GeneralLp general;
  StandardFormLp standard;
};

/// Reads an .mps/.mps.gz file and reduces it to standard form. The instance
/// name is the file stem.
LoadedInstance loadInstance(const std::string& path);

struct SuiteResult {
  std::vector<InstanceResult> results;        // one row per (instance, variant)
  std::vector<AggregateReport> aggregates;    // one per variant, first vs itself
  std::vector<std::vector<TraceRow>> traces;  // parallel to results (chosen run)
};

/// Runs every instance under every variant and learning rate, keeping the
/// grid run with the fewest iterations (optimal runs first, ties to the
/// smaller rate). Unreadable instances become LOAD_ERROR rows and are
/// excluded from the aggregates.
SuiteResult runSuite(const Manifest& manifest);

/// Writes results.csv, aggregate.json and traces/<instance>_<variant>.csv.
void writeSuiteOutputs(const SuiteResult& suite, const Manifest& manifest,
                       const std::string& out_dir);

}  // namespace opdhg

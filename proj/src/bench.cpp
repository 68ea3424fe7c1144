#include "opdhg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "opdhg/log.hpp"

namespace opdhg {

namespace {

constexpr double kTimeClampSec = 1e-3;

std::string fileStem(const std::string& path) {
  std::filesystem::path p(path);
  std::string stem = p.filename().string();
  for (const char* suffix : {".gz", ".mps", ".MPS"}) {
    if (stem.size() > std::strlen(suffix) &&
        stem.compare(stem.size() - std::strlen(suffix), std::string::npos, suffix) == 0) {
      stem.resize(stem.size() - std::strlen(suffix));
    }
  }
  return stem;
}

std::map<std::string, const InstanceResult*> indexByInstance(
    const std::vector<InstanceResult>& results) {
  std::map<std::string, const InstanceResult*> index;
  for (const InstanceResult& r : results) index.emplace(r.instance, &r);
  return index;
}

}  // namespace

double shiftedGeometricMean(const std::vector<double>& values, double shift) {
  if (values.empty()) throw InvalidInputError("shiftedGeometricMean: empty input");
  if (shift < 0.0) throw InvalidInputError("shiftedGeometricMean: negative shift");
  double log_sum = 0.0;
  for (double v : values) {
    if (v < 0.0) throw InvalidInputError("shiftedGeometricMean: negative value");
    log_sum += std::log(v + shift);
  }
  return std::exp(log_sum / static_cast<double>(values.size())) - shift;
}

double geometricMean(const std::vector<double>& values) {
  if (values.empty()) throw InvalidInputError("geometricMean: empty input");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw InvalidInputError("geometricMean: values must be positive");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

AggregateReport compare(const std::vector<InstanceResult>& baseline,
                        const std::vector<InstanceResult>& variant,
                        const std::optional<std::set<std::string>>& common_override) {
  const auto base_index = indexByInstance(baseline);
  const auto var_index = indexByInstance(variant);
  if (base_index.size() != baseline.size() || var_index.size() != variant.size()) {
    throw InvalidInputError("compare: duplicate instance names within a result set");
  }

  std::string missing, extra;
  for (const auto& [name, r] : base_index) {
    if (!var_index.count(name)) missing += (missing.empty() ? "" : ", ") + name;
  }
  for (const auto& [name, r] : var_index) {
    if (!base_index.count(name)) extra += (extra.empty() ? "" : ", ") + name;
  }
  if (!missing.empty() || !extra.empty()) {
    throw InvalidInputError("compare: instance sets differ (missing from variant: [" + missing +
                            "], extra in variant: [" + extra + "])");
  }

  AggregateReport report;
  report.variant = variant.empty() ? "" : variant.front().variant;
  report.baseline = baseline.empty() ? "" : baseline.front().variant;

  std::vector<double> iterations, times;
  for (const auto& [name, var_result] : var_index) {
    const InstanceResult& base_result = *base_index.at(name);
    if (var_result->status == "LOAD_ERROR") continue;
    ++report.attempted;
    if (var_result->optimal()) ++report.opt_count;

    const bool in_common = common_override
                               ? common_override->count(name) > 0
                               : (base_result.optimal() && var_result->optimal());
    if (!in_common) continue;
    ++report.common_count;
    iterations.push_back(static_cast<double>(var_result->iterations));
    times.push_back(std::max(var_result->wall_time_sec, kTimeClampSec));
    if (var_result->iterations < base_result.iterations) ++report.improved;
    if (var_result->iterations > base_result.iterations) ++report.worsened;
  }

  if (!iterations.empty()) {
    report.sgm10_iterations = shiftedGeometricMean(iterations, 10.0);
    double sum = 0.0;
    for (double v : iterations) sum += v;
    report.mean_iterations = sum / static_cast<double>(iterations.size());
    report.gm_time_sec = geometricMean(times);
    sum = 0.0;
    for (double t : times) sum += t;
    report.mean_time_sec = sum / static_cast<double>(times.size());
  }
  return report;
}

LoadedInstance loadInstance(const std::string& path) {
  LoadedInstance inst;
  inst.name = fileStem(path);
  inst.general = readMpsFile(path);
  inst.standard = toStandardForm(inst.general);
  return inst;
}

namespace {

SolveConfig configFor(const Manifest& manifest, const VariantSpec& variant, double lr) {
  SolveConfig cfg;
  cfg.tolerance = manifest.tolerance;
  cfg.iteration_limit = manifest.iteration_limit;
  cfg.time_limit_sec = manifest.time_limit_sec;
  cfg.mode = variant.mode;
  cfg.scaling = variant.scaling;
  OnlineConfig online;
  online.learning_rate = lr;
  online.update_period = variant.update_period;
  online.normalize = variant.normalize;
  online.scheduler = variant.scheduler;
  cfg.online = online;
  return cfg;
}

}  // namespace

SuiteResult runSuite(const Manifest& manifest) {
  if (manifest.variants.empty()) throw InvalidInputError("runSuite: no variants configured");
  SuiteResult suite;

  for (const std::string& path : manifest.instances) {
    std::optional<LoadedInstance> instance;
    std::string load_error;
    try {
      instance = loadInstance(path);
    } catch (const std::exception& err) {
      load_error = err.what();
    }

    for (const VariantSpec& variant : manifest.variants) {
      InstanceResult row;
      row.instance = instance ? instance->name : fileStem(path);
      row.variant = variant.name;
      if (!instance) {
        row.status = "LOAD_ERROR";
        logWarn("bench: skipping '" + path + "': " + load_error);
        suite.results.push_back(std::move(row));
        suite.traces.emplace_back();
        continue;
      }

      std::vector<double> grid = variant.lr_grid.empty() ? std::vector<double>{0.0}
                                                         : variant.lr_grid;
      std::sort(grid.begin(), grid.end());
      std::optional<SolveReport> best;
      double best_lr = 0.0;
      double grid_time = 0.0;
      for (double lr : grid) {
        SolveReport report = solve(instance->standard.problem, configFor(manifest, variant, lr));
        grid_time += report.wall_time_sec;
        const bool better =
            !best ||
            std::make_pair(report.status != SolveStatus::kOptimal, report.iterations) <
                std::make_pair(best->status != SolveStatus::kOptimal, best->iterations);
        if (better) {
          best = std::move(report);
          best_lr = lr;
        }
      }

      row.status = toString(best->status);
      row.iterations = best->iterations;
      row.wall_time_sec = best->wall_time_sec;
      row.grid_time_sec = grid_time;
      row.learning_rate = best_lr;
      row.rel_primal = best->residuals.rel_primal;
      row.rel_dual = best->residuals.rel_dual;
      row.rel_gap = best->residuals.rel_gap;
      row.objective = best->objective + instance->standard.map.objective_offset;
      suite.results.push_back(std::move(row));
      suite.traces.push_back(std::move(best->trace));
    }
  }

  // Aggregates use the common-OPTIMAL set across every variant.
  std::map<std::string, std::vector<InstanceResult>> by_variant;
  for (const InstanceResult& r : suite.results) by_variant[r.variant].push_back(r);
  std::set<std::string> common;
  bool first = true;
  for (const VariantSpec& variant : manifest.variants) {
    std::set<std::string> optimal;
    for (const InstanceResult& r : by_variant[variant.name]) {
      if (r.optimal()) optimal.insert(r.instance);
    }
    if (first) {
      common = std::move(optimal);
      first = false;
    } else {
      std::set<std::string> kept;
      std::set_intersection(common.begin(), common.end(), optimal.begin(), optimal.end(),
                            std::inserter(kept, kept.begin()));
      common = std::move(kept);
    }
  }
  const std::vector<InstanceResult>& baseline = by_variant[manifest.variants.front().name];
  for (const VariantSpec& variant : manifest.variants) {
    suite.aggregates.push_back(compare(baseline, by_variant[variant.name], common));
  }
  return suite;
}

void writeSuiteOutputs(const SuiteResult& suite, const Manifest& manifest,
                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "traces");

  std::ofstream csv(fs::path(out_dir) / "results.csv");
  csv.precision(17);
  csv << "instance,variant,status,iterations,time_sec,grid_time_sec,lr,rel_primal,rel_dual,"
         "rel_gap,objective\n";
  for (const InstanceResult& r : suite.results) {
    csv << r.instance << ',' << r.variant << ',' << r.status << ',' << r.iterations << ','
        << r.wall_time_sec << ',' << r.grid_time_sec << ',' << r.learning_rate << ','
        << r.rel_primal << ',' << r.rel_dual << ',' << r.rel_gap << ',' << r.objective << '\n';
  }
  csv.close();

  nlohmann::json doc;
  doc["baseline"] = manifest.variants.front().name;
  doc["seed"] = manifest.seed;
  doc["time_clamp_sec"] = kTimeClampSec;
  doc["variants"] = nlohmann::json::array();
  for (const AggregateReport& agg : suite.aggregates) {
    doc["variants"].push_back({{"name", agg.variant},
                               {"attempted", agg.attempted},
                               {"opt_count", agg.opt_count},
                               {"common_count", agg.common_count},
                               {"sgm10_iterations", agg.sgm10_iterations},
                               {"mean_iterations", agg.mean_iterations},
                               {"gm_time_sec", agg.gm_time_sec},
                               {"mean_time_sec", agg.mean_time_sec},
                               {"improved", agg.improved},
                               {"worsened", agg.worsened}});
  }
  std::ofstream json_out(fs::path(out_dir) / "aggregate.json");
  json_out << doc.dump(2) << "\n";
  json_out.close();

  for (size_t i = 0; i < suite.results.size(); ++i) {
    if (suite.traces[i].empty()) continue;
    const InstanceResult& r = suite.results[i];
    std::ofstream trace_out(fs::path(out_dir) / "traces" / (r.instance + "_" + r.variant + ".csv"));
    writeTraceCsv(suite.traces[i], trace_out);
  }
}

}  // namespace opdhg

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gauge::scenarios {

struct ScenarioConfig
{
  std::string scenario;
  std::string group = "SO3_SO2";
  std::vector<int> shape;  ///< empty: the scenario's default grid
  double dx = 0.0;         ///< 0: the scenario's default spacing
  std::uint64_t seed = 1;
  int samples = 10;
  std::map<std::string, double> tolerances;
  std::filesystem::path output_dir = ".";

  // Set by the convergence driver: one chart, residuals sampled on the nodes of the coarsest grid.
  bool single_chart = false;
  int sample_stride = 1;
};

/// Parses "16x16" (2 to 4 axes). UsageError on malformed input.
std::vector<int> parse_grid(const std::string & text);

/// Parses "name=value" into the override map.
void parse_tolerance(const std::string & text, std::map<std::string, double> & out);

/// Reads a `key = value` file (keys: scenario, group, grid, dx, seed, samples, out, tol.<check>). '#' starts a comment.
ScenarioConfig load_config(const std::filesystem::path & path);

/// UsageError unless scenario and group are registered, Δx > 0, and the grid is 2 to 4 axes of ≥ 4 nodes
/// (after defaults are applied).
void validate(const ScenarioConfig & config);

struct Check
{
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool lower_bound = false;    ///< passes when residual ≥ tolerance (a detection check)
  bool order_tracked = false;  ///< residual scales with Δx
  double seconds = 0.0;
};

struct Report
{
  ScenarioConfig config;
  std::vector<Check> checks;
  bool pass = false;
  double seconds = 0.0;
};

/// Exactly four columns: check,residual,tolerance,pass. Numbers use 17 significant digits.
std::string csv_text(const Report & report);
std::string json_text(const Report & report);

/// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path & path, const std::string & content);

/// `<out>/<scenario>-<group>-<seed>` without extension.
std::filesystem::path report_stem(const ScenarioConfig & config);

/// Writes `<stem>.csv` and `<stem>.json`.
void write_report(const Report & report);

struct ScenarioInfo
{
  std::string name;
  std::string description;
  std::vector<std::string> groups;  ///< models the scenario accepts
  std::vector<std::string> covers;  ///< operations whose theorem-level checks it runs
  std::vector<int> default_shape;
  double default_dx;
};

const std::vector<ScenarioInfo> & registry();

/// Fills an empty grid or zero spacing from the scenario's defaults (UsageError for unknown scenarios).
ScenarioConfig with_defaults(const ScenarioConfig & config);

/// Runs one scenario; tolerance violations give a failing report, bad configs a UsageError.
Report run_scenario(const ScenarioConfig & config);

struct OrderFit
{
  std::string check;
  std::vector<double> residuals;
  double order = 0.0;
  bool order_free = false;  ///< all residuals below 1e-11: Δx-independent, excluded from the fit
  bool monotone = true;
  bool pass = false;
};

struct ConvergenceResult
{
  ScenarioConfig base;
  std::vector<double> spacings;
  double min_order = 0.0;
  std::vector<Report> runs;
  std::vector<OrderFit> fits;
  bool pass = false;
};

/// Least-squares slope of log residual against log Δx.
double fitted_order(const std::vector<double> & spacings, const std::vector<double> & residuals);

/// Fit of one check's residual series: order-free when all are < 1e-11, else monotone decrease and order ≥ min_order.
OrderFit fit_order(const std::string & check, const std::vector<double> & spacings, const std::vector<double> & residuals,
                   double min_order);

/**
 * Runs the scenario at each spacing on a torus of side `length` with one chart, sampling at the
 * coarsest grid's nodes, and fits an order to each Δx-dependent check. Needs ≥ 3 spacings in
 * geometric progression whose side/Δx are integers.
 */
ConvergenceResult convergence_study(const ScenarioConfig & base, const std::vector<double> & spacings,
                                    double length = 8.0, double min_order = 1.8);

/// Order table as CSV with the four report columns (residual = fitted order); also writes it.
Report convergence_report(const ConvergenceResult & result);

}  // namespace gauge::scenarios

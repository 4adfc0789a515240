#include <cmath>

#include "gauge/errors.hpp"
#include "gauge/scenarios/scenarios.hpp"

namespace gauge::scenarios {

namespace {

constexpr double kOrderFree = 1e-11;

int nodes_per_axis(double length, double dx)
{
  const double n = length / dx;
  const long r   = std::lround(n);
  if (r < 4 || std::abs(n - static_cast<double>(r)) > 1e-9 * n) {
    throw UsageError("torus side " + std::to_string(length) + " is not a whole number (≥ 4) of spacings " + std::to_string(dx));
  }
  return static_cast<int>(r);
}

}  // namespace

double fitted_order(const std::vector<double> & spacings, const std::vector<double> & residuals)
{
  if (spacings.size() != residuals.size() || spacings.size() < 2) { throw UsageError("order fit needs ≥ 2 points"); }
  const auto k = static_cast<double>(spacings.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    const double x = std::log(spacings[i]);
    const double y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

OrderFit fit_order(const std::string & check, const std::vector<double> & spacings, const std::vector<double> & residuals,
                   double min_order)
{
  OrderFit fit;
  fit.check      = check;
  fit.residuals  = residuals;
  fit.order_free = true;
  for (double r : residuals) { fit.order_free = fit.order_free && r < kOrderFree; }
  if (fit.order_free) {
    fit.pass = true;
    return fit;
  }
  bool positive = true;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    positive = positive && residuals[i] > 0.0;
    if (i > 0) { fit.monotone = fit.monotone && residuals[i] < residuals[i - 1]; }
  }
  fit.order = positive ? fitted_order(spacings, residuals) : 0.0;
  fit.pass  = positive && fit.monotone && fit.order >= min_order;
  return fit;
}

ConvergenceResult convergence_study(const ScenarioConfig & raw, const std::vector<double> & spacings, double length,
                                    double min_order)
{
  const auto base = with_defaults(raw);
  if (spacings.size() < 3) { throw UsageError("convergence study needs at least 3 spacings"); }
  for (std::size_t i = 1; i < spacings.size(); ++i) {
    if (!(spacings[i] > 0.0 && spacings[i] < spacings[i - 1])) { throw UsageError("spacings must be positive and strictly decreasing"); }
    const double ratio = spacings[i] / spacings[i - 1];
    if (std::abs(ratio - spacings[1] / spacings[0]) > 1e-9) { throw UsageError("spacings must form a geometric progression"); }
  }
  const int coarse = nodes_per_axis(length, spacings.front());

  ConvergenceResult out;
  out.base        = base;
  out.spacings    = spacings;
  out.min_order   = min_order;
  const auto axes = base.shape.size();
  for (double dx : spacings) {
    ScenarioConfig cfg = base;
    const int n        = nodes_per_axis(length, dx);
    cfg.dx             = dx;
    cfg.shape          = std::vector<int>(axes, n);
    cfg.single_chart   = true;
    if (n % coarse != 0) { throw UsageError("spacings must refine the coarsest grid by whole factors"); }
    cfg.sample_stride = n / coarse;
    out.runs.push_back(run_scenario(cfg));
  }

  out.pass = true;
  const auto & first = out.runs.front().checks;
  for (std::size_t j = 0; j < first.size(); ++j) {
    if (!first[j].order_tracked) { continue; }
    std::vector<double> residuals;
    for (const auto & run : out.runs) { residuals.push_back(run.checks.at(j).residual); }
    auto fit = fit_order(first[j].name, spacings, residuals, min_order);
    out.pass = out.pass && fit.pass;
    out.fits.push_back(std::move(fit));
  }
  return out;
}

Report convergence_report(const ConvergenceResult & result)
{
  Report r;
  r.config          = result.base;
  r.config.scenario = result.base.scenario + "-convergence";
  r.pass            = result.pass;
  for (const auto & fit : result.fits) {
    Check c;
    c.name        = fit.check + (fit.order_free ? "-order-free" : "-order");
    c.residual    = fit.order_free ? fit.residuals.back() : fit.order;
    c.tolerance   = fit.order_free ? kOrderFree : result.min_order;
    c.lower_bound = !fit.order_free;
    c.pass        = fit.pass;
    r.checks.push_back(std::move(c));
  }
  for (const auto & run : result.runs) { r.seconds += run.seconds; }
  write_atomic(report_stem(r.config).string() + ".csv", csv_text(r));
  return r;
}

}  // namespace gauge::scenarios

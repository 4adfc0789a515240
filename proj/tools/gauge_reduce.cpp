// gauge-reduce: run verification scenarios and convergence studies from the command line.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "gauge/errors.hpp"
#include "gauge/scenarios/scenarios.hpp"

namespace {

using namespace gauge::scenarios;

struct Options
{
  std::string config;
  std::string group;
  std::string grid;
  double dx = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;
  std::string out;
  std::vector<std::string> tol;
};

void add_common(CLI::App & cmd, Options & o)
{
  cmd.add_option("--config", o.config, "key = value file; command-line options override it");
  cmd.add_option("--group", o.group, "SO3_SO2, SU2_U1 or GL4_SO13");
  cmd.add_option("--grid", o.grid, "node counts per axis, e.g. 16x16");
  cmd.add_option("--dx", o.dx, "grid spacing");
  cmd.add_option("--seed", o.seed, "random seed");
  cmd.add_option("--samples", o.samples, "random configurations per check");
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--tol", o.tol, "tolerance override check=value (repeatable)");
}

ScenarioConfig build_config(const std::string & scenario, const CLI::App & cmd, const Options & o)
{
  ScenarioConfig cfg = o.config.empty() ? ScenarioConfig{} : load_config(o.config);
  if (!scenario.empty()) { cfg.scenario = scenario; }
  if (cmd.count("--group")) { cfg.group = o.group; }
  if (cmd.count("--grid")) { cfg.shape = parse_grid(o.grid); }
  if (cmd.count("--dx")) { cfg.dx = o.dx; }
  if (cmd.count("--seed")) { cfg.seed = o.seed; }
  if (cmd.count("--samples")) { cfg.samples = o.samples; }
  if (cmd.count("--out")) { cfg.output_dir = o.out; }
  for (const auto & t : o.tol) { parse_tolerance(t, cfg.tolerances); }
  if (cfg.scenario.empty()) { throw gauge::UsageError("no scenario given"); }
  return cfg;
}

void print_report(const Report & r)
{
  for (const auto & c : r.checks) {
    fmt::print("{:<4} {:<44} {:>12.4e} {} {:.3e}\n", c.pass ? "ok" : "FAIL", c.name, c.residual, c.lower_bound ? ">=" : "<=",
               c.tolerance);
  }
  fmt::print("{} {} {} seed {}: {} ({:.2f} s)\n", r.config.scenario, r.config.group, fmt::join(r.config.shape, "x"),
             r.config.seed, r.pass ? "PASS" : "FAIL", r.seconds);
}

std::vector<double> parse_list(const std::string & text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) { throw std::invalid_argument(part); }
    } catch (const std::exception &) {
      throw gauge::UsageError("bad spacing list '" + text + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Reduction of gauge theories by Higgs fields: verification scenarios"};
  app.require_subcommand(1);

  auto * list = app.add_subcommand("list", "list scenarios and the groups they run on");

  Options run_opts;
  std::string run_scenario_name;
  auto * run = app.add_subcommand("run", "run one scenario and write <out>/<scenario>-<group>-<seed>.{csv,json}");
  run->add_option("scenario", run_scenario_name, "scenario name (see list)");
  add_common(*run, run_opts);

  Options conv_opts;
  std::string conv_scenario_name;
  std::string dx_list = "0.5,0.25,0.125";
  double length       = 8.0;
  double min_order    = 1.8;
  auto * conv = app.add_subcommand("converge", "fit convergence orders over a sequence of spacings");
  conv->add_option("scenario", conv_scenario_name, "scenario name")->required();
  add_common(*conv, conv_opts);
  conv->add_option("--dx-list", dx_list, "comma-separated spacings, coarsest first");
  conv->add_option("--length", length, "torus side length");
  conv->add_option("--min-order", min_order, "smallest accepted order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto & s : registry()) {
        fmt::print("{:<22} [{}] {}\n", s.name, fmt::join(s.groups, ","), s.description);
      }
      return 0;
    }
    if (run->parsed()) {
      const auto cfg = build_config(run_scenario_name, *run, run_opts);
      const auto r   = run_scenario(cfg);
      write_report(r);
      print_report(r);
      return r.pass ? 0 : 1;
    }
    const auto cfg = build_config(conv_scenario_name, *conv, conv_opts);
    validate(cfg);
    const auto result = convergence_study(cfg, parse_list(dx_list), length, min_order);
    for (const auto & fit : result.fits) {
      fmt::print("{:<4} {:<36} residuals {:.3e}  order {}\n", fit.pass ? "ok" : "FAIL", fit.check, fmt::join(fit.residuals, " "),
                 fit.order_free ? std::string("(order-free)") : fmt::format("{:.2f}", fit.order));
    }
    const auto r = convergence_report(result);
    fmt::print("{} {} convergence: {} ({:.2f} s)\n", cfg.scenario, cfg.group, result.pass ? "PASS" : "FAIL", r.seconds);
    return result.pass ? 0 : 1;
  } catch (const gauge::UsageError & e) {
    std::cerr << "gauge-reduce: " << e.what() << "\n";
    return 2;
  } catch (const std::exception & e) {
    std::cerr << "gauge-reduce: error: " << e.what() << "\n";
    return 3;
  }
}

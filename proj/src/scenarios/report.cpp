#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gauge/errors.hpp"
#include "gauge/scenarios/scenarios.hpp"

namespace gauge::scenarios {

namespace {

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) { return ""; }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string & text, const std::string & what)
{
  try {
    std::size_t used = 0;
    const double v   = std::stod(text, &used);
    if (used != text.size()) { throw UsageError(""); }
    return v;
  } catch (const std::exception &) {
    throw UsageError("invalid number for " + what + ": '" + text + "'");
  }
}

std::uint64_t parse_seed(const std::string & text)
{
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError("seed must be an unsigned integer: '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception &) {
    throw UsageError("seed out of range: '" + text + "'");
  }
}

std::string number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::vector<int> parse_grid(const std::string & text)
{
  std::vector<int> shape;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 6) {
      throw UsageError("grid must look like 16x16: '" + text + "'");
    }
    shape.push_back(std::stoi(part));
  }
  if (shape.size() < 2 || shape.size() > 4) { throw UsageError("grid needs 2 to 4 axes: '" + text + "'"); }
  return shape;
}

void parse_tolerance(const std::string & text, std::map<std::string, double> & out)
{
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) { throw UsageError("tolerance override must be name=value: '" + text + "'"); }
  const std::string key = trim(text.substr(0, eq));
  const double v        = parse_double(trim(text.substr(eq + 1)), key);
  if (!(v >= 0.0)) { throw UsageError("tolerance must be non-negative: '" + text + "'"); }
  out[key] = v;
}

ScenarioConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw UsageError("cannot read config file " + path.string()); }
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) { line.erase(hash); }
    line = trim(line);
    if (line.empty()) { continue; }
    const auto eq = line.find('=');
    if (eq == std::string::npos) { throw UsageError(fmt::format("{}:{}: expected key = value", path.string(), lineno)); }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "scenario") {
      cfg.scenario = val;
    } else if (key == "group") {
      cfg.group = val;
    } else if (key == "grid") {
      cfg.shape = parse_grid(val);
    } else if (key == "dx") {
      cfg.dx = parse_double(val, "dx");
    } else if (key == "seed") {
      cfg.seed = parse_seed(val);
    } else if (key == "samples") {
      cfg.samples = static_cast<int>(parse_double(val, "samples"));
    } else if (key == "out") {
      cfg.output_dir = val;
    } else if (key.rfind("tol.", 0) == 0) {
      parse_tolerance(key.substr(4) + "=" + val, cfg.tolerances);
    } else {
      throw UsageError(fmt::format("{}:{}: unknown key '{}'", path.string(), lineno, key));
    }
  }
  return cfg;
}

std::string csv_text(const Report & report)
{
  std::string out = "check,residual,tolerance,pass\n";
  for (const auto & c : report.checks) {
    out += fmt::format("{},{},{},{}\n", c.name, number(c.residual), number(c.tolerance), c.pass ? "true" : "false");
  }
  return out;
}

std::string json_text(const Report & report)
{
  const auto & cfg = report.config;
  nlohmann::ordered_json j;
  j["scenario"] = cfg.scenario;
  j["group"]    = cfg.group;
  j["grid"]     = {{"n", cfg.shape.size()}, {"shape", cfg.shape}, {"dx", cfg.dx}};
  j["seed"]     = cfg.seed;
  j["samples"]  = cfg.samples;
  j["tolerance_overrides"] = cfg.tolerances;
  auto checks = nlohmann::ordered_json::array();
  for (const auto & c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"comparison", c.lower_bound ? ">=" : "<="},
                      {"order_tracked", c.order_tracked},
                      {"pass", c.pass},
                      {"seconds", c.seconds}});
  }
  j["checks"]  = std::move(checks);
  j["pass"]    = report.pass;
  j["seconds"] = report.seconds;
  return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path & path, const std::string & content)
{
  if (path.has_parent_path()) { std::filesystem::create_directories(path.parent_path()); }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) { throw Error("cannot write " + tmp.string()); }
    out << content;
    out.flush();
    if (!out) { throw Error("write failed for " + tmp.string()); }
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path report_stem(const ScenarioConfig & config)
{
  return config.output_dir / fmt::format("{}-{}-{}", config.scenario, config.group, config.seed);
}

void write_report(const Report & report)
{
  const auto stem = report_stem(report.config);
  write_atomic(stem.string() + ".csv", csv_text(report));
  write_atomic(stem.string() + ".json", json_text(report));
}

}  // namespace gauge::scenarios

#include "gauge/base/random_fields.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "gauge/lie/group_model.hpp"

namespace gauge::base {

double uniform_pm1(std::mt19937_64 & rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

FieldScales default_scales(const lie::GroupModel & model)
{
  if (model.name() == "GL4_SO13") { return {0.1, 0.1, 0.3, 1.0}; }
  return {0.5, 0.6, 1.0, 1.0};
}

FourierField::FourierField(const BaseGrid & grid, double amplitude, std::mt19937_64 & rng, int max_mode)
  : length_(grid.dim())
{
  const int n = grid.dim();
  for (int a = 0; a < n; ++a) { length_(a) = grid.extent(a); }
  const int side = 2 * max_mode + 1;
  int count      = 1;
  for (int a = 0; a < n; ++a) { count *= side; }
  const double scale = amplitude / std::sqrt(static_cast<double>(count));
  for (int m = 0; m < count; ++m) {
    Vec k(n);
    int rem = m;
    for (int a = 0; a < n; ++a) {
      k(a) = rem % side - max_mode;
      rem /= side;
    }
    k_.push_back(k);
    a_.push_back(scale * uniform_pm1(rng));
    b_.push_back(scale * uniform_pm1(rng));
  }
}

double FourierField::operator()(const Vec & x) const
{
  double v = 0.0;
  for (std::size_t m = 0; m < k_.size(); ++m) {
    const double ph = 2.0 * std::numbers::pi * (k_[m].array() * x.array() / length_.array()).sum();
    v += a_[m] * std::cos(ph) + b_[m] * std::sin(ph);
  }
  return v;
}

Vec FourierField::gradient(const Vec & x) const
{
  Vec g = Vec::Zero(x.size());
  for (std::size_t m = 0; m < k_.size(); ++m) {
    const Vec w     = 2.0 * std::numbers::pi * (k_[m].array() / length_.array()).matrix();
    const double ph = w.dot(x);
    g += (-a_[m] * std::sin(ph) + b_[m] * std::cos(ph)) * w;
  }
  return g;
}

std::vector<Vec> random_vector_field(const BaseGrid & grid, int dim, double amplitude, std::mt19937_64 & rng,
                                     const std::vector<int> & support)
{
  std::vector<int> idx = support;
  if (idx.empty()) {
    for (int i = 0; i < dim; ++i) { idx.push_back(i); }
  }
  std::vector<FourierField> comps;
  for (std::size_t i = 0; i < idx.size(); ++i) { comps.emplace_back(grid, amplitude, rng); }
  std::vector<Vec> out(static_cast<std::size_t>(grid.num_nodes()), Vec::Zero(dim));
  for (int node = 0; node < grid.num_nodes(); ++node) {
    const Vec x = grid.position(node);
    for (std::size_t i = 0; i < idx.size(); ++i) { out[static_cast<std::size_t>(node)](idx[i]) = comps[i](x); }
  }
  return out;
}

std::vector<Mat> random_matrix_field(const BaseGrid & grid, int rows, double amplitude, std::mt19937_64 & rng)
{
  const int n    = grid.dim();
  const auto raw = random_vector_field(grid, rows * n, amplitude, rng);
  std::vector<Mat> out;
  out.reserve(raw.size());
  for (const auto & v : raw) { out.push_back(Eigen::Map<const Mat>(v.data(), rows, n)); }
  return out;
}

namespace {

std::vector<Mat> exp_of_algebra_field(const lie::GroupModel & model, const std::vector<Vec> & coeffs)
{
  std::vector<Mat> out;
  out.reserve(coeffs.size());
  for (const auto & c : coeffs) { out.push_back(lie::matrix_exp(model.algebra().to_matrix(c))); }
  return out;
}

}  // namespace

std::vector<Mat> random_group_function(const BaseGrid & grid, const lie::GroupModel & model, double amplitude,
                                       std::mt19937_64 & rng, const std::vector<int> & indices)
{
  return exp_of_algebra_field(model, random_vector_field(grid, model.algebra().dim(), amplitude, rng, indices));
}

std::vector<Vec> random_higgs(const BaseGrid & grid, const lie::GroupModel & model, double amplitude,
                              std::mt19937_64 & rng)
{
  const auto f = model.algebra().f_indices();
  const auto g = random_group_function(grid, model, amplitude, rng, std::vector<int>(f.begin(), f.end()));
  std::vector<Vec> out;
  out.reserve(g.size());
  for (const auto & gi : g) { out.push_back(model.act(gi, model.center())); }
  return out;
}

GeneratedAtlas generate_atlas(const BaseGrid & grid, const lie::GroupModel & model, std::string tag,
                              std::vector<Chart> charts, double amplitude, std::mt19937_64 & rng)
{
  std::vector<std::vector<Mat>> gauges;
  for (std::size_t c = 0; c < charts.size(); ++c) { gauges.push_back(random_group_function(grid, model, amplitude, rng)); }
  std::vector<std::vector<Mat>> local(charts.size());
  for (std::size_t c = 0; c < charts.size(); ++c) {
    for (int node : charts[c].nodes) { local[c].push_back(gauges[c][static_cast<std::size_t>(node)]); }
  }
  Atlas atlas = atlas_from_chart_gauges(grid, model, std::move(tag), std::move(charts), local);
  return {std::move(atlas), std::move(gauges)};
}

HiggsField restrict_higgs(const GeneratedAtlas & gen, const std::vector<Vec> & h)
{
  const auto & atlas = gen.atlas;
  const auto & model = atlas.model();
  auto out           = HiggsField::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    const auto & ch = atlas.chart(c);
    for (int i = 0; i < ch.size(); ++i) {
      const int node = ch.nodes[static_cast<std::size_t>(i)];
      out.set(c, i, model.act(gen.gauge(c, node).inverse(), h[static_cast<std::size_t>(node)]));
    }
  }
  return out;
}

EquivariantFunction restrict_equivariant(const GeneratedAtlas & gen, const std::vector<Mat> & f)
{
  const auto & atlas = gen.atlas;
  auto vals          = ChartField<Mat>::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    const auto & ch = atlas.chart(c);
    for (int i = 0; i < ch.size(); ++i) {
      const int node = ch.nodes[static_cast<std::size_t>(i)];
      const Mat & g  = gen.gauge(c, node);
      vals.set(c, i, g.inverse() * f[static_cast<std::size_t>(node)] * g);
    }
  }
  return with_jets(atlas, std::move(vals), atlas.tag(), atlas.tag());
}

GroupField chart_gauge_field(const GeneratedAtlas & gen)
{
  const auto & atlas = gen.atlas;
  auto vals          = ChartField<Mat>::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    const auto & ch = atlas.chart(c);
    for (int i = 0; i < ch.size(); ++i) { vals.set(c, i, gen.gauge(c, ch.nodes[static_cast<std::size_t>(i)])); }
  }
  return with_jets(atlas, std::move(vals), atlas.tag() + "/global", atlas.tag());
}

MatterField restrict_matter(const GeneratedAtlas & gen, const AdaptedAtlas & adapted, const std::vector<Vec> & h,
                            const std::vector<Vec> & y)
{
  const auto & atlas = gen.atlas;
  const auto & model = atlas.model();
  int global_chart   = -1;
  double best        = -1.0;
  for (int c = 0; c < model.num_coset_charts(); ++c) {
    double marg = std::numeric_limits<double>::infinity();
    for (const auto & s : h) { marg = std::min(marg, model.chart_margin(s, c)); }
    if (marg > best) {
      best         = marg;
      global_chart = c;
    }
  }
  if (!(best > lie::kChartMargin)) { throw ChartDomainError("global Higgs field fits no single section chart"); }

  auto out = MatterField::shaped(adapted.atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    const auto & ch = atlas.chart(c);
    for (int i = 0; i < ch.size(); ++i) {
      if (!adapted.gauge.values.ok(c, i)) { continue; }
      const auto node = static_cast<std::size_t>(ch.nodes[static_cast<std::size_t>(i)]);
      const Mat k     = model.section(h[node], global_chart).inverse() * gen.gauge(c, static_cast<int>(node))
                    * adapted.gauge.values.at(c, i);
      out.set(c, i, model.fiber_rep(k.inverse()) * y[node]);
    }
  }
  return out;
}

}  // namespace gauge::base

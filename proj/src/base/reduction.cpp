#include "gauge/base/reduction.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "gauge/lie/group.hpp"

namespace gauge::base {

namespace {

std::string adapted_tag(const Atlas & atlas) { return atlas.tag() + "/adapted"; }

}  // namespace

std::vector<int> assign_coset_charts(const Atlas & atlas, const HiggsField & h)
{
  require_tag(atlas, h, "Higgs field");
  const auto & model = atlas.model();
  std::vector<int> out;
  for (int a = 0; a < atlas.num_charts(); ++a) {
    int best         = -1;
    double best_marg = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < model.num_coset_charts(); ++c) {
      double marg = std::numeric_limits<double>::infinity();
      for (int i = 0; i < atlas.chart(a).size(); ++i) {
        if (h.ok(a, i)) { marg = std::min(marg, model.chart_margin(h.at(a, i), c)); }
      }
      if (marg > best_marg) {
        best_marg = marg;
        best      = c;
      }
    }
    if (!(best_marg > lie::kChartMargin)) {
      throw ChartDomainError("Higgs field leaves every section chart on atlas chart " + std::to_string(a)
                             + "; a finer cover is needed");
    }
    out.push_back(best);
  }
  return out;
}

std::optional<Mat> higgs_jet(const Atlas & atlas, const HiggsField & h, int chart, int local)
{
  if (!h.ok(chart, local)) { return std::nullopt; }
  const auto dh = gradient(atlas, h, chart, local);
  if (!dh) { return std::nullopt; }
  const auto & model = atlas.model();
  const Vec & s      = h.at(chart, local);
  Mat out(s.size(), static_cast<Eigen::Index>(dh->size()));
  for (std::size_t l = 0; l < dh->size(); ++l) { out.col(static_cast<Eigen::Index>(l)) = model.tangent_projection(s, (*dh)[l]); }
  return out;
}

AdaptedAtlas adapt_atlas(const Atlas & atlas, const HiggsField & h, GaugeJets jets)
{
  const auto charts  = assign_coset_charts(atlas, h);
  const auto & model = atlas.model();
  const std::string tag = adapted_tag(atlas);

  auto vals = ChartField<Mat>::shaped(atlas);
  for (int a = 0; a < atlas.num_charts(); ++a) {
    for (int i = 0; i < atlas.chart(a).size(); ++i) {
      if (h.ok(a, i)) { vals.set(a, i, model.section(h.at(a, i), charts[static_cast<std::size_t>(a)])); }
    }
  }
  GroupField gauge = with_jets(atlas, std::move(vals), atlas.tag(), tag);
  if (jets == GaugeJets::chain_rule) {
    for (int a = 0; a < atlas.num_charts(); ++a) {
      for (int i = 0; i < atlas.chart(a).size(); ++i) {
        gauge.derivatives.valid[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = 0;
        const auto dh = higgs_jet(atlas, h, a, i);
        if (!dh) { continue; }
        std::vector<Mat> dg;
        for (Eigen::Index l = 0; l < dh->cols(); ++l) {
          dg.push_back(model.section_derivative(h.at(a, i), charts[static_cast<std::size_t>(a)], dh->col(l)));
        }
        gauge.derivatives.set(a, i, std::move(dg));
      }
    }
  }

  Atlas adapted(atlas.grid(), model, tag, atlas.charts());
  std::vector<Mat> inv(static_cast<std::size_t>(atlas.num_charts()));
  for (int a = 0; a < atlas.num_charts(); ++a) {
    const auto & ca = atlas.chart(a);
    for (int b = 0; b < atlas.num_charts(); ++b) {
      if (a == b) { continue; }
      const auto & cb = atlas.chart(b);
      for (int i = 0; i < ca.size(); ++i) {
        const int node = ca.nodes[static_cast<std::size_t>(i)];
        if (!cb.contains(node)) { continue; }
        const int j = cb.local_index(node);
        if (!gauge.values.ok(a, i) || !gauge.values.ok(b, j)) { throw StructureError("Higgs field missing on an overlap"); }
        adapted.set_transition(a, b, node,
                               gauge.values.at(a, i).inverse() * atlas.transition(a, b, node) * gauge.values.at(b, j));
      }
    }
  }
  return {std::move(adapted), std::move(gauge), charts};
}

double higgs_compatibility_residual(const Atlas & atlas, const HiggsField & h)
{
  require_tag(atlas, h, "Higgs field");
  double worst = 0.0;
  for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    for (int a : cs) {
      const int i = atlas.chart(a).local_index(node);
      for (int b : cs) {
        const int j = atlas.chart(b).local_index(node);
        if (a == b || !h.ok(a, i) || !h.ok(b, j)) { continue; }
        worst = std::max(worst, max_abs(h.at(a, i) - atlas.model().act(atlas.transition(a, b, node), h.at(b, j))));
      }
    }
  }
  return worst;
}

double higgs_center_residual(const lie::GroupModel & model, const HiggsField & h)
{
  double worst = 0.0;
  for (int c = 0; c < h.num_charts(); ++c) {
    for (std::size_t i = 0; i < h.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (h.ok(c, static_cast<int>(i))) { worst = std::max(worst, max_abs(h.at(c, static_cast<int>(i)) - model.center())); }
    }
  }
  return worst;
}

HiggsField gauge_higgs(const lie::GroupModel & model, const HiggsField & h, const GroupField & g)
{
  if (h.tag != g.from_tag) { throw StructureError("gauge starts in atlas '" + g.from_tag + "', field is in '" + h.tag + "'"); }
  HiggsField out = h;
  out.tag        = g.to_tag;
  for (int c = 0; c < h.num_charts(); ++c) {
    for (std::size_t i = 0; i < h.values[static_cast<std::size_t>(c)].size(); ++i) {
      const int li = static_cast<int>(i);
      if (h.ok(c, li) && g.values.ok(c, li)) {
        out.set(c, li, model.act(g.values.at(c, li).inverse(), h.at(c, li)));
      } else {
        out.valid[static_cast<std::size_t>(c)][i] = 0;
      }
    }
  }
  return out;
}

double chart_bump(const Atlas & atlas, int chart, int node)
{
  const auto & c = atlas.chart(chart);
  double w       = 1.0;
  for (int ax = 0; ax < atlas.grid().dim(); ++ax) {
    const int len = c.box_length[static_cast<std::size_t>(ax)];
    if (len == atlas.grid().shape()[static_cast<std::size_t>(ax)]) { continue; }
    const double s = std::sin(std::numbers::pi * (c.box_offset(atlas.grid(), node, ax) + 1) / (len + 1));
    w *= s * s;
  }
  return w;
}

HiggsField construct_global_higgs(const Atlas & atlas, const HiggsField & pieces)
{
  const auto & model = atlas.model();
  if (!model.euclidean_fiber()) {
    throw UnsupportedModelError(model.name() + ": coset model is not a Euclidean space, local pieces cannot be blended");
  }
  require_tag(atlas, pieces, "Higgs pieces");
  auto out = HiggsField::shaped(atlas);
  for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    const int ref = cs.front();
    Vec u         = Vec::Zero(model.coset_dim());
    double wsum   = 0.0;
    for (int b : cs) {
      const int j = atlas.chart(b).local_index(node);
      if (!pieces.ok(b, j)) { continue; }
      const double w = chart_bump(atlas, b, node);
      u += w * model.to_euclidean(model.act(atlas.transition(ref, b, node), pieces.at(b, j)));
      wsum += w;
    }
    if (!(wsum > 0.0)) { throw StructureError("no local piece covers node " + std::to_string(node)); }
    const Vec h_ref = model.from_euclidean(u / wsum);
    for (int a : cs) { out.set(a, atlas.chart(a).local_index(node), model.act(atlas.transition(a, ref, node), h_ref)); }
  }
  return out;
}

FieldSet vertical_automorphism(const Atlas & atlas, const EquivariantFunction & f, const FieldSet & fields)
{
  const auto & model = atlas.model();
  require_tag(atlas, fields.higgs, "Higgs field");
  if (f.from_tag != atlas.tag() || f.to_tag != atlas.tag()) { throw StructureError("equivariant function is in another atlas"); }

  FieldSet out;
  out.higgs = HiggsField::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      if (fields.higgs.ok(c, i) && f.values.ok(c, i)) { out.higgs.set(c, i, model.act(f.values.at(c, i), fields.higgs.at(c, i))); }
    }
  }
  if (!fields.matter) { return out; }

  const auto & y         = *fields.matter;
  const auto charts_from = assign_coset_charts(atlas, fields.higgs);
  const auto charts_to   = assign_coset_charts(atlas, out.higgs);
  if (y.tag != adapted_tag(atlas)) { throw StructureError("matter field is not in the atlas adapted to the Higgs field"); }
  MatterField ym = MatterField::shaped(atlas);
  ym.tag         = adapted_tag(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      if (!y.ok(c, i) || !fields.higgs.ok(c, i) || !f.values.ok(c, i)) { continue; }
      const lie::GroupElement g{&model, f.values.at(c, i)};
      const auto r = lie::induced_action(g, lie::CosetPoint{fields.higgs.at(c, i)}, y.at(c, i),
                                         charts_from[static_cast<std::size_t>(c)], charts_to[static_cast<std::size_t>(c)]);
      ym.set(c, i, r.fiber);
    }
  }
  out.matter = std::move(ym);
  return out;
}

double equivariant_compatibility_residual(const Atlas & atlas, const EquivariantFunction & f)
{
  double worst = 0.0;
  for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    for (int a : cs) {
      const int i = atlas.chart(a).local_index(node);
      for (int b : cs) {
        const int j = atlas.chart(b).local_index(node);
        if (a == b || !f.values.ok(a, i) || !f.values.ok(b, j)) { continue; }
        const Mat & r = atlas.transition(a, b, node);
        worst         = std::max(worst, max_abs(f.values.at(a, i) - r * f.values.at(b, j) * r.inverse()));
      }
    }
  }
  return worst;
}

double matter_compatibility_residual(const Atlas & atlas, const MatterField & y)
{
  require_tag(atlas, y, "matter field");
  double worst = 0.0;
  for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    for (int a : cs) {
      const int i = atlas.chart(a).local_index(node);
      for (int b : cs) {
        const int j = atlas.chart(b).local_index(node);
        if (a == b || !y.ok(a, i) || !y.ok(b, j)) { continue; }
        worst = std::max(worst, max_abs(y.at(a, i) - atlas.model().fiber_rep(atlas.transition(a, b, node)) * y.at(b, j)));
      }
    }
  }
  return worst;
}

namespace {

// f ↦ g f g⁻¹ with product-rule jets.
EquivariantFunction conjugate(const EquivariantFunction & f, const GroupField & g, bool forward)
{
  EquivariantFunction out = f;
  const std::string & tag = forward ? g.from_tag : g.to_tag;
  out.from_tag = out.to_tag = tag;
  out.values.tag = out.derivatives.tag = tag;
  for (int c = 0; c < f.values.num_charts(); ++c) {
    for (std::size_t i = 0; i < f.values.values[static_cast<std::size_t>(c)].size(); ++i) {
      const int li = static_cast<int>(i);
      if (!f.values.ok(c, li) || !g.values.ok(c, li)) {
        out.values.valid[static_cast<std::size_t>(c)][i]      = 0;
        out.derivatives.valid[static_cast<std::size_t>(c)][i] = 0;
        continue;
      }
      const Mat gi = g.values.at(c, li);
      const Mat ginv = gi.inverse();
      const Mat & L  = forward ? gi : ginv;
      const Mat & R  = forward ? ginv : gi;
      const Mat & fv = f.values.at(c, li);
      out.values.values[static_cast<std::size_t>(c)][i] = L * fv * R;
      if (!f.derivatives.ok(c, li) || !g.derivatives.ok(c, li)) {
        out.derivatives.valid[static_cast<std::size_t>(c)][i] = 0;
        continue;
      }
      auto & d = out.derivatives.values[static_cast<std::size_t>(c)][i];
      for (std::size_t l = 0; l < d.size(); ++l) {
        const Mat & dg  = g.derivatives.at(c, li)[l];
        const Mat dginv = -ginv * dg * ginv;
        const Mat & dL  = forward ? dg : dginv;
        const Mat & dR  = forward ? dginv : dg;
        d[l]            = dL * fv * R + L * f.derivatives.at(c, li)[l] * R + L * fv * dR;
      }
    }
  }
  return out;
}

}  // namespace

EquivariantFunction extend_subbundle_iso(const EquivariantFunction & f_adapted, const GroupField & adapted_gauge)
{
  if (f_adapted.from_tag != adapted_gauge.to_tag) { throw StructureError("function is not in the adapted atlas"); }
  return conjugate(f_adapted, adapted_gauge, true);
}

EquivariantFunction restrict_to_adapted(const EquivariantFunction & f, const GroupField & adapted_gauge)
{
  if (f.from_tag != adapted_gauge.from_tag) { throw StructureError("function is not in the gauge's source atlas"); }
  return conjugate(f, adapted_gauge, false);
}

double orbit_difference_witness(const lie::GroupModel & model, const Mat & f, const std::vector<Mat> & probes,
                                int coarse, int dense)
{
  const auto rho_c  = model.h_sample(coarse);
  const auto rho_d  = model.h_sample(dense);
  const Mat f_inv   = f.inverse();
  double witness    = 0.0;
  for (const auto & g : probes) {
    std::vector<Mat> orbit;
    orbit.reserve(rho_d.size());
    for (const auto & r : rho_d) { orbit.push_back(r * g); }
    for (const auto & r : rho_c) {
      const Mat target = f * r * f_inv * g;
      double best      = std::numeric_limits<double>::infinity();
      for (const auto & o : orbit) { best = std::min(best, max_abs(target - o)); }
      witness = std::max(witness, best);
    }
  }
  return witness;
}

}  // namespace gauge::base

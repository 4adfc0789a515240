#include "gauge/connection/connection.hpp"

#include <Eigen/LU>

namespace gauge::conn {

using base::Atlas;
using base::GroupField;
using base::HiggsField;

namespace {

template<typename F>
void for_each_entry(const Atlas & atlas, F && fn)
{
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) { fn(c, i); }
  }
}

}  // namespace

Mat gauge_transform(const lie::AlgebraBasis & algebra, const Mat & A, const Mat & g, const std::vector<Mat> & dg)
{
  if (A.rows() != algebra.dim() || static_cast<std::size_t>(A.cols()) != dg.size()) {
    throw DimensionError("connection coefficients do not match the algebra or base dimension");
  }
  const Mat g_inv = g.inverse();
  Mat out         = algebra.adjoint(g_inv) * A;
  for (Eigen::Index l = 0; l < A.cols(); ++l) { out.col(l) += algebra.coefficients(g_inv * dg[static_cast<std::size_t>(l)]); }
  return out;
}

ConnectionField transform_connection(const lie::AlgebraBasis & algebra, const ConnectionField & A, const GroupField & g)
{
  if (A.tag != g.from_tag) { throw StructureError("connection is in atlas '" + A.tag + "', gauge starts at '" + g.from_tag + "'"); }
  ConnectionField out = A;
  out.tag             = g.to_tag;
  for (int c = 0; c < A.num_charts(); ++c) {
    for (std::size_t i = 0; i < A.values[static_cast<std::size_t>(c)].size(); ++i) {
      const int li = static_cast<int>(i);
      if (A.ok(c, li) && g.ok(c, li)) {
        out.values[static_cast<std::size_t>(c)][i] = gauge_transform(algebra, A.at(c, li), g.values.at(c, li), g.derivatives.at(c, li));
      } else {
        out.valid[static_cast<std::size_t>(c)][i] = 0;
      }
    }
  }
  return out;
}

ConnectionField restrict_connection(const base::GeneratedAtlas & gen, const std::vector<Mat> & A)
{
  auto local = base::restrict_global(gen.atlas, A);
  local.tag  = gen.atlas.tag() + "/global";
  return transform_connection(gen.atlas.model().algebra(), local, base::chart_gauge_field(gen));
}

std::vector<Mat> contract(const lie::AlgebraBasis & algebra, const Mat & A, std::span<const Mat> generators)
{
  std::vector<int> idx;
  if (static_cast<int>(generators.size()) == algebra.dim()) {
    for (int p = 0; p < algebra.dim(); ++p) { idx.push_back(p); }
  } else if (generators.size() == algebra.h_indices().size()) {
    idx.assign(algebra.h_indices().begin(), algebra.h_indices().end());
  } else {
    throw DimensionError("generator set matches neither the algebra nor its 𝔥-part");
  }
  if (A.rows() != algebra.dim()) { throw DimensionError("connection coefficients do not match the algebra"); }
  std::vector<Mat> out;
  for (Eigen::Index l = 0; l < A.cols(); ++l) {
    Mat sum = Mat::Zero(generators.front().rows(), generators.front().cols());
    for (std::size_t k = 0; k < idx.size(); ++k) { sum += A(idx[k], l) * generators[k]; }
    out.push_back(std::move(sum));
  }
  return out;
}

ChartField<std::vector<Mat>> associated_connection_coeffs(const lie::AlgebraBasis & algebra, const ConnectionField & A,
                                                          std::span<const Mat> generators)
{
  ChartField<std::vector<Mat>> out;
  out.tag = A.tag;
  for (int c = 0; c < A.num_charts(); ++c) {
    out.values.emplace_back(A.values[static_cast<std::size_t>(c)].size());
    out.valid.emplace_back(A.values[static_cast<std::size_t>(c)].size(), 0);
    for (std::size_t i = 0; i < A.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (A.ok(c, static_cast<int>(i))) { out.set(c, static_cast<int>(i), contract(algebra, A.at(c, static_cast<int>(i)), generators)); }
    }
  }
  return out;
}

ChartField<Mat> covariant_differential_higgs(const Atlas & atlas, const ConnectionField & A, const HiggsField & h)
{
  base::require_tag(atlas, A, "connection");
  base::require_tag(atlas, h, "Higgs field");
  const auto & model = atlas.model();
  auto out           = ChartField<Mat>::shaped(atlas);
  for_each_entry(atlas, [&](int c, int i) {
    if (!A.ok(c, i) || !h.ok(c, i)) { return; }
    const auto dh = base::gradient(atlas, h, c, i);
    if (!dh) { return; }
    const auto MA = contract(model.algebra(), A.at(c, i), model.higgs_generators());
    Mat D(model.coset_dim(), atlas.grid().dim());
    for (int l = 0; l < atlas.grid().dim(); ++l) { D.col(l) = (*dh)[static_cast<std::size_t>(l)] - MA[static_cast<std::size_t>(l)] * h.at(c, i); }
    out.set(c, i, std::move(D));
  });
  return out;
}

Reducibility is_reducible(const Atlas & atlas, const ConnectionField & A, const HiggsField & h, double tol)
{
  const auto D = covariant_differential_higgs(atlas, A, h);
  double worst = 0.0;
  for_each_entry(atlas, [&](int c, int i) {
    if (D.ok(c, i)) { worst = std::max(worst, D.at(c, i).norm()); }
  });
  return {worst <= tol, worst};
}

ConnectionField extend_H_connection(const lie::AlgebraBasis & algebra, const ConnectionField & A_h, const GroupField & to_target)
{
  for (int c = 0; c < A_h.num_charts(); ++c) {
    for (std::size_t i = 0; i < A_h.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (!A_h.ok(c, static_cast<int>(i))) { continue; }
      for (int b : algebra.f_indices()) {
        if (A_h.at(c, static_cast<int>(i)).row(b).cwiseAbs().maxCoeff() != 0.0) {
          throw PreconditionError("H-connection has nonzero 𝔣-components");
        }
      }
    }
  }
  return transform_connection(algebra, A_h, to_target);
}

std::pair<ConnectionField, ThetaField> split_connection(const lie::AlgebraBasis & algebra, const ConnectionField & A)
{
  ConnectionField hp = A;
  ThetaField fp      = A;
  for (int c = 0; c < A.num_charts(); ++c) {
    for (std::size_t i = 0; i < A.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (!A.ok(c, static_cast<int>(i))) { continue; }
      const Mat & a = A.at(c, static_cast<int>(i));
      Mat H(a.rows(), a.cols()), F(a.rows(), a.cols());
      for (Eigen::Index l = 0; l < a.cols(); ++l) {
        const auto s = algebra.project_split(a.col(l));
        H.col(l)     = s.h_part;
        F.col(l)     = s.f_part;
      }
      hp.values[static_cast<std::size_t>(c)][i] = std::move(H);
      fp.values[static_cast<std::size_t>(c)][i] = std::move(F);
    }
  }
  return {std::move(hp), std::move(fp)};
}

CartanSplit cartan_split(const Atlas & atlas, const ConnectionField & A, const HiggsField & h, base::GaugeJets jets)
{
  const auto & algebra = atlas.model().algebra();
  const auto red       = lie::check_reductive(algebra);
  if (!red.reductive) { throw UnsupportedModelError("algebra split is not reductive; the Cartan split is undefined"); }
  base::require_tag(atlas, A, "connection");

  auto adapted = base::adapt_atlas(atlas, h, jets);
  auto Aa      = transform_connection(algebra, A, adapted.gauge);
  auto [hp, th] = split_connection(algebra, Aa);

  ThetaField orig = th;
  orig.tag        = atlas.tag();
  for_each_entry(atlas, [&](int c, int i) {
    if (th.ok(c, i)) { orig.values[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] = algebra.adjoint(adapted.gauge.values.at(c, i)) * th.at(c, i); }
  });
  return {std::move(adapted), std::move(Aa), std::move(hp), std::move(th), std::move(orig)};
}

ChartField<Mat> theta_identity_defect(const Atlas & atlas, const ConnectionField & A, const HiggsField & h, base::GaugeJets jets)
{
  const auto & model = atlas.model();
  const auto split   = cartan_split(atlas, A, h, jets);
  const auto D       = covariant_differential_higgs(atlas, A, h);
  auto out           = ChartField<Mat>::shaped(atlas);
  for_each_entry(atlas, [&](int c, int i) {
    if (!D.ok(c, i) || !split.theta_original.ok(c, i)) { return; }
    const auto MT = contract(model.algebra(), split.theta_original.at(c, i), model.higgs_generators());
    Mat r         = D.at(c, i);
    for (int l = 0; l < atlas.grid().dim(); ++l) { r.col(l) += MT[static_cast<std::size_t>(l)] * h.at(c, i); }
    out.set(c, i, std::move(r));
  });
  return out;
}

double verify_theta_identity(const Atlas & atlas, const ConnectionField & A, const HiggsField & h, base::GaugeJets jets)
{
  const auto r = theta_identity_defect(atlas, A, h, jets);
  double worst = 0.0;
  for_each_entry(atlas, [&](int c, int i) {
    if (r.ok(c, i)) { worst = std::max(worst, max_abs(r.at(c, i))); }
  });
  return worst;
}

ChartField<Mat> curvature(const Atlas & atlas, const ConnectionField & A)
{
  base::require_tag(atlas, A, "connection");
  const auto & algebra = atlas.model().algebra();
  const int n          = atlas.grid().dim();
  auto out             = ChartField<Mat>::shaped(atlas);
  for_each_entry(atlas, [&](int c, int i) {
    if (!A.ok(c, i)) { return; }
    const auto dA = base::gradient(atlas, A, c, i);
    if (!dA) { return; }
    const Mat & a = A.at(c, i);
    Mat F(algebra.dim(), n * n);
    F.setZero();
    for (int l = 0; l < n; ++l) {
      for (int m = l + 1; m < n; ++m) {
        F.col(l * n + m) = (*dA)[static_cast<std::size_t>(l)].col(m) - (*dA)[static_cast<std::size_t>(m)].col(l)
                           + algebra.bracket(a.col(l), a.col(m));
        F.col(m * n + l) = -F.col(l * n + m);
      }
    }
    out.set(c, i, std::move(F));
  });
  return out;
}

double connection_transition_residual(const Atlas & atlas, const ConnectionField & A)
{
  base::require_tag(atlas, A, "connection");
  const auto & algebra = atlas.model().algebra();
  const auto & grid    = atlas.grid();
  double worst         = 0.0;
  for (int node = 0; node < grid.num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    for (int a : cs) {
      for (int b : cs) {
        if (a == b) { continue; }
        const int i = atlas.chart(a).local_index(node);
        const int j = atlas.chart(b).local_index(node);
        if (!A.ok(a, i) || !A.ok(b, j)) { continue; }
        std::vector<Mat> drho;
        for (int ax = 0; ax < grid.dim(); ++ax) {
          const int np = grid.neighbor(node, ax, 1);
          const int nm = grid.neighbor(node, ax, -1);
          const bool in = atlas.chart(a).contains(np) && atlas.chart(b).contains(np) && atlas.chart(a).contains(nm)
                          && atlas.chart(b).contains(nm);
          if (!in) { break; }
          drho.push_back((atlas.transition(a, b, np) - atlas.transition(a, b, nm)) / (2.0 * grid.spacing()));
        }
        if (static_cast<int>(drho.size()) != grid.dim()) { continue; }
        worst = std::max(worst, max_abs(A.at(b, j) - gauge_transform(algebra, A.at(a, i), atlas.transition(a, b, node), drho)));
      }
    }
  }
  return worst;
}

Configuration vertical_automorphism(const Atlas & atlas, const base::EquivariantFunction & f, const Configuration & config)
{
  Configuration out;
  out.fields = base::vertical_automorphism(atlas, f, config.fields);
  if (config.connection) {
    base::require_tag(atlas, *config.connection, "connection");
    out.connection = transform_connection(atlas.model().algebra(), *config.connection, f.inverse());
  }
  return out;
}

}  // namespace gauge::conn

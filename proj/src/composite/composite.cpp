#include "gauge/composite/composite.hpp"

#include <cmath>
#include <cstring>

#include <Eigen/LU>

namespace gauge::composite {

namespace {

Mat probe(int m, int n, int k, int lambda, double sign)
{
  Mat P          = Mat::Zero(m, n);
  P(k, lambda)   = sign;
  return P;
}

Mat to_columns(const std::vector<Vec> & cols)
{
  Mat out(cols.empty() ? 0 : cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t l = 0; l < cols.size(); ++l) { out.col(static_cast<Eigen::Index>(l)) = cols[l]; }
  return out;
}

}  // namespace

Mat contracted_coefficients(const lie::AlgebraBasis & algebra, const SigmaCoeffs & c, const Mat & sigma_jet)
{
  const auto hs = algebra.h_indices();
  Mat out       = Mat::Zero(algebra.dim(), c.base.cols());
  const Mat hv  = c.fiber * sigma_jet + c.base;
  for (std::size_t k = 0; k < hs.size(); ++k) { out.row(hs[k]) = hv.row(static_cast<Eigen::Index>(k)); }
  return out;
}

Mat matter_differential(const lie::GroupModel & model, const Mat & A, const Vec & y, const Mat & y_jet)
{
  const auto hs  = model.algebra().h_indices();
  const auto gen = model.fiber_generators();
  Mat out        = y_jet;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const Vec Iy = gen[k] * y;
    for (Eigen::Index l = 0; l < out.cols(); ++l) { out.col(l) -= A(hs[k], l) * Iy; }
  }
  return out;
}

Mat vertical_covariant_differential(const lie::GroupModel & model, const SigmaCoeffs & c, const JetSample & jet)
{
  return matter_differential(model, contracted_coefficients(model.algebra(), c, jet.sigma_jet), jet.y, jet.y_jet);
}

ConnectionField pullback_connection(const Atlas & atlas, const SigmaConnection & A_sigma, const HiggsField & h)
{
  base::require_tag(atlas, h, "Higgs field");
  auto out = ConnectionField::shaped(atlas);
  out.tag  = A_sigma.tag;
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      const auto jet = base::higgs_jet(atlas, h, c, i);
      if (!jet) { continue; }
      out.set(c, i, contracted_coefficients(atlas.model().algebra(), A_sigma(c, i, h.at(c, i)), *jet));
    }
  }
  return out;
}

double restriction_check(const Atlas & atlas, const SigmaConnection & A_sigma, const HiggsField & h,
                         const MatterField & s_h)
{
  if (s_h.tag != A_sigma.tag) { throw StructureError("matter field and Σ-connection use different frames"); }
  const auto & model = atlas.model();
  const auto A_h     = pullback_connection(atlas, A_sigma, h);
  double worst       = 0.0;
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      const auto sj = base::higgs_jet(atlas, h, c, i);
      const auto dy = base::gradient(atlas, s_h, c, i);
      if (!sj || !dy || !s_h.ok(c, i)) { continue; }
      JetSample jet;
      jet.chart     = c;
      jet.local     = i;
      jet.sigma     = h.at(c, i);
      jet.sigma_jet = *sj;
      jet.y         = s_h.at(c, i);
      jet.y_jet     = to_columns(*dy);
      const Mat lhs = vertical_covariant_differential(model, A_sigma(c, i, jet.sigma), jet);
      const Mat rhs = matter_differential(model, A_h.at(c, i), jet.y, jet.y_jet);
      worst         = std::max(worst, max_abs(lhs - rhs));
    }
  }
  return worst;
}

Mat universal_rhs(const lie::GroupModel & model, const Mat & a, const Vec & sigma, int coset_chart, const Mat & P)
{
  const Mat z = model.section(sigma, coset_chart);
  std::vector<Mat> dz;
  for (Eigen::Index l = 0; l < P.cols(); ++l) { dz.push_back(model.section_derivative(sigma, coset_chart, P.col(l))); }
  const Mat full = conn::gauge_transform(model.algebra(), a, z, dz);
  const auto hs  = model.algebra().h_indices();
  Mat out(static_cast<Eigen::Index>(hs.size()), a.cols());
  for (std::size_t k = 0; k < hs.size(); ++k) { out.row(static_cast<Eigen::Index>(k)) = full.row(hs[k]); }
  return out;
}

UniversalSolution solve_universal(const lie::GroupModel & model, const Mat & a, const Vec & sigma, int coset_chart)
{
  const int m = model.coset_dim();
  const int n = static_cast<int>(a.cols());
  UniversalSolution s;
  s.coeffs.base  = universal_rhs(model, a, sigma, coset_chart, Mat::Zero(m, n));
  s.coeffs.fiber = Mat::Zero(s.coeffs.base.rows(), m);
  s.quadratic_residue = 0.0;
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < m; ++k) {
      const Mat up   = universal_rhs(model, a, sigma, coset_chart, probe(m, n, k, l, 1.0));
      const Mat down = universal_rhs(model, a, sigma, coset_chart, probe(m, n, k, l, -1.0));
      const Vec col  = 0.5 * (up.col(l) - down.col(l));
      if (l == 0) {
        s.coeffs.fiber.col(k) = col;
      } else {
        s.quadratic_residue = std::max(s.quadratic_residue, max_abs(col - s.coeffs.fiber.col(k)));
      }
      s.quadratic_residue = std::max(s.quadratic_residue, max_abs(0.5 * (up + down) - s.coeffs.base));
    }
  }
  if (!(s.quadratic_residue <= 1e-10)) {
    throw ModelError(model.name() + ": Σ-connection equations are not affine in the Higgs jet (residue "
                     + std::to_string(s.quadratic_residue) + ")");
  }
  return s;
}

double universal_identity_residual(const lie::GroupModel & model, const Mat & a, const Vec & sigma, int coset_chart,
                                   const SigmaCoeffs & coeffs, const std::vector<Mat> & extra_probes)
{
  const int m = model.coset_dim();
  const int n = static_cast<int>(a.cols());
  std::vector<Mat> probes{Mat::Zero(m, n)};
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < m; ++k) {
      probes.push_back(probe(m, n, k, l, 1.0));
      probes.push_back(probe(m, n, k, l, -1.0));
    }
  }
  probes.insert(probes.end(), extra_probes.begin(), extra_probes.end());
  double worst = 0.0;
  for (const auto & P : probes) {
    const Mat lhs = coeffs.fiber * P + coeffs.base;
    worst         = std::max(worst, max_abs(lhs - universal_rhs(model, a, sigma, coset_chart, P)));
  }
  return worst;
}

SigmaConnection universal_sigma_connection(const Atlas & atlas, const ConnectionField & A, const HiggsField & h)
{
  base::require_tag(atlas, A, "connection");
  const auto charts = std::make_shared<std::vector<int>>(base::assign_coset_charts(atlas, h));
  const auto field  = std::make_shared<ConnectionField>(A);
  const auto * model = &atlas.model();
  return {atlas.tag() + "/adapted", [charts, field, model](int c, int i, const Vec & sigma) {
            if (!field->ok(c, i)) { throw PreconditionError("connection missing at requested node"); }
            return solve_universal(*model, field->at(c, i), sigma, (*charts)[static_cast<std::size_t>(c)]).coeffs;
          }};
}

SigmaConnection random_sigma_connection(const Atlas & atlas, std::string tag, double amplitude, std::mt19937_64 & rng)
{
  const auto & grid = atlas.grid();
  const auto & model = atlas.model();
  const int hd = static_cast<int>(model.algebra().h_indices().size());
  const int m  = model.coset_dim();
  const int n  = grid.dim();

  struct Data
  {
    std::vector<Vec> base, wave, fiber;
    Vec w;
    std::vector<std::vector<int>> nodes;
    int hd, m, n;
  };
  auto d    = std::make_shared<Data>();
  d->base   = base::random_vector_field(grid, hd * n, amplitude, rng);
  d->wave   = base::random_vector_field(grid, hd * n * m, amplitude, rng);
  d->fiber  = base::random_vector_field(grid, hd * m, amplitude, rng);
  d->w      = Vec(m);
  for (int k = 0; k < m; ++k) { d->w(k) = base::uniform_pm1(rng); }
  for (const auto & ch : atlas.charts()) { d->nodes.push_back(ch.nodes); }
  d->hd = hd;
  d->m  = m;
  d->n  = n;

  return {std::move(tag), [d](int c, int i, const Vec & sigma) {
            const int node = d->nodes[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
            const auto u   = static_cast<std::size_t>(node);
            SigmaCoeffs out;
            out.base = Eigen::Map<const Mat>(d->base[u].data(), d->hd, d->n);
            for (int k = 0; k < d->m; ++k) {
              out.base += std::sin(sigma(k)) * Eigen::Map<const Mat>(d->wave[u].data() + k * d->hd * d->n, d->hd, d->n);
            }
            out.fiber = std::cos(d->w.dot(sigma)) * Eigen::Map<const Mat>(d->fiber[u].data(), d->hd, d->m);
            return out;
          }};
}

double lagrangian_density(const lie::GroupModel & model, const Mat & vd)
{
  const Mat & k = model.fiber_metric();
  double sum    = 0.0;
  for (Eigen::Index l = 0; l < vd.cols(); ++l) { sum += vd.col(l).dot(k * vd.col(l)); }
  return 0.5 * sum;
}

double matter_lagrangian(const lie::GroupModel & model, const SigmaCoeffs & c, const JetSample & jet)
{
  return lagrangian_density(model, vertical_covariant_differential(model, c, jet));
}

bool sample_jet(const Atlas & atlas, const ConnectionField & A, const HiggsField & h, const MatterField & y, int chart,
                int local, JetSample & out)
{
  if (!A.ok(chart, local) || !y.ok(chart, local)) { return false; }
  const auto sj = base::higgs_jet(atlas, h, chart, local);
  const auto dy = base::gradient(atlas, y, chart, local);
  if (!sj || !dy) { return false; }
  out           = JetSample{};
  out.chart     = chart;
  out.local     = local;
  out.a         = A.at(chart, local);
  out.sigma     = h.at(chart, local);
  out.sigma_jet = *sj;
  out.y         = y.at(chart, local);
  out.y_jet     = to_columns(*dy);
  if (const auto da = base::gradient(atlas, A, chart, local)) { out.a_jet = *da; }
  return true;
}

JetSample prolong_automorphism(const lie::GroupModel & model, const JetSample & jet, const Mat & f,
                               const std::vector<Mat> & df, int chart_from, int chart_to)
{
  const auto & alg = model.algebra();
  const Mat finv   = f.inverse();
  const Mat R      = model.coset_rep(f);

  JetSample out = jet;
  out.sigma     = R * jet.sigma;
  out.a_jet.clear();

  const Mat z   = model.section(jet.sigma, chart_from);
  const Mat zp  = model.section(out.sigma, chart_to);
  const Mat zpi = zp.inverse();
  const Mat rho = zpi * f * z;

  out.y = model.fiber_rep(rho) * jet.y;
  std::vector<Mat> dfp;
  for (std::size_t l = 0; l < df.size(); ++l) {
    const auto li = static_cast<Eigen::Index>(l);
    const Vec X   = alg.coefficients(df[l] * finv);
    const Mat Xm  = alg.to_matrix(X);
    dfp.push_back(Xm * f);

    Vec ds = R * jet.sigma_jet.col(li);
    for (int p = 0; p < alg.dim(); ++p) { ds -= X(p) * (model.higgs_generator(p) * out.sigma); }
    out.sigma_jet.col(li) = ds;

    const Mat dz   = model.section_derivative(jet.sigma, chart_from, jet.sigma_jet.col(li));
    const Mat dzp  = model.section_derivative(out.sigma, chart_to, ds);
    const Mat drho = -zpi * dzp * rho + zpi * dfp.back() * z + zpi * f * dz;
    out.y_jet.col(li) = model.fiber_rep(drho) * jet.y + model.fiber_rep(rho) * jet.y_jet.col(li);
  }
  std::vector<Mat> dfinv;
  for (const auto & d : dfp) { dfinv.push_back(-finv * d * finv); }
  out.a = conn::gauge_transform(alg, jet.a, finv, dfinv);
  return out;
}

InvarianceReport gauge_invariance_test(const Atlas & atlas, const ConnectionField & A, const HiggsField & h,
                                       const MatterField & y, const base::EquivariantFunction & f)
{
  const auto & model = atlas.model();
  conn::Configuration cfg{{h, y}, A};
  const auto moved       = conn::vertical_automorphism(atlas, f, cfg);
  const auto charts_from = base::assign_coset_charts(atlas, h);
  const auto charts_to   = base::assign_coset_charts(atlas, moved.fields.higgs);

  InvarianceReport rep;
  for (int c = 0; c < atlas.num_charts(); ++c) {
    const int ca = charts_from[static_cast<std::size_t>(c)];
    const int cb = charts_to[static_cast<std::size_t>(c)];
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      JetSample jet;
      if (!f.ok(c, i) || !sample_jet(atlas, A, h, y, c, i, jet)) { continue; }
      const double L = matter_lagrangian(model, solve_universal(model, jet.a, jet.sigma, ca).coeffs, jet);

      JetSample moved_jet = prolong_automorphism(model, jet, f.values.at(c, i), f.derivatives.at(c, i), ca, cb);
      moved_jet.a         = moved.connection->at(c, i);
      moved_jet.sigma     = moved.fields.higgs.at(c, i);
      moved_jet.y         = moved.fields.matter->at(c, i);
      const double Lp = matter_lagrangian(model, solve_universal(model, moved_jet.a, moved_jet.sigma, cb).coeffs, moved_jet);

      rep.max_delta   = std::max(rep.max_delta, std::abs(Lp - L));
      rep.max_density = std::max(rep.max_density, std::abs(L));
      ++rep.nodes;
    }
  }
  return rep;
}

CompositeSection compose_section(const HiggsField & h, const MatterField & y)
{
  if (h.num_charts() != y.num_charts()) { throw StructureError("Higgs and matter fields have different charts"); }
  CompositeSection s;
  s.tag = y.tag;
  for (int c = 0; c < h.num_charts(); ++c) {
    const auto size = h.values[static_cast<std::size_t>(c)].size();
    s.values.emplace_back(size);
    s.valid.emplace_back(size, 0);
    for (std::size_t i = 0; i < size; ++i) {
      const int ii = static_cast<int>(i);
      if (!h.ok(c, ii) || !y.ok(c, ii)) { continue; }
      Vec v(h.at(c, ii).size() + y.at(c, ii).size());
      v << h.at(c, ii), y.at(c, ii);
      s.set(c, ii, std::move(v));
    }
  }
  return s;
}

HiggsField project_section(const CompositeSection & s, const std::string & atlas_tag, int coset_dim)
{
  HiggsField h;
  h.tag   = atlas_tag;
  h.valid = s.valid;
  for (const auto & chart : s.values) {
    auto & out = h.values.emplace_back(chart.size());
    for (std::size_t i = 0; i < chart.size(); ++i) {
      if (chart[i].size() >= coset_dim) { out[i] = chart[i].head(coset_dim); }
    }
  }
  return h;
}

MatterField restrict_section(const CompositeSection & s, int coset_dim)
{
  MatterField y;
  y.tag   = s.tag;
  y.valid = s.valid;
  for (const auto & chart : s.values) {
    auto & out = y.values.emplace_back(chart.size());
    for (std::size_t i = 0; i < chart.size(); ++i) {
      if (chart[i].size() >= coset_dim) { out[i] = chart[i].tail(chart[i].size() - coset_dim); }
    }
  }
  return y;
}

namespace {

bool same_bits(const base::ChartField<Vec> & a, const base::ChartField<Vec> & b, int & nodes)
{
  if (a.tag != b.tag || a.valid != b.valid || a.num_charts() != b.num_charts()) { return false; }
  for (int c = 0; c < a.num_charts(); ++c) {
    for (std::size_t i = 0; i < a.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (!a.ok(c, static_cast<int>(i))) { continue; }
      const Vec & u = a.values[static_cast<std::size_t>(c)][i];
      const Vec & v = b.values[static_cast<std::size_t>(c)][i];
      if (u.size() != v.size()) { return false; }
      if (std::memcmp(u.data(), v.data(), sizeof(double) * static_cast<std::size_t>(u.size())) != 0) { return false; }
      ++nodes;
    }
  }
  return true;
}

}  // namespace

RoundtripRecord composite_section_roundtrip(const HiggsField & h, const MatterField & y)
{
  int m = 0;
  for (int c = 0; c < h.num_charts() && m == 0; ++c) {
    for (std::size_t i = 0; i < h.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (h.ok(c, static_cast<int>(i))) {
        m = static_cast<int>(h.at(c, static_cast<int>(i)).size());
        break;
      }
    }
  }
  const auto s      = compose_section(h, y);
  HiggsField h2     = project_section(s, h.tag, m);
  MatterField y2    = restrict_section(s, m);
  // Entries where only one of h, y was valid are dropped by the composite; compare on the common mask.
  HiggsField h_ref  = h;
  MatterField y_ref = y;
  h_ref.valid = y_ref.valid = s.valid;
  RoundtripRecord r;
  int hn = 0, yn = 0;
  r.identical = same_bits(h_ref, h2, hn) && same_bits(y_ref, y2, yn);
  r.nodes     = hn;
  return r;
}

}  // namespace gauge::composite

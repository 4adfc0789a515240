#include "gauge/scenarios/gravity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace gauge::scenarios {

namespace {

constexpr int kPairs[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};

Mat eta() { return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal().toDenseMatrix(); }

}  // namespace

Vec metric_coords(const Mat & m)
{
  Vec c(10);
  for (int k = 0; k < 10; ++k) { c(k) = m(kPairs[k][0], kPairs[k][1]); }
  return c;
}

Mat metric_matrix(const Vec & c)
{
  Mat m(4, 4);
  for (int k = 0; k < 10; ++k) { m(kPairs[k][0], kPairs[k][1]) = m(kPairs[k][1], kPairs[k][0]) = c(k); }
  return m;
}

Mat linear_connection_coeffs(const lie::AlgebraBasis & algebra, const std::vector<Mat> & gamma)
{
  Mat A(algebra.dim(), static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t l = 0; l < gamma.size(); ++l) { A.col(static_cast<Eigen::Index>(l)) = algebra.coefficients(gamma[l]); }
  return A;
}

std::vector<std::vector<Mat>> christoffel_oracle(const base::BaseGrid & grid, const std::vector<Mat> & metric)
{
  const auto dg = base::periodic_gradient(grid, metric);
  const int n   = grid.dim();
  std::vector<std::vector<Mat>> out(metric.size());
  for (std::size_t node = 0; node < metric.size(); ++node) {
    const Mat ginv = metric[node].inverse();
    for (int l = 0; l < n; ++l) {
      Mat G = Mat::Zero(n, n);
      for (int mu = 0; mu < n; ++mu) {
        for (int nu = 0; nu < n; ++nu) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) {
            s += 0.5 * ginv(mu, k) * (dg[node][static_cast<std::size_t>(l)](k, nu) + dg[node][static_cast<std::size_t>(nu)](k, l)
                                      - dg[node][static_cast<std::size_t>(k)](l, nu));
          }
          G(mu, nu) = s;
        }
      }
      out[node].push_back(G);
    }
  }
  return out;
}

GravityDecomposition gravity_demo(const base::Atlas & atlas, const base::HiggsField & inverse_metric,
                                  const conn::ConnectionField & A)
{
  if (atlas.model().name() != "GL4_SO13") { throw UnsupportedModelError("gravity example needs GL4_SO13"); }
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      if (!inverse_metric.ok(c, i)) { continue; }
      const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(metric_matrix(inverse_metric.at(c, i))).eigenvalues();
      if (!(ev(0) < 0.0 && ev(1) < 0.0 && ev(2) < 0.0 && ev(3) > 0.0)) {
        throw ModelError("metric does not have signature (1,3) at chart " + std::to_string(c) + " node "
                         + std::to_string(atlas.chart(c).nodes[static_cast<std::size_t>(i)]));
      }
    }
  }
  GravityDecomposition out{conn::cartan_split(atlas, A, inverse_metric), 0.0, 0.0};
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      if (out.split.h_part.ok(c, i)) { out.max_h_part = std::max(out.max_h_part, max_abs(out.split.h_part.at(c, i))); }
      if (out.split.theta.ok(c, i)) { out.max_theta = std::max(out.max_theta, max_abs(out.split.theta.at(c, i))); }
    }
  }
  return out;
}

ConformalExample conformal_example(double dx, int n, double amplitude, std::mt19937_64 & rng)
{
  const auto & model = lie::group_model("GL4_SO13");
  const auto grid    = base::BaseGrid::build(4, {n, n, n, n}, dx);
  const base::FourierField phi(grid, amplitude, rng);
  base::Atlas atlas(grid, model, "frame", base::box_cover(grid, base::default_segments(grid)));

  const Mat e = eta();
  std::vector<Mat> metric;
  std::vector<Vec> inverse;
  std::vector<Mat> lc;
  for (int node = 0; node < grid.num_nodes(); ++node) {
    const Vec x   = grid.position(node);
    const double p = phi(x);
    const Vec dp  = phi.gradient(x);
    metric.push_back(std::exp(2.0 * p) * e);
    inverse.push_back(metric_coords(std::exp(-2.0 * p) * e));
    // Γ^μ_{λν} = δ^μ_λ ∂_νφ + δ^μ_ν ∂_λφ − η_{λν} η^{μκ} ∂_κφ
    std::vector<Mat> gamma;
    for (int l = 0; l < 4; ++l) {
      Mat G = Mat::Zero(4, 4);
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          G(mu, nu) = (mu == l ? dp(nu) : 0.0) + (mu == nu ? dp(l) : 0.0) - e(l, nu) * e(mu, mu) * dp(mu);
        }
      }
      gamma.push_back(G);
    }
    lc.push_back(linear_connection_coeffs(model.algebra(), gamma));
  }
  auto h = base::restrict_global(atlas, inverse);
  auto A = base::restrict_global(atlas, lc);
  return {std::move(atlas), std::move(metric), std::move(h), std::move(A)};
}

}  // namespace gauge::scenarios

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "gauge/connection/connection.hpp"
#include "gauge/errors.hpp"
#include "test_support.hpp"

using namespace gauge;
using namespace gauge::base;
using namespace gauge::conn;

namespace {

const char * kModels[] = {"SO3_SO2", "SU2_U1", "GL4_SO13"};

double gauge_amplitude(const lie::GroupModel & m) { return default_scales(m).gauge; }
double higgs_amplitude(const lie::GroupModel & m) { return default_scales(m).higgs; }
double tol2(const Atlas & a) { return 10.0 * a.grid().spacing() * a.grid().spacing(); }

struct Setup
{
  GeneratedAtlas gen;
  std::vector<Vec> h_global;
  HiggsField h;
  ConnectionField A;
};

Setup random_setup(const lie::GroupModel & model, std::uint64_t seed, double dx = 0.25, int n = 16)
{
  std::mt19937_64 rng(seed);
  const auto grid = BaseGrid::build(2, {n, n}, dx);
  auto gen        = generate_atlas(grid, model, "psi", box_cover(grid, default_segments(grid)), gauge_amplitude(model), rng);
  auto hg         = random_higgs(grid, model, higgs_amplitude(model), rng);
  auto h          = restrict_higgs(gen, hg);
  auto A          = restrict_connection(gen, random_matrix_field(grid, model.algebra().dim(), default_scales(model).connection, rng));
  return {std::move(gen), std::move(hg), std::move(h), std::move(A)};
}

ConnectionField constant_connection(const Atlas & atlas, const Mat & a)
{
  auto A = ConnectionField::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) { A.set(c, i, a); }
  }
  return A;
}

HiggsField constant_higgs(const Atlas & atlas, const Vec & s)
{
  auto h = HiggsField::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) { h.set(c, i, s); }
  }
  return h;
}

GroupField gauge_from_global(const Atlas & atlas, const std::vector<Mat> & g, const std::string & to)
{
  return with_jets(atlas, restrict_global(atlas, g), atlas.tag(), to);
}

template<typename T>
double max_norm(const ChartField<T> & f)
{
  double worst = 0.0;
  for (int c = 0; c < f.num_charts(); ++c) {
    for (std::size_t i = 0; i < f.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (f.ok(c, static_cast<int>(i))) { worst = std::max(worst, max_abs(f.at(c, static_cast<int>(i)))); }
    }
  }
  return worst;
}

/// Affine group of the line: [e₁, e₂] = e₂ with 𝔥 = span(e₂), which is not reductive.
class AffineLine final : public lie::GroupModel
{
public:
  AffineLine()
      : GroupModel("AFF1", lie::AlgebraBasis({unit(0, 0), unit(0, 1)}, {1}), Vec::Unit(2, 0), {"all"}, Mat::Identity(1, 1))
  {
    finalize();
  }
  double membership_residual(const Mat & g) const override { return std::max(std::abs(g(1, 0)), std::abs(g(1, 1) - 1.0)); }
  double coset_constraint_residual(const Vec & s) const override { return std::abs(s(1)); }
  double chart_margin(const Vec & s, int) const override { return s(0); }
  Mat fiber_rep(const Mat & rho) const override { return rho.topLeftCorner(1, 1); }
  std::vector<Mat> h_sample(int) const override { return {identity()}; }

private:
  static Mat unit(int r, int c)
  {
    Mat m  = Mat::Zero(2, 2);
    m(r, c) = 1.0;
    return m;
  }
  MatC coset_rep_impl(const MatC & g) const override { return g; }
  MatC section_impl(const VecC & s, int) const override
  {
    MatC z = MatC::Identity(2, 2);
    z(0, 0) = s(0);
    return z;
  }
};

}  // namespace

TEST(Transform, IdentityGaugeLeavesConnection)
{
  const auto s  = random_setup(lie::group_model("SU2_U1"), 1);
  const auto A2 = transform_connection(s.gen.atlas.model().algebra(), s.A, identity_field(s.gen.atlas, "psi", "psi"));
  EXPECT_LE(max_difference(A2, s.A), 1e-15);
}

TEST(Transform, ConstantGaugeOnZeroConnection)
{
  const auto & model = lie::group_model("GL4_SO13");
  const auto grid    = BaseGrid::build(2, {8, 8}, 0.5);
  const Atlas atlas(grid, model, "a", box_cover(grid, default_segments(grid)));
  std::mt19937_64 rng(2);
  const std::vector<Mat> g(static_cast<std::size_t>(grid.num_nodes()), test_support::random_group_matrix(model, 0.3, rng));
  const auto A2 = transform_connection(model.algebra(), constant_connection(atlas, Mat::Zero(16, 2)), gauge_from_global(atlas, g, "b"));
  EXPECT_LE(max_norm(A2), 1e-13);
  EXPECT_EQ(A2.tag, "b");
}

TEST(Transform, RotatingGaugeGivesUnitComponent)
{
  const auto & model = lie::group_model("SO3_SO2");
  const double dx    = 2.0 * std::numbers::pi / 16.0;
  const auto grid    = BaseGrid::build(2, {16, 16}, dx);
  const Atlas atlas(grid, model, "a", box_cover(grid, default_segments(grid)));
  std::vector<Mat> g;
  for (int node = 0; node < grid.num_nodes(); ++node) {
    g.push_back(test_support::taylor_exp(grid.position(node)(0) * model.algebra().element(2)));
  }
  const auto A2 = transform_connection(model.algebra(), constant_connection(atlas, Mat::Zero(3, 2)), gauge_from_global(atlas, g, "b"));
  Mat expected  = Mat::Zero(3, 2);
  expected(2, 0) = 1.0;
  EXPECT_LE(max_difference(A2, constant_connection(atlas, expected)), 10 * dx * dx);
  EXPECT_GT(common_valid(A2, A2), 0);
}

TEST(Transform, InverseGaugeRestores)
{
  for (const char * name : kModels) {
    const auto s   = random_setup(lie::group_model(name), 3);
    std::mt19937_64 rng(4);
    const auto g   = gauge_from_global(s.gen.atlas, random_group_function(s.gen.atlas.grid(), s.gen.atlas.model(), 0.3, rng), "b");
    const auto & alg = s.gen.atlas.model().algebra();
    const auto back  = transform_connection(alg, transform_connection(alg, s.A, g), g.inverse());
    EXPECT_LE(max_difference(back, s.A), 1e-12) << name;
    EXPECT_EQ(back.tag, "psi");
  }
}

TEST(Transform, MismatchedTagsAreRejected)
{
  const auto s = random_setup(lie::group_model("SO3_SO2"), 5);
  EXPECT_THROW(transform_connection(s.gen.atlas.model().algebra(), s.A, identity_field(s.gen.atlas, "other", "psi")),
               StructureError);
}

TEST(Transition, RestrictedConnectionsObeyTheLaw)
{
  for (const char * name : kModels) {
    const auto s = random_setup(lie::group_model(name), 6);
    EXPECT_LE(connection_transition_residual(s.gen.atlas, s.A), tol2(s.gen.atlas)) << name;
  }
}

TEST(Associated, ZeroAndSingleComponent)
{
  const auto & model = lie::group_model("SU2_U1");
  const auto & alg   = model.algebra();
  EXPECT_EQ(max_abs(contract(alg, Mat::Zero(3, 2), model.higgs_generators())[1]), 0.0);
  Mat a   = Mat::Zero(3, 2);
  a(2, 0) = 1.7;
  const auto J = contract(alg, a, model.higgs_generators());
  EXPECT_LE(max_abs(J[0] - 1.7 * model.higgs_generator(2)), 1e-15);
  EXPECT_EQ(max_abs(J[1]), 0.0);
  const auto I = contract(alg, a, model.fiber_generators());
  EXPECT_LE(max_abs(I[0] - 1.7 * model.fiber_generator(0)), 1e-15);
}

TEST(Associated, MatchesBruteForceContraction)
{
  std::mt19937_64 rng(7);
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const int dim      = model.algebra().dim();
    const Mat a        = Eigen::Map<const Mat>(test_support::random_coeffs(dim * 3, 1.0, rng).data(), dim, 3);
    const auto J       = contract(model.algebra(), a, model.higgs_generators());
    for (int l = 0; l < 3; ++l) {
      const int m = model.coset_dim();
      for (int r = 0; r < m; ++r) {
        for (int q = 0; q < m; ++q) {
          double sum = 0.0;
          for (int p = 0; p < dim; ++p) { sum += a(p, l) * model.higgs_generator(p)(r, q); }
          EXPECT_NEAR(J[static_cast<std::size_t>(l)](r, q), sum, 1e-13);
        }
      }
    }
  }
}

TEST(Associated, WrongGeneratorCountIsDimensionError)
{
  const auto & model = lie::group_model("GL4_SO13");
  const std::vector<Mat> gens(3, Mat::Identity(4, 4));
  EXPECT_THROW(contract(model.algebra(), Mat::Zero(16, 2), gens), DimensionError);
}

TEST(CovariantDifferential, VanishesInTrivialCases)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto grid    = BaseGrid::build(2, {16, 16}, 0.25);
    const Atlas atlas(grid, model, "a", box_cover(grid, default_segments(grid)));
    const auto h       = constant_higgs(atlas, model.center());
    EXPECT_EQ(max_norm(covariant_differential_higgs(atlas, constant_connection(atlas, Mat::Zero(model.algebra().dim(), 2)), h)), 0.0);
    Mat a = Mat::Zero(model.algebra().dim(), 2);
    for (int k : model.algebra().h_indices()) { a.row(k).setConstant(0.3 + k); }
    EXPECT_LE(max_norm(covariant_differential_higgs(atlas, constant_connection(atlas, a), h)), 1e-14) << name;
  }
}

TEST(CovariantDifferential, MatchesTransportFlowOracle)
{
  // D_λh ≈ [exp(Δ A_λ)·h(x+Δ) − exp(−Δ A_λ)·h(x−Δ)] / 2Δ
  for (const char * name : kModels) {
    const auto s       = random_setup(lie::group_model(name), 8);
    const auto & atlas = s.gen.atlas;
    const auto & model = atlas.model();
    const auto D       = covariant_differential_higgs(atlas, s.A, s.h);
    const double dx    = atlas.grid().spacing();
    double worst       = 0.0;
    for (int c = 0; c < atlas.num_charts(); ++c) {
      const auto & ch = atlas.chart(c);
      for (int i = 0; i < ch.size(); ++i) {
        if (!D.ok(c, i)) { continue; }
        for (int l = 0; l < 2; ++l) {
          const Mat X  = model.algebra().to_matrix(s.A.at(c, i).col(l));
          const int ip = ch.local_index(atlas.grid().neighbor(ch.nodes[static_cast<std::size_t>(i)], l, 1));
          const int im = ch.local_index(atlas.grid().neighbor(ch.nodes[static_cast<std::size_t>(i)], l, -1));
          const Vec fwd = model.act(test_support::taylor_exp(dx * X), s.h.at(c, ip));
          const Vec bwd = model.act(test_support::taylor_exp(-dx * X), s.h.at(c, im));
          worst         = std::max(worst, max_abs((fwd - bwd) / (2 * dx) - D.at(c, i).col(l)));
        }
      }
    }
    EXPECT_LE(worst, 20 * dx * dx) << name;
  }
}

TEST(CovariantDifferential, ChartCovariantOnOverlaps)
{
  for (const char * name : kModels) {
    const auto s       = random_setup(lie::group_model(name), 9);
    const auto & atlas = s.gen.atlas;
    const auto D       = covariant_differential_higgs(atlas, s.A, s.h);
    double worst       = 0.0;
    for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
      const auto cs = atlas.charts_at(node);
      for (int a : cs) {
        for (int b : cs) {
          const int i = atlas.chart(a).local_index(node);
          const int j = atlas.chart(b).local_index(node);
          if (a == b || !D.ok(a, i) || !D.ok(b, j)) { continue; }
          worst = std::max(worst, max_abs(D.at(a, i) - atlas.model().coset_rep(atlas.transition(a, b, node)) * D.at(b, j)));
        }
      }
    }
    EXPECT_LE(worst, tol2(atlas)) << name;
  }
}

TEST(Reducibility, ExtendedHConnectionsAreReducible)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
      auto s         = random_setup(model, seed);
      const auto ad  = adapt_atlas(s.gen.atlas, s.h);
      std::mt19937_64 rng(seed);
      auto Ah        = restrict_global(ad.atlas, random_matrix_field(ad.atlas.grid(), model.algebra().dim(), default_scales(model).connection, rng));
      for (auto & chart : Ah.values) {
        for (auto & a : chart) {
          for (int b : model.algebra().f_indices()) { a.row(b).setZero(); }
        }
      }
      const auto A = extend_H_connection(model.algebra(), Ah, ad.gauge.inverse());
      EXPECT_EQ(A.tag, "psi");
      const auto r = is_reducible(s.gen.atlas, A, s.h, tol2(s.gen.atlas));
      EXPECT_TRUE(r.reducible) << name << " seed " << seed << " norm " << r.max_norm;
    }
  }
}

TEST(Reducibility, ConstantFComponentAtCenterIsNotReducible)
{
  const auto & model = lie::group_model("SU2_U1");
  const auto grid    = BaseGrid::build(2, {16, 16}, 0.25);
  const Atlas atlas(grid, model, "a", single_chart(grid));
  Mat a      = Mat::Zero(3, 2);
  const int b = model.algebra().f_indices()[0];
  a(b, 0)    = 0.4;
  const auto r = is_reducible(atlas, constant_connection(atlas, a), constant_higgs(atlas, model.center()), 1e-3);
  EXPECT_FALSE(r.reducible);
  EXPECT_NEAR(r.max_norm, 0.4 * (model.higgs_generator(b) * model.center()).norm(), 1e-14);
  EXPECT_TRUE(is_reducible(atlas, constant_connection(atlas, Mat::Zero(3, 2)), constant_higgs(atlas, model.center()), 0.0).reducible);
}

TEST(Reducibility, FComponentsViolatePrecondition)
{
  const auto & model = lie::group_model("SO3_SO2");
  const auto grid    = BaseGrid::build(2, {8, 8}, 0.25);
  const Atlas atlas(grid, model, "a", single_chart(grid));
  Mat a   = Mat::Zero(3, 2);
  a(0, 1) = 1e-9;
  EXPECT_THROW(extend_H_connection(model.algebra(), constant_connection(atlas, a), identity_field(atlas, "a", "a")),
               PreconditionError);
}

TEST(Cartan, DegenerateSplitKeepsEverything)
{
  const auto & so3 = lie::group_model("SO3_SO2").algebra();
  const lie::AlgebraBasis all({so3.element(0), so3.element(1), so3.element(2)}, {0, 1, 2});
  const auto s          = random_setup(lie::group_model("SO3_SO2"), 10);
  const auto [hp, theta] = split_connection(all, s.A);
  EXPECT_EQ(max_difference(hp, s.A), 0.0);
  EXPECT_EQ(max_norm(theta), 0.0);
}

TEST(Cartan, PureFConnectionAtCenterIsAllTheta)
{
  const auto & model = lie::group_model("GL4_SO13");
  const auto grid    = BaseGrid::build(2, {16, 16}, 0.25);
  const Atlas atlas(grid, model, "a", box_cover(grid, default_segments(grid)));
  std::mt19937_64 rng(11);
  auto A = restrict_global(atlas, random_matrix_field(grid, 16, 1.0, rng));
  for (auto & chart : A.values) {
    for (auto & a : chart) {
      for (int k : model.algebra().h_indices()) { a.row(k).setZero(); }
    }
  }
  const auto sp = cartan_split(atlas, A, constant_higgs(atlas, model.center()));
  EXPECT_LE(max_norm(sp.h_part), 1e-15);
  auto Aa = A;
  Aa.tag  = sp.theta.tag;
  EXPECT_LE(max_difference(sp.theta, Aa), 1e-15);
}

TEST(Cartan, SplitIsExactAndHPartIsAnHConnection)
{
  for (const char * name : kModels) {
    const auto s  = random_setup(lie::group_model(name), 12);
    const auto sp = cartan_split(s.gen.atlas, s.A, s.h);
    double worst  = 0.0;
    for (int c = 0; c < sp.theta.num_charts(); ++c) {
      for (std::size_t i = 0; i < sp.theta.values[static_cast<std::size_t>(c)].size(); ++i) {
        const int li = static_cast<int>(i);
        if (!sp.theta.ok(c, li)) { continue; }
        worst = std::max(worst, max_abs(sp.h_part.at(c, li) + sp.theta.at(c, li) - sp.adapted_connection.at(c, li)));
        for (int a : s.gen.atlas.model().algebra().h_indices()) { EXPECT_EQ(sp.theta.at(c, li).row(a).cwiseAbs().maxCoeff(), 0.0); }
      }
    }
    EXPECT_EQ(worst, 0.0) << name;
    EXPECT_LE(connection_transition_residual(sp.adapted.atlas, sp.h_part), tol2(s.gen.atlas)) << name;
  }
}

TEST(Cartan, NonReductiveModelIsUnsupported)
{
  const AffineLine model;
  EXPECT_FALSE(lie::check_reductive(model.algebra()).reductive);
  const auto grid = BaseGrid::build(1, {8}, 0.25);
  const Atlas atlas(grid, model, "a", single_chart(grid));
  EXPECT_THROW(cartan_split(atlas, constant_connection(atlas, Mat::Zero(2, 1)), constant_higgs(atlas, model.center())),
               UnsupportedModelError);
}

TEST(Cartan, ExtendThenSplitRoundTrips)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto s       = random_setup(model, 13);
    const auto ad      = adapt_atlas(s.gen.atlas, s.h);
    std::mt19937_64 rng(13);
    auto Ah = restrict_global(ad.atlas, random_matrix_field(ad.atlas.grid(), model.algebra().dim(), default_scales(model).connection, rng));
    for (auto & chart : Ah.values) {
      for (auto & a : chart) {
        for (int b : model.algebra().f_indices()) { a.row(b).setZero(); }
      }
    }
    const auto sp = cartan_split(s.gen.atlas, extend_H_connection(model.algebra(), Ah, ad.gauge.inverse()), s.h);
    EXPECT_GT(common_valid(sp.h_part, Ah), 0);
    EXPECT_LE(max_difference(sp.h_part, Ah), 1e-12) << name;
    EXPECT_LE(max_norm(sp.theta), 1e-12) << name;
  }
}

TEST(Cartan, CommutesWithHValuedGaugeChanges)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto s       = random_setup(model, 14);
    const auto sp      = cartan_split(s.gen.atlas, s.A, s.h);
    std::mt19937_64 rng(14);
    const auto hi = model.algebra().h_indices();
    const auto k  = gauge_from_global(sp.adapted.atlas,
                                      random_group_function(s.gen.atlas.grid(), model, 0.5, rng, std::vector<int>(hi.begin(), hi.end())),
                                      "k");
    const auto moved         = transform_connection(model.algebra(), sp.adapted_connection, k);
    const auto [hp2, theta2] = split_connection(model.algebra(), moved);
    const auto hp_moved      = transform_connection(model.algebra(), sp.h_part, k);
    EXPECT_LE(max_difference(hp2, hp_moved), tol2(s.gen.atlas)) << name;
  }
}

TEST(ThetaIdentity, ReducibleConnectionGivesZero)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto grid    = BaseGrid::build(2, {16, 16}, 0.25);
    const Atlas atlas(grid, model, "a", box_cover(grid, default_segments(grid)));
    EXPECT_LE(verify_theta_identity(atlas, constant_connection(atlas, Mat::Zero(model.algebra().dim(), 2)),
                                    constant_higgs(atlas, model.center())),
              1e-15);
  }
}

TEST(ThetaIdentity, RandomConnectionsAtCenterAndGeneralHiggs)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
      const auto s = random_setup(model, seed);
      EXPECT_LE(verify_theta_identity(s.gen.atlas, s.A, s.h), tol2(s.gen.atlas)) << name << " seed " << seed;
      EXPECT_LE(verify_theta_identity(s.gen.atlas, s.A, constant_higgs(s.gen.atlas, model.center())), tol2(s.gen.atlas));
    }
  }
}

TEST(ThetaIdentity, UncorrectedSignFails)
{
  // Θ J and D h are opposite: their difference is twice Θ J, far above the discretization level.
  const auto & model = lie::group_model("SU2_U1");
  const auto s       = random_setup(model, 15);
  const auto sp      = cartan_split(s.gen.atlas, s.A, s.h);
  const auto D       = covariant_differential_higgs(s.gen.atlas, s.A, s.h);
  double worst       = 0.0;
  for (int c = 0; c < D.num_charts(); ++c) {
    for (int i = 0; i < s.gen.atlas.chart(c).size(); ++i) {
      if (!D.ok(c, i) || !sp.theta_original.ok(c, i)) { continue; }
      const auto MT = contract(model.algebra(), sp.theta_original.at(c, i), model.higgs_generators());
      worst         = std::max(worst, max_abs(MT[0] * s.h.at(c, i) - D.at(c, i).col(0)));
    }
  }
  EXPECT_GT(worst, 0.1);
}

TEST(Curvature, ZeroAndConstantAbelian)
{
  const auto & model = lie::group_model("SU2_U1");
  const auto grid    = BaseGrid::build(2, {8, 8}, 0.25);
  const Atlas atlas(grid, model, "a", single_chart(grid));
  EXPECT_EQ(max_norm(curvature(atlas, constant_connection(atlas, Mat::Zero(3, 2)))), 0.0);
  Mat a = Mat::Zero(3, 2);
  a(2, 0) = 0.7;
  a(2, 1) = -1.3;
  EXPECT_LE(max_norm(curvature(atlas, constant_connection(atlas, a))), 1e-15);
}

TEST(Curvature, PureGaugeIsFlatAndFieldIsAntisymmetric)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto grid    = BaseGrid::build(2, {16, 16}, 0.25);
    const Atlas atlas(grid, model, "a", box_cover(grid, default_segments(grid)));
    std::mt19937_64 rng(16);
    const auto g  = gauge_from_global(atlas, random_group_function(grid, model, gauge_amplitude(model), rng), "b");
    auto zero     = constant_connection(atlas, Mat::Zero(model.algebra().dim(), 2));
    const auto F0 = curvature(Atlas(grid, model, "b", atlas.charts()), transform_connection(model.algebra(), zero, g));
    EXPECT_LE(max_norm(F0), 20 * 0.25 * 0.25) << name;

    const auto s = random_setup(model, 17);
    const auto F = curvature(s.gen.atlas, s.A);
    for (int c = 0; c < F.num_charts(); ++c) {
      for (int i = 0; i < s.gen.atlas.chart(c).size(); ++i) {
        if (!F.ok(c, i)) { continue; }
        EXPECT_EQ(max_abs(F.at(c, i).col(1) + F.at(c, i).col(2)), 0.0);
        EXPECT_EQ(max_abs(F.at(c, i).col(0)), 0.0);
      }
    }
  }
}

TEST(Curvature, GaugeCovariant)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto s       = random_setup(model, 18);
    std::mt19937_64 rng(18);
    const auto g  = gauge_from_global(s.gen.atlas, random_group_function(s.gen.atlas.grid(), model, 0.3, rng), "b");
    const Atlas b(s.gen.atlas.grid(), model, "b", s.gen.atlas.charts());
    const auto F  = curvature(s.gen.atlas, s.A);
    const auto F2 = curvature(b, transform_connection(model.algebra(), s.A, g));
    double worst  = 0.0;
    for (int c = 0; c < F.num_charts(); ++c) {
      for (int i = 0; i < s.gen.atlas.chart(c).size(); ++i) {
        if (!F.ok(c, i) || !F2.ok(c, i)) { continue; }
        worst = std::max(worst, max_abs(F2.at(c, i) - model.algebra().adjoint(g.values.at(c, i).inverse()) * F.at(c, i)));
      }
    }
    EXPECT_LE(worst, 20 * 0.25 * 0.25) << name;
  }
}

TEST(Vertical, ConnectionRoundTripAndCovariance)
{
  for (const char * name : kModels) {
    const auto & model = lie::group_model(name);
    const auto s       = random_setup(model, 19);
    std::mt19937_64 rng(19);
    const auto f   = restrict_equivariant(s.gen, random_group_function(s.gen.atlas.grid(), model, 0.3 * higgs_amplitude(model), rng));
    const Configuration cfg{{s.h, std::nullopt}, s.A};
    const auto fwd = vertical_automorphism(s.gen.atlas, f, cfg);
    EXPECT_LE(connection_transition_residual(s.gen.atlas, *fwd.connection), tol2(s.gen.atlas));
    const auto back = vertical_automorphism(s.gen.atlas, f.inverse(), fwd);
    EXPECT_LE(max_difference(*back.connection, s.A), 1e-10) << name;
    // D^{A'}(f·h) = f·D^A h up to discretization
    const auto D  = covariant_differential_higgs(s.gen.atlas, s.A, s.h);
    const auto D2 = covariant_differential_higgs(s.gen.atlas, *fwd.connection, fwd.fields.higgs);
    double worst  = 0.0;
    for (int c = 0; c < D.num_charts(); ++c) {
      for (int i = 0; i < s.gen.atlas.chart(c).size(); ++i) {
        if (D.ok(c, i) && D2.ok(c, i)) { worst = std::max(worst, max_abs(D2.at(c, i) - model.coset_rep(f.values.at(c, i)) * D.at(c, i))); }
      }
    }
    EXPECT_LE(worst, tol2(s.gen.atlas)) << name;
  }
}

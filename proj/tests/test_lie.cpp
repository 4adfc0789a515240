#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "gauge/errors.hpp"
#include "gauge/lie/group.hpp"
#include "test_support.hpp"

using namespace gauge;
using namespace gauge::lie;

namespace {

const std::vector<std::string> kModels = {"SO3_SO2", "SU2_U1", "GL4_SO13"};

Vec unit(int n, int k) { return Vec::Unit(n, k); }

Mat commutator(const Mat & a, const Mat & b) { return a * b - b * a; }

}  // namespace

TEST(Algebra, Su2BracketMatchesMatrixCommutator)
{
  const auto & alg = group_model("SU2_U1").algebra();
  // oracle: commutator of the basis matrices, decomposed by hand against e_3
  const Mat c12 = commutator(alg.element(0), alg.element(1));
  ASSERT_LT(max_abs(c12 - alg.element(2)), 1e-15);
  EXPECT_LT(max_abs(alg.bracket(unit(3, 0), unit(3, 1)) - unit(3, 2)), 1e-12);

  const Mat c31 = commutator(alg.element(2), alg.element(0));
  ASSERT_LT(max_abs(c31 - alg.element(1)), 1e-15);
  EXPECT_LT(max_abs(alg.bracket(unit(3, 2), unit(3, 0)) - unit(3, 1)), 1e-12);
}

TEST(Algebra, BracketAntisymmetricAndMatchesCommutator)
{
  std::mt19937_64 rng(11);
  for (const auto & name : kModels) {
    const auto & alg = group_model(name).algebra();
    for (int k = 0; k < 20; ++k) {
      const Vec x = test_support::random_coeffs(alg.dim(), 1.0, rng);
      const Vec y = test_support::random_coeffs(alg.dim(), 1.0, rng);
      EXPECT_LT(max_abs(alg.bracket(x, x)), 1e-12) << name;
      const Mat direct = commutator(alg.to_matrix(x), alg.to_matrix(y));
      EXPECT_LT(max_abs(alg.to_matrix(alg.bracket(x, y)) - direct), 1e-12) << name;
    }
  }
}

TEST(Algebra, BracketRejectsLengthMismatch)
{
  const auto & alg = group_model("SU2_U1").algebra();
  EXPECT_THROW(alg.bracket(Vec::Zero(2), Vec::Zero(3)), DimensionError);
  EXPECT_THROW(alg.project_split(Vec::Zero(4)), DimensionError);
}

TEST(Algebra, RejectsDependentBasis)
{
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(AlgebraBasis({a, 2.0 * a}, {}), ModelError);
}

TEST(Algebra, RejectsNonClosingSubalgebra)
{
  const auto & so3 = group_model("SO3_SO2").algebra();
  EXPECT_THROW(AlgebraBasis({so3.element(0), so3.element(1), so3.element(2)}, {0, 1}), ModelError);
}

TEST(Algebra, ProjectSplitExamples)
{
  const auto & alg = group_model("SU2_U1").algebra();
  auto s           = alg.project_split(unit(3, 2));
  EXPECT_EQ(s.h_part, unit(3, 2));
  EXPECT_EQ(s.f_part, Vec::Zero(3));
  s = alg.project_split(unit(3, 0));
  EXPECT_EQ(s.h_part, Vec::Zero(3));
  EXPECT_EQ(s.f_part, unit(3, 0));
  const Vec x = 2.0 * unit(3, 0) + 5.0 * unit(3, 2);
  s           = alg.project_split(x);
  EXPECT_EQ(s.h_part, 5.0 * unit(3, 2));
  EXPECT_EQ(s.f_part, 2.0 * unit(3, 0));
}

TEST(Algebra, SplitProjectorsIdempotentAndComplementary)
{
  std::mt19937_64 rng(3);
  for (const auto & name : kModels) {
    const auto & alg = group_model(name).algebra();
    for (int k = 0; k < 20; ++k) {
      const Vec x = test_support::random_coeffs(alg.dim(), 2.0, rng);
      const auto s = alg.project_split(x);
      EXPECT_EQ(s.h_part + s.f_part, x);
      EXPECT_EQ(alg.project_split(s.h_part).h_part, s.h_part);
      EXPECT_EQ(alg.project_split(s.f_part).f_part, s.f_part);
      EXPECT_EQ(alg.project_split(s.h_part).f_part, Vec::Zero(alg.dim()));
    }
  }
}

TEST(Algebra, ReductiveChecks)
{
  for (const auto & name : kModels) {
    const auto r = check_reductive(group_model(name).algebra());
    EXPECT_TRUE(r.reductive) << name;
    EXPECT_LE(r.residual, 1e-12) << name;
  }
  // brute force over basis pairs, independent of the structure-constant table
  const auto & gl = group_model("GL4_SO13").algebra();
  for (int a : gl.h_indices()) {
    for (int b : gl.f_indices()) {
      const Mat c = commutator(gl.element(a), gl.element(b));
      const Mat eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal().toDenseMatrix();
      // f = {X : X η symmetric}
      EXPECT_LT(max_abs(c * eta - (c * eta).transpose()), 1e-12);
    }
  }

  Mat e1 = Mat::Zero(2, 2);
  Mat e2 = Mat::Zero(2, 2);
  e1(0, 0) = 1.0;
  e2(0, 1) = 1.0;
  ASSERT_LT(max_abs(commutator(e1, e2) - e2), 1e-15);
  const AlgebraBasis counter({e1, e2}, {1});
  const auto r = check_reductive(counter);
  EXPECT_FALSE(r.reductive);
  EXPECT_NEAR(r.residual, 1.0, 1e-12);
}

TEST(Algebra, AdjointOfHPreservesSplit)
{
  std::mt19937_64 rng(5);
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const auto & alg   = model.algebra();
    for (int k = 0; k < 10; ++k) {
      const Mat rho = test_support::random_h_matrix(model, 1.0, rng);
      const Mat ad  = alg.adjoint(rho);
      for (int a : alg.h_indices()) {
        for (int b : alg.f_indices()) {
          EXPECT_LT(std::abs(ad(b, a)), 1e-10) << name;
          EXPECT_LT(std::abs(ad(a, b)), 1e-10) << name;
        }
      }
    }
  }
}

TEST(ExpMap, IdentityInverseAndPhase)
{
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const int d        = model.algebra().dim();
    EXPECT_LT(max_abs(exp_map(model, Vec::Zero(d)).matrix - model.identity()), 1e-15);
    std::mt19937_64 rng(1);
    const Vec x = test_support::random_coeffs(d, 1.0, rng);
    const Mat g = exp_map(model, x).matrix;
    const Mat ginv = exp_map(model, x, -1.0).matrix;
    EXPECT_LT(max_abs(g * ginv - model.identity()), 1e-12) << name;
    EXPECT_LT(max_abs(g - test_support::taylor_exp(model.algebra().to_matrix(x))), 1e-12) << name;
    EXPECT_LE(model.membership_residual(g), kMembershipTol) << name;
  }

  // SU(2): exp(t e_3) = diag(e^{-it/2}, e^{it/2}) in real form
  const auto & su2 = group_model("SU2_U1");
  const double t   = 0.7;
  const Mat g      = exp_map(su2, unit(3, 2), t).matrix;
  Mat expected     = Mat::Zero(4, 4);
  expected(0, 0) = expected(2, 2) = std::cos(t / 2);
  expected(1, 1) = expected(3, 3) = std::cos(t / 2);
  expected(2, 0) = -std::sin(t / 2);
  expected(0, 2) = std::sin(t / 2);
  expected(3, 1) = std::sin(t / 2);
  expected(1, 3) = -std::sin(t / 2);
  EXPECT_LT(max_abs(g - expected), 1e-14);
  EXPECT_LT(max_abs(g - test_support::taylor_exp(t * su2.algebra().element(2))), 1e-13);
}

TEST(GroupModel, HiggsAndFiberGeneratorsSatisfyStructureRelations)
{
  // Linear vector fields X_M(σ) = M σ have [X_M, X_N] = X_{[N, M]}.
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const auto & alg   = model.algebra();
    for (int p = 0; p < alg.dim(); ++p) {
      for (int q = 0; q < alg.dim(); ++q) {
        Mat rhs = Mat::Zero(model.coset_dim(), model.coset_dim());
        for (int r = 0; r < alg.dim(); ++r) { rhs += alg.structure_constant(r, p, q) * model.higgs_generator(r); }
        EXPECT_LT(max_abs(commutator(model.higgs_generator(q), model.higgs_generator(p)) - rhs), 1e-10) << name;
      }
    }
    const auto h = alg.h_indices();
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = 0; j < h.size(); ++j) {
        Mat rhs = Mat::Zero(model.fiber_dim(), model.fiber_dim());
        for (std::size_t k = 0; k < h.size(); ++k) {
          rhs += alg.structure_constant(h[k], h[i], h[j]) * model.fiber_generator(static_cast<int>(k));
        }
        const Mat lhs = commutator(model.fiber_generator(static_cast<int>(j)), model.fiber_generator(static_cast<int>(i)));
        EXPECT_LT(max_abs(lhs - rhs), 1e-10) << name;
      }
    }
  }
}

TEST(GroupModel, StabilizerOfCenterContainsExpH)
{
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    for (int a : model.algebra().h_indices()) {
      for (double t : {0.1, 0.5}) {
        const Mat g = matrix_exp(t * model.algebra().element(a));
        EXPECT_LT(max_abs(model.act(g, model.center()) - model.center()), 1e-10) << name;
        EXPECT_LE(model.h_membership_residual(g), 1e-10) << name;
      }
    }
    for (int b : model.algebra().f_indices()) {
      EXPECT_GT(model.h_membership_residual(matrix_exp(model.algebra().element(b))), 0.1) << name;
    }
  }
}

TEST(CosetProject, CenterAndStabilizer)
{
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const auto p       = coset_project(make_element(model, model.identity()));
    EXPECT_EQ(p.coords, model.center());
  }
  const auto & su2 = group_model("SU2_U1");
  for (double t : {0.3, 1.7, -2.5}) {
    const auto p = coset_project(exp_map(su2, unit(3, 2), t));
    EXPECT_LT(max_abs(p.coords - su2.center()), 1e-14);
  }
}

TEST(CosetProject, RejectsNonMember)
{
  const auto & so3 = group_model("SO3_SO2");
  EXPECT_THROW(coset_project(GroupElement{&so3, 2.0 * Mat::Identity(3, 3)}), MembershipError);
  EXPECT_THROW(make_element(so3, 2.0 * Mat::Identity(3, 3)), MembershipError);
}

TEST(CosetProject, Gl4ProducesSignatureOneThree)
{
  const auto & gl = group_model("GL4_SO13");
  std::mt19937_64 rng(9);
  const Mat eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal().toDenseMatrix();
  for (int k = 0; k < 20; ++k) {
    const Mat g   = test_support::random_group_matrix(gl, 0.6, rng);
    const auto p  = coset_project(make_element(gl, g));
    const Mat gm  = g * eta * g.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(gm);
    const Vec ev = es.eigenvalues();
    EXPECT_LT(ev(2), 0.0);
    EXPECT_GT(ev(3), 0.0);
    EXPECT_LT(gl.coset_constraint_residual(p.coords), 1e-12);
    // upper-triangular row-major coordinates
    EXPECT_NEAR(p.coords(1), gm(0, 1), 1e-12);
    EXPECT_NEAR(p.coords(4), gm(1, 1), 1e-12);
    EXPECT_NEAR(p.coords(9), gm(3, 3), 1e-12);
  }
}

TEST(CosetProject, InvariantUnderRightH)
{
  std::mt19937_64 rng(21);
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    for (int k = 0; k < 20; ++k) {
      const Mat g   = test_support::random_group_matrix(model, 0.8, rng);
      const Mat rho = test_support::random_h_matrix(model, 1.5, rng);
      const auto p1 = coset_project(make_element(model, g));
      const auto p2 = coset_project(make_element(model, g * rho));
      EXPECT_LT(max_abs(p1.coords - p2.coords), 1e-10) << name;
    }
  }
}

TEST(CosetSection, NormalisedAtCenter)
{
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    EXPECT_LT(max_abs(coset_section(model, {model.center()}, 0).matrix - model.identity()), 1e-15) << name;
  }
}

TEST(CosetSection, EquatorPointMatchesAxisAngleRotation)
{
  const auto & so3 = group_model("SO3_SO2");
  const Vec sigma  = Vec::Unit(3, 0);
  const Mat z      = coset_section(so3, {sigma}, 0).matrix;
  // oracle: rotation by π/2 about e_z × e_x = e_y
  const Mat oracle = test_support::taylor_exp(std::numbers::pi / 2 * so3.algebra().element(1));
  EXPECT_LT(max_abs(z - oracle), 1e-12);
  EXPECT_LT(max_abs(z * Vec::Unit(3, 2) - sigma), 1e-12);

  const auto & su2 = group_model("SU2_U1");
  const Mat u      = coset_section(su2, {sigma}, 0).matrix;
  EXPECT_LT(max_abs(su2.act(u, su2.center()) - sigma), 1e-12);
  EXPECT_LT(max_abs(u - test_support::taylor_exp(std::numbers::pi / 2 * su2.algebra().element(1))), 1e-12);
}

TEST(CosetSection, Gl4SignatureSquareRoot)
{
  const auto & gl = group_model("GL4_SO13");
  std::mt19937_64 rng(4);
  const Mat eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal().toDenseMatrix();
  for (int k = 0; k < 20; ++k) {
    const Mat g      = test_support::random_group_matrix(gl, 0.4, rng);
    const Vec sigma  = gl.act(g, gl.center());
    const Mat s      = gl.section(sigma, 0);
    const Mat metric = g * eta * g.transpose();
    EXPECT_LT(max_abs(s * eta * s.transpose() - metric), 1e-10);
    EXPECT_GT(s.determinant(), 0.0);
  }
}

TEST(CosetSection, OutsideChartThrows)
{
  const auto & so3 = group_model("SO3_SO2");
  EXPECT_THROW(so3.section(-Vec::Unit(3, 2), 0), ChartDomainError);
  EXPECT_THROW(so3.section(Vec::Unit(3, 2), 1), ChartDomainError);
  const auto & gl = group_model("GL4_SO13");
  EXPECT_THROW(gl.section(-gl.center(), 0), ChartDomainError);
  EXPECT_THROW(gl.preferred_chart(-gl.center()), ChartDomainError);
}

TEST(CosetSection, ProjectAfterSectionIsIdentityAndContinuous)
{
  std::mt19937_64 rng(31);
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    for (int chart = 0; chart < model.num_coset_charts(); ++chart) {
      int checked = 0;
      for (int k = 0; k < 200 && checked < 40; ++k) {
        const Mat g     = test_support::random_group_matrix(model, name == "GL4_SO13" ? 0.5 : 3.0, rng);
        const Vec sigma = model.act(g, model.center());
        if (model.chart_margin(sigma, chart) < 0.05) { continue; }
        ++checked;
        const Mat z = model.section(sigma, chart);
        EXPECT_LT(max_abs(model.act(z, model.center()) - sigma), 1e-10) << name;
        EXPECT_LE(model.membership_residual(z), 1e-10) << name;
        // continuity: a small step in σ moves z by a comparable amount
        const Vec step = 1e-6 * model.higgs_generator(0) * sigma;
        EXPECT_LT(max_abs(model.section(sigma + step, chart) - z), 1e-4) << name;
      }
      EXPECT_GT(checked, 10) << name;
    }
  }
}

TEST(CosetSection, ComplexStepDerivativeMatchesCentralDifference)
{
  std::mt19937_64 rng(8);
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const Mat g        = test_support::random_group_matrix(model, 0.4, rng);
    const Vec sigma    = model.act(g, model.center());
    const Vec dir      = model.higgs_generator(0) * sigma + model.higgs_generator(1) * sigma;
    const int chart    = model.preferred_chart(sigma);
    const double h     = 1e-5;
    const Mat fd = (model.section(sigma + h * dir, chart) - model.section(sigma - h * dir, chart)) / (2 * h);
    EXPECT_LT(max_abs(model.section_derivative(sigma, chart, dir) - fd), 1e-8) << name;
  }
}

TEST(InducedAction, IdentityAndStabilizer)
{
  std::mt19937_64 rng(2);
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const Mat g        = test_support::random_group_matrix(model, 0.4, rng);
    const CosetPoint sigma{model.act(g, model.center())};
    const Vec v = test_support::random_coeffs(model.fiber_dim(), 1.0, rng);
    const auto r = induced_action(make_element(model, model.identity()), sigma, v);
    EXPECT_LT(max_abs(r.point.coords - sigma.coords), 1e-12);
    EXPECT_LT(max_abs(r.fiber - v), 1e-12);

    const Mat rho = test_support::random_h_matrix(model, 1.0, rng);
    const auto s  = induced_action(make_element(model, rho), {model.center()}, v);
    EXPECT_LT(max_abs(s.point.coords - model.center()), 1e-12);
    EXPECT_LT(max_abs(s.fiber - model.fiber_rep(rho) * v), 1e-12);
  }
}

TEST(InducedAction, LeftActionLawOnRandomTriples)
{
  std::mt19937_64 rng(17);
  for (const auto & name : kModels) {
    const auto & model = group_model(name);
    const double amp   = name == "GL4_SO13" ? 0.12 : 2.0;
    for (int k = 0; k < 100; ++k) {
      const auto g1 = make_element(model, test_support::random_group_matrix(model, amp, rng));
      const auto g2 = make_element(model, test_support::random_group_matrix(model, amp, rng));
      const CosetPoint sigma{model.act(test_support::random_group_matrix(model, amp, rng), model.center())};
      const Vec v = test_support::random_coeffs(model.fiber_dim(), 1.0, rng);

      const auto one   = induced_action(g1, sigma, v);
      const auto two   = induced_action(g2, one.point, one.fiber);
      const auto both  = induced_action(make_element(model, g2.matrix * g1.matrix), sigma, v);
      EXPECT_LT(max_abs(two.point.coords - both.point.coords), 1e-10) << name;
      EXPECT_LT(max_abs(two.fiber - both.fiber), 1e-10) << name;
      EXPECT_LE(model.h_membership_residual(one.compensator), 1e-10) << name;
    }
  }
}

TEST(InducedAction, WrongChartBookkeepingIsDetected)
{
  // Feeding a chart whose section does not cover the image point must fail loudly.
  const auto & so3 = group_model("SO3_SO2");
  const auto g     = make_element(so3, matrix_exp(std::numbers::pi * so3.algebra().element(0)));
  EXPECT_THROW(induced_action(g, {so3.center()}, Vec::Zero(2), 0, 0), ChartDomainError);
}

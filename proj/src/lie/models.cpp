#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "gauge/errors.hpp"
#include "gauge/lie/group_model.hpp"

namespace gauge::lie {

namespace {

using Cplx = std::complex<double>;

Vec unit_z() { return Vec::Unit(3, 2); }

// Unit vector σ/|σ| without complex conjugation, so it stays analytic under complex step.
VecC normalised(const VecC & s)
{
  const Cplx norm2 = (s.array() * s.array()).sum();
  return s / std::sqrt(norm2);
}

/**
 * Shared structure of the two-sphere models: coset coordinates are unit 3-vectors with center
 * e_z, covered by a north cap (excludes -e_z) and a south cap (excludes e_z). The south section
 * is F z_north(F⁻¹·σ) for a fixed flip F with F·e_z = -e_z.
 */
class SphereModel : public GroupModel
{
public:
  double coset_constraint_residual(const Vec & s) const override { return std::abs(s.norm() - 1.0); }

  Vec tangent_projection(const Vec & s, const Vec & v) const override
  {
    return v - s * (s.dot(v) / s.squaredNorm());
  }

  double chart_margin(const Vec & s, int chart) const override
  {
    const double r = s.norm();
    if (!(r > 0.0)) { return -1.0; }
    const double nz = s(2) / r;
    return chart == 0 ? 1.0 + nz : 1.0 - nz;
  }

protected:
  SphereModel(std::string name, AlgebraBasis algebra, Mat fiber_metric, Mat flip)
      : GroupModel(std::move(name), std::move(algebra), unit_z(), {"north", "south"}, std::move(fiber_metric)),
        flip_(std::move(flip))
  {}

  /// Group element carrying e_z to the unit vector n; identity at n = e_z.
  virtual MatC north_section(const VecC & n) const = 0;

  MatC section_impl(const VecC & s, int chart) const override
  {
    const VecC n = normalised(s);
    if (chart == 0) { return north_section(n); }
    const MatC f = flip_.cast<Cplx>();
    const MatC finv = flip_.inverse().cast<Cplx>();
    return f * north_section(coset_rep_impl(finv) * n);
  }

private:
  Mat flip_;
};

// ---------------------------------------------------------------------------------------------
// SO(3) / SO(2): rotations acting on S², H = rotations about e_z, V = R² (the rotated plane).

Mat so3_generator(int p)
{
  Mat L = Mat::Zero(3, 3);
  const int i = (p + 1) % 3;
  const int j = (p + 2) % 3;
  L(j, i) = 1.0;
  L(i, j) = -1.0;
  return L;
}

class So3So2 final : public SphereModel
{
public:
  So3So2()
      : SphereModel("SO3_SO2", AlgebraBasis({so3_generator(0), so3_generator(1), so3_generator(2)}, {2}),
                    Mat::Identity(2, 2), Vec(Eigen::Vector3d(1.0, -1.0, -1.0)).asDiagonal().toDenseMatrix())
  {
    finalize();
  }

  double membership_residual(const Mat & g) const override
  {
    if (g.rows() != 3 || g.cols() != 3) { return 1.0; }
    return std::max(max_abs(g.transpose() * g - Mat::Identity(3, 3)), std::abs(g.determinant() - 1.0));
  }

  Mat fiber_rep(const Mat & rho) const override { return rho.topLeftCorner(2, 2); }

  std::vector<Mat> h_sample(int count) const override
  {
    std::vector<Mat> out;
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      out.push_back(matrix_exp(t * algebra().element(2)));
    }
    return out;
  }

protected:
  MatC coset_rep_impl(const MatC & g) const override { return g; }

  MatC north_section(const VecC & n) const override
  {
    MatC K = MatC::Zero(3, 3);
    K(0, 2) = n(0);
    K(1, 2) = n(1);
    K(2, 0) = -n(0);
    K(2, 1) = -n(1);
    return MatC::Identity(3, 3) + K + K * K / (Cplx(1.0) + n(2));
  }
};

// ---------------------------------------------------------------------------------------------
// SU(2) / U(1): 2x2 unitaries stored as their real 4x4 form [[Re, -Im], [Im, Re]]. The coset model
// is S² via U (σ·τ) U†, H = exp(t e_3) = diag phases, V = C² ≅ R⁴ with the fundamental action.

template<typename Scalar>
Eigen::Matrix<Scalar, -1, -1> realify(const Eigen::Matrix2cd & u)
{
  Eigen::Matrix<Scalar, -1, -1> m(4, 4);
  m.topLeftCorner(2, 2)     = u.real().cast<Scalar>();
  m.topRightCorner(2, 2)    = -u.imag().cast<Scalar>();
  m.bottomLeftCorner(2, 2)  = u.imag().cast<Scalar>();
  m.bottomRightCorner(2, 2) = u.real().cast<Scalar>();
  return m;
}

Eigen::Matrix2cd pauli(int k)
{
  Eigen::Matrix2cd t;
  const Cplx i(0.0, 1.0);
  switch (k) {
  case 0: t << 0, 1, 1, 0; break;
  case 1: t << 0, -i, i, 0; break;
  default: t << 1, 0, 0, -1; break;
  }
  return t;
}

class Su2U1 final : public SphereModel
{
public:
  Su2U1()
      : SphereModel("SU2_U1", AlgebraBasis({su2_generator(0), su2_generator(1), su2_generator(2)}, {2}),
                    Mat::Identity(4, 4), realify<double>(Cplx(0.0, -1.0) * pauli(0)))
  {
    for (int k = 0; k < 3; ++k) { tau_[k] = realify<Cplx>(pauli(k)); }
    finalize();
  }

  double membership_residual(const Mat & g) const override
  {
    if (g.rows() != 4 || g.cols() != 4) { return 1.0; }
    const Mat A = g.topLeftCorner(2, 2);
    const Mat B = g.bottomLeftCorner(2, 2);
    double r    = std::max(max_abs(g.bottomRightCorner(2, 2) - A), max_abs(g.topRightCorner(2, 2) + B));
    r           = std::max(r, max_abs(g.transpose() * g - Mat::Identity(4, 4)));
    const Eigen::Matrix2cd u = A.cast<Cplx>() + Cplx(0.0, 1.0) * B.cast<Cplx>();
    return std::max(r, std::abs(u.determinant() - Cplx(1.0)));
  }

  Mat fiber_rep(const Mat & rho) const override { return rho; }

  std::vector<Mat> h_sample(int count) const override
  {
    std::vector<Mat> out;
    for (int k = 0; k < count; ++k) {
      const double t = 4.0 * std::numbers::pi * k / count;
      out.push_back(matrix_exp(t * algebra().element(2)));
    }
    return out;
  }

protected:
  MatC coset_rep_impl(const MatC & g) const override
  {
    MatC r(3, 3);
    const MatC gt = g.transpose();
    for (int j = 0; j < 3; ++j) {
      const MatC m = g * tau_[j] * gt;
      for (int k = 0; k < 3; ++k) { r(k, j) = (tau_[k] * m).trace() / 4.0; }
    }
    return r;
  }

  // U = (1 + (n·τ) τ₃) / sqrt(2 (1 + n_z))
  MatC north_section(const VecC & n) const override
  {
    const MatC N = n(0) * tau_[0] + n(1) * tau_[1] + n(2) * tau_[2];
    return (MatC::Identity(4, 4) + N * tau_[2]) / std::sqrt(Cplx(2.0) * (Cplx(1.0) + n(2)));
  }

private:
  static Mat su2_generator(int p) { return realify<double>(Cplx(0.0, -0.5) * pauli(p)); }

  MatC tau_[3];
};

// ---------------------------------------------------------------------------------------------
// GL⁺(4) / SO⁺(1,3): the coset model is symmetric 4x4 matrices of signature (1,3), acted on by
// σ ↦ g σ gᵀ, with center η. Coordinates are the upper triangle in row-major order. The section
// is z(σ) = L·diag(√d₀, √-d₁, √-d₂, √-d₃) from σ = L D Lᵀ, defined where D has signs (+,-,-,-).

constexpr int kSymPairs[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};

Mat eta4() { return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal().toDenseMatrix(); }

template<typename Scalar>
Eigen::Matrix<Scalar, -1, -1> sym_basis(int k)
{
  Eigen::Matrix<Scalar, -1, -1> s = Eigen::Matrix<Scalar, -1, -1>::Zero(4, 4);
  const int i = kSymPairs[k][0];
  const int j = kSymPairs[k][1];
  s(i, j)     = Scalar(1.0);
  s(j, i)     = Scalar(1.0);
  return s;
}

template<typename Scalar>
Eigen::Matrix<Scalar, -1, 1> sym_coords(const Eigen::Matrix<Scalar, -1, -1> & m)
{
  Eigen::Matrix<Scalar, -1, 1> c(10);
  for (int k = 0; k < 10; ++k) { c(k) = m(kSymPairs[k][0], kSymPairs[k][1]); }
  return c;
}

template<typename Scalar>
Eigen::Matrix<Scalar, -1, -1> sym_matrix(const Eigen::Matrix<Scalar, -1, 1> & c)
{
  Eigen::Matrix<Scalar, -1, -1> m(4, 4);
  for (int k = 0; k < 10; ++k) {
    m(kSymPairs[k][0], kSymPairs[k][1]) = c(k);
    m(kSymPairs[k][1], kSymPairs[k][0]) = c(k);
  }
  return m;
}

/// Unpivoted L D Lᵀ; returns false if a pivot vanishes.
template<typename Scalar>
bool ldl(const Eigen::Matrix<Scalar, -1, -1> & s, Eigen::Matrix<Scalar, -1, -1> & L, Eigen::Matrix<Scalar, -1, 1> & d)
{
  const int n = static_cast<int>(s.rows());
  L           = Eigen::Matrix<Scalar, -1, -1>::Identity(n, n);
  d.resize(n);
  for (int j = 0; j < n; ++j) {
    Scalar dj = s(j, j);
    for (int k = 0; k < j; ++k) { dj -= L(j, k) * L(j, k) * d(k); }
    if (std::abs(dj) == 0.0) { return false; }
    d(j) = dj;
    for (int i = j + 1; i < n; ++i) {
      Scalar v = s(i, j);
      for (int k = 0; k < j; ++k) { v -= L(i, k) * L(j, k) * d(k); }
      L(i, j) = v / dj;
    }
  }
  return true;
}

std::vector<Mat> gl4_basis()
{
  std::vector<Mat> b;
  const Mat eta = eta4();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Mat a = Mat::Zero(4, 4);
      a(i, j) = 1.0;
      a(j, i) = -1.0;
      b.push_back(a * eta);
    }
  }
  for (int k = 0; k < 10; ++k) { b.push_back(sym_basis<double>(k) * eta); }
  return b;
}

class Gl4So13 final : public GroupModel
{
public:
  Gl4So13()
      : GroupModel("GL4_SO13", AlgebraBasis(gl4_basis(), {0, 1, 2, 3, 4, 5}), sym_coords<double>(eta4()), {"ldl"},
                   eta4())
  {
    finalize();
  }

  double membership_residual(const Mat & g) const override
  {
    if (g.rows() != 4 || g.cols() != 4) { return 1.0; }
    const double det = g.determinant();
    if (std::abs(det) < 1e-14) { return 1.0; }
    return std::abs(det) - det;
  }

  double coset_constraint_residual(const Vec & s) const override
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym_matrix<double>(s));
    const Vec ev = es.eigenvalues();  // ascending
    double r     = std::max(0.0, -ev(3));
    for (int k = 0; k < 3; ++k) { r = std::max(r, std::max(0.0, ev(k))); }
    return r;
  }

  double chart_margin(const Vec & s, int) const override
  {
    Mat L;
    Vec d;
    if (!ldl<double>(sym_matrix<double>(s), L, d)) { return -1.0; }
    return std::min({d(0), -d(1), -d(2), -d(3)});
  }

  Mat fiber_rep(const Mat & rho) const override { return rho; }

  bool euclidean_fiber() const override { return true; }

  Vec to_euclidean(const Vec & s) const override
  {
    if (!(chart_margin(s, 0) > kChartMargin)) { throw ChartDomainError("GL4_SO13: metric outside the LDL chart"); }
    Mat L;
    Vec d;
    ldl<double>(sym_matrix<double>(s), L, d);
    Vec u(10);
    int k = 0;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) { u(k++) = L(i, j); }
    }
    u(6) = std::log(d(0));
    for (int j = 1; j < 4; ++j) { u(6 + j) = std::log(-d(j)); }
    return u;
  }

  Vec from_euclidean(const Vec & u) const override
  {
    if (u.size() != 10) { throw DimensionError("GL4_SO13 Euclidean coordinates have 10 entries"); }
    Mat L = Mat::Identity(4, 4);
    int k = 0;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) { L(i, j) = u(k++); }
    }
    Vec d(4);
    d(0) = std::exp(u(6));
    for (int j = 1; j < 4; ++j) { d(j) = -std::exp(u(6 + j)); }
    return sym_coords<double>(Mat(L * d.asDiagonal() * L.transpose()));
  }

  std::vector<Mat> h_sample(int count) const override
  {
    std::vector<Mat> out{identity()};
    std::mt19937_64 rng(0x5eed1234ULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (static_cast<int>(out.size()) < count) {
      Mat X = Mat::Zero(4, 4);
      for (int a : algebra().h_indices()) { X += u(rng) * algebra().element(a); }
      out.push_back(matrix_exp(X));
    }
    return out;
  }

protected:
  double extra_h_residual(const Mat & g) const override
  {
    return std::max(std::abs(g.determinant() - 1.0), std::max(0.0, 1.0 - g(0, 0)));
  }

  MatC coset_rep_impl(const MatC & g) const override
  {
    MatC r(10, 10);
    const MatC gt = g.transpose();
    for (int k = 0; k < 10; ++k) { r.col(k) = sym_coords<Cplx>(MatC(g * sym_basis<Cplx>(k) * gt)); }
    return r;
  }

  MatC section_impl(const VecC & s, int) const override
  {
    MatC L;
    VecC d;
    if (!ldl<Cplx>(sym_matrix<Cplx>(s), L, d)) { throw ChartDomainError("GL4_SO13: singular pivot"); }
    VecC root(4);
    root(0) = std::sqrt(d(0));
    for (int j = 1; j < 4; ++j) { root(j) = std::sqrt(-d(j)); }
    return L * root.asDiagonal();
  }
};

}  // namespace

const GroupModel & group_model(std::string_view name)
{
  static const So3So2 so3;
  static const Su2U1 su2;
  static const Gl4So13 gl4;
  if (name == "SO3_SO2") { return so3; }
  if (name == "SU2_U1") { return su2; }
  if (name == "GL4_SO13") { return gl4; }
  throw UsageError("unknown group model '" + std::string(name) + "'");
}

std::vector<std::string> group_model_names() { return {"SO3_SO2", "SU2_U1", "GL4_SO13"}; }

}  // namespace gauge::lie

#include "gauge/lie/algebra.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "gauge/errors.hpp"

namespace gauge::lie {

namespace {

constexpr double kStructureTol = 1e-12;

Vec vectorise(const Mat & m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

}  // namespace

AlgebraBasis::AlgebraBasis(std::vector<Mat> basis, std::vector<int> h_indices)
    : basis_(std::move(basis)), h_indices_(std::move(h_indices))
{
  if (basis_.empty()) { throw DimensionError("empty algebra basis"); }
  const auto d = basis_.front().rows();
  for (const auto & e : basis_) {
    if (e.rows() != d || e.cols() != d) { throw DimensionError("basis matrices must be square and equal-sized"); }
  }

  const int n = dim();
  is_h_.assign(static_cast<std::size_t>(n), 0);
  for (int a : h_indices_) {
    if (a < 0 || a >= n) { throw DimensionError("h index out of range"); }
    if (is_h_[static_cast<std::size_t>(a)]) { throw DimensionError("duplicate h index"); }
    is_h_[static_cast<std::size_t>(a)] = 1;
  }
  std::sort(h_indices_.begin(), h_indices_.end());
  for (int p = 0; p < n; ++p) {
    if (!is_h_[static_cast<std::size_t>(p)]) { f_indices_.push_back(p); }
  }

  Mat B(d * d, n);
  for (int p = 0; p < n; ++p) { B.col(p) = vectorise(basis_[static_cast<std::size_t>(p)]); }
  const Mat gram = B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-12 * lmax)) {
    throw ModelError("basis matrices are linearly dependent");
  }
  solver_ = gram.ldlt().solve(B.transpose());

  c_.assign(static_cast<std::size_t>(n * n * n), 0.0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const Mat & ep = basis_[static_cast<std::size_t>(p)];
      const Mat & eq = basis_[static_cast<std::size_t>(q)];
      const Mat comm = ep * eq - eq * ep;
      const Vec coeff = coefficients(comm);
      if (max_abs(to_matrix(coeff) - comm) > kStructureTol) {
        throw ModelError("basis does not close under the commutator");
      }
      for (int r = 0; r < n; ++r) { c_[index(r, p, q)] = coeff(r); }
    }
  }

  for (int a : h_indices_) {
    for (int b : h_indices_) {
      for (int f : f_indices_) {
        if (std::abs(c_[index(f, a, b)]) > kStructureTol) {
          throw ModelError("h part is not a subalgebra");
        }
      }
    }
  }
}

void AlgebraBasis::check_length(const Vec & x) const
{
  if (x.size() != dim()) {
    throw DimensionError("algebra coefficient vector has length " + std::to_string(x.size())
                         + ", expected " + std::to_string(dim()));
  }
}

Mat AlgebraBasis::to_matrix(const Vec & x) const
{
  check_length(x);
  Mat out = Mat::Zero(matrix_size(), matrix_size());
  for (int p = 0; p < dim(); ++p) {
    if (x(p) != 0.0) { out += x(p) * basis_[static_cast<std::size_t>(p)]; }
  }
  return out;
}

Vec AlgebraBasis::coefficients(const Mat & X) const
{
  if (X.rows() != matrix_size() || X.cols() != matrix_size()) {
    throw DimensionError("matrix size does not match the algebra representation");
  }
  return solver_ * vectorise(X);
}

Vec AlgebraBasis::bracket(const Vec & x, const Vec & y) const
{
  check_length(x);
  check_length(y);
  const int n = dim();
  Vec out = Vec::Zero(n);
  for (int p = 0; p < n; ++p) {
    if (x(p) == 0.0) { continue; }
    for (int q = 0; q < n; ++q) {
      if (y(q) == 0.0) { continue; }
      const double w = x(p) * y(q);
      for (int r = 0; r < n; ++r) { out(r) += w * c_[index(r, p, q)]; }
    }
  }
  return out;
}

Split AlgebraBasis::project_split(const Vec & x) const
{
  check_length(x);
  Split s{Vec::Zero(dim()), Vec::Zero(dim())};
  for (int a : h_indices_) { s.h_part(a) = x(a); }
  for (int b : f_indices_) { s.f_part(b) = x(b); }
  return s;
}

Mat AlgebraBasis::adjoint(const Mat & g) const
{
  const Mat ginv = g.inverse();
  Mat ad(dim(), dim());
  for (int p = 0; p < dim(); ++p) {
    ad.col(p) = coefficients(g * basis_[static_cast<std::size_t>(p)] * ginv);
  }
  return ad;
}

ReductiveCheck check_reductive(const AlgebraBasis & algebra)
{
  double residual = 0.0;
  for (int a : algebra.h_indices()) {
    for (int b : algebra.f_indices()) {
      for (int r : algebra.h_indices()) {
        residual = std::max(residual, std::abs(algebra.structure_constant(r, a, b)));
      }
    }
  }
  return {residual <= kStructureTol, residual};
}

}  // namespace gauge::lie

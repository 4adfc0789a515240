#pragma once

#include <span>
#include <vector>

#include "gauge/types.hpp"

namespace gauge::lie {

/// Coefficients of an element split along h ⊕ f.
struct Split
{
  Vec h_part;
  Vec f_part;
};

/**
 * @brief Basis {e_p} of a real matrix Lie algebra with a designated subalgebra part.
 *
 * The subalgebra h is spanned by the basis elements listed in h_indices, the complement f by
 * the remaining ones. Structure constants c^r_{pq} are computed at construction from
 * [e_p, e_q] = c^r_{pq} e_r and validated:
 *
 *   - the Gram matrix of tr(e_p^T e_q) is nonsingular,
 *   - every commutator lies in the span to 1e-12 per entry,
 *   - h closes under the bracket to 1e-12.
 *
 * Any violation throws ModelError.
 */
class AlgebraBasis
{
public:
  AlgebraBasis(std::vector<Mat> basis, std::vector<int> h_indices);

  int dim() const { return static_cast<int>(basis_.size()); }
  int matrix_size() const { return static_cast<int>(basis_.front().rows()); }

  const Mat & element(int p) const { return basis_.at(static_cast<std::size_t>(p)); }
  std::span<const int> h_indices() const { return h_indices_; }
  std::span<const int> f_indices() const { return f_indices_; }
  bool in_h(int p) const { return is_h_.at(static_cast<std::size_t>(p)) != 0; }

  /// c^r_{pq}
  double structure_constant(int r, int p, int q) const { return c_[index(r, p, q)]; }

  /// X = x^p e_p
  Mat to_matrix(const Vec & x) const;

  /// Least-squares coefficients of X in the basis.
  Vec coefficients(const Mat & X) const;

  /// Coefficients of [X, Y] via structure constants. Throws DimensionError on length mismatch.
  Vec bracket(const Vec & x, const Vec & y) const;

  Split project_split(const Vec & x) const;

  /// Matrix of Ad(g) acting on coefficient vectors: coefficients(g X g^-1) = Ad(g) x.
  Mat adjoint(const Mat & g) const;

private:
  std::size_t index(int r, int p, int q) const
  {
    const auto n = static_cast<std::size_t>(dim());
    return (static_cast<std::size_t>(r) * n + static_cast<std::size_t>(p)) * n
         + static_cast<std::size_t>(q);
  }
  void check_length(const Vec & x) const;

  std::vector<Mat> basis_;
  std::vector<int> h_indices_;
  std::vector<int> f_indices_;
  std::vector<char> is_h_;
  std::vector<double> c_;
  Mat solver_;  // (B^T B)^-1 B^T on vectorised matrices
};

struct ReductiveCheck
{
  bool reductive;
  double residual;
};

/// [h, f] ⊂ f: largest h-component of [e_a, e_b] over a ∈ h, b ∈ f, compared against 1e-12.
ReductiveCheck check_reductive(const AlgebraBasis & algebra);

}  // namespace gauge::lie

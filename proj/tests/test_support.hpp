#pragma once

#include <random>

#include "gauge/lie/group.hpp"

namespace gauge::test_support {

inline Vec random_coeffs(int n, double amplitude, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  Vec x(n);
  for (int i = 0; i < n; ++i) { x(i) = u(rng); }
  return x;
}

inline Mat random_group_matrix(const lie::GroupModel & model, double amplitude, std::mt19937_64 & rng)
{
  return lie::matrix_exp(model.algebra().to_matrix(random_coeffs(model.algebra().dim(), amplitude, rng)));
}

inline Mat random_h_matrix(const lie::GroupModel & model, double amplitude, std::mt19937_64 & rng)
{
  Vec x = Vec::Zero(model.algebra().dim());
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  for (int a : model.algebra().h_indices()) { x(a) = u(rng); }
  return lie::matrix_exp(model.algebra().to_matrix(x));
}

/// Truncated Taylor series with scaling and squaring; test-side oracle for the exponential.
inline Mat taylor_exp(const Mat & X)
{
  int squarings = 0;
  Mat Y         = X;
  while (max_abs(Y) > 0.05) {
    Y /= 2.0;
    ++squarings;
  }
  Mat term = Mat::Identity(X.rows(), X.cols());
  Mat sum  = term;
  for (int k = 1; k < 25; ++k) {
    term = term * Y / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) { sum = sum * sum; }
  return sum;
}

}  // namespace gauge::test_support

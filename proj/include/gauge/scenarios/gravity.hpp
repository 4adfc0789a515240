#pragma once

#include <random>

#include "gauge/connection/connection.hpp"

namespace gauge::scenarios {

/// Coordinates of the symmetric 4x4 matrix used by GL4_SO13 (upper triangle, row-major).
Vec metric_coords(const Mat & m);
Mat metric_matrix(const Vec & c);

/// Linear connection Γ_λ (matrices (Γ_λ)^μ_ν = Γ^μ_{λν}) as gl(4) coefficients of A_λ = Γ_λ.
Mat linear_connection_coeffs(const lie::AlgebraBasis & algebra, const std::vector<Mat> & gamma);

/// Christoffel symbols of g from central differences of g on the periodic grid, per node.
std::vector<std::vector<Mat>> christoffel_oracle(const base::BaseGrid & grid, const std::vector<Mat> & metric);

struct GravityDecomposition
{
  conn::CartanSplit split;
  double max_h_part = 0.0;
  double max_theta = 0.0;
};

/// Cartan split with the inverse metric as Higgs field. ModelError if any node has signature ≠ (1,3).
GravityDecomposition gravity_demo(const base::Atlas & atlas, const base::HiggsField & inverse_metric,
                                  const conn::ConnectionField & A);

struct ConformalExample
{
  base::Atlas atlas;
  std::vector<Mat> metric;  ///< g_μν = e^{2φ} η
  base::HiggsField inverse_metric;
  conn::ConnectionField levi_civita;  ///< exact Christoffels of g
};

ConformalExample conformal_example(double dx, int n, double amplitude, std::mt19937_64 & rng);

}  // namespace gauge::scenarios

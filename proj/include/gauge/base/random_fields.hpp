#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gauge/base/fields.hpp"
#include "gauge/base/reduction.hpp"

namespace gauge::base {

/// Uniform double in [-1, 1) from the top 53 bits (same sequence on every standard library).
double uniform_pm1(std::mt19937_64 & rng);

/**
 * Smooth periodic scalar on the torus: Σ_k a_k cos(2π k·x/L) + b_k sin(2π k·x/L) over integer
 * wave vectors with |k_i| ≤ max_mode. The torus lengths come from the grid, so a given seed
 * describes the same function on every refinement of a fixed torus.
 */
class FourierField
{
public:
  FourierField(const BaseGrid & grid, double amplitude, std::mt19937_64 & rng, int max_mode = 1);

  double operator()(const Vec & x) const;
  Vec gradient(const Vec & x) const;

private:
  Vec length_;
  std::vector<Vec> k_;
  std::vector<double> a_;
  std::vector<double> b_;
};

/**
 * Amplitudes of the seeded test fields per model. The GL4 coset chart is small compared to
 * the sphere charts, so its fields are scaled down to keep C·Δx² discretization bounds with C = 10.
 */
struct FieldScales
{
  double gauge;
  double higgs;
  double connection;
  double matter;
};

FieldScales default_scales(const lie::GroupModel & model);

/// Per-node vectors of `dim` independent Fourier fields (entries outside `support` stay zero).
std::vector<Vec> random_vector_field(const BaseGrid & grid, int dim, double amplitude, std::mt19937_64 & rng,
                                     const std::vector<int> & support = {});

/// Per-node dim × n coefficient matrices.
std::vector<Mat> random_matrix_field(const BaseGrid & grid, int rows, double amplitude, std::mt19937_64 & rng);

/// g(x) = exp(Σ_{p ∈ indices} f_p(x) e_p); all basis indices when `indices` is empty.
std::vector<Mat> random_group_function(const BaseGrid & grid, const lie::GroupModel & model, double amplitude,
                                       std::mt19937_64 & rng, const std::vector<int> & indices = {});

/// h(x) = exp(X_𝔣(x)) · σ₀ with X_𝔣 a Fourier 𝔣-valued field.
std::vector<Vec> random_higgs(const BaseGrid & grid, const lie::GroupModel & model, double amplitude,
                              std::mt19937_64 & rng);

/**
 * Atlas built from one global trivialization and per-chart gauges g_α (global functions), so
 * that the chart frames are z_α = z·g_α and ϱ_αβ = g_α⁻¹ g_β. Global fields are carried into
 * the charts by the matching passive transforms.
 */
struct GeneratedAtlas
{
  Atlas atlas;
  std::vector<std::vector<Mat>> gauges;  ///< [chart][global node]

  const Mat & gauge(int chart, int node) const
  {
    return gauges[static_cast<std::size_t>(chart)][static_cast<std::size_t>(node)];
  }
};

GeneratedAtlas generate_atlas(const BaseGrid & grid, const lie::GroupModel & model, std::string tag,
                              std::vector<Chart> charts, double amplitude, std::mt19937_64 & rng);

/// h_α = g_α⁻¹ · h.
HiggsField restrict_higgs(const GeneratedAtlas & gen, const std::vector<Vec> & h);

/// f_α = g_α⁻¹ f g_α with central-difference jets.
EquivariantFunction restrict_equivariant(const GeneratedAtlas & gen, const std::vector<Mat> & f);

/// The chart gauges as a field from "<tag>/global" to the atlas tag, with central-difference jets.
GroupField chart_gauge_field(const GeneratedAtlas & gen);

/**
 * Matter field in the adapted atlas from a global matter field y given in the global adapted
 * frame z·z_c(h) (one coset chart c for the whole torus): y_α = ρ_V(k_α)⁻¹ y with
 * k_α = z_c(h)⁻¹ g_α z_{c_α}(h_α) ∈ H.
 */
MatterField restrict_matter(const GeneratedAtlas & gen, const AdaptedAtlas & adapted, const std::vector<Vec> & h,
                            const std::vector<Vec> & y);

}  // namespace gauge::base

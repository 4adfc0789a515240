#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gauge/lie/algebra.hpp"
#include "gauge/types.hpp"

namespace gauge::lie {

/// Membership tolerance used for G and H throughout.
inline constexpr double kMembershipTol = 1e-10;

/// A coset point must have chart margin above this to be inside a section chart.
inline constexpr double kChartMargin = 1e-6;

/// Matrix exponential (scaling and squaring with a Padé core).
Mat matrix_exp(const Mat & X);

/**
 * @brief A matrix group G, closed subgroup H, concrete model of G/H and matter fiber V.
 *
 * The coset model is an orbit of G inside a linear space of coordinates σ^m; G acts through
 * the linear map coset_rep(g), and the distinguished center point σ₀ has stabilizer H.
 *
 * Sign conventions (right Lie algebra): the generator of the G-action along e_p is the vector
 * field J_p(σ) = -d/dt exp(t e_p)·σ, and the matter generators are I_a = -ρ_V(e_a). With these,
 * covariant differentials read D = ∂ - A^p J_p, connections gauge-transform as
 * A' = Ad(g⁻¹)A + g⁻¹∂g and J, I satisfy the structure-constant relations as vector fields.
 *
 * Sections z_c(σ) of G → G/H are defined per coset chart c and satisfy z_c(σ)·σ₀ = σ and
 * z_c(σ₀) = 1 for the chart containing σ₀. Their derivatives are taken by complex step, so each
 * model implements its section for complex scalars with analytic (conjugation-free) formulas.
 */
class GroupModel
{
public:
  virtual ~GroupModel() = default;
  GroupModel(const GroupModel &)             = delete;
  GroupModel & operator=(const GroupModel &) = delete;

  const std::string & name() const { return name_; }
  const AlgebraBasis & algebra() const { return algebra_; }
  int matrix_size() const { return algebra_.matrix_size(); }
  int coset_dim() const { return static_cast<int>(center_.size()); }
  int fiber_dim() const { return static_cast<int>(fiber_metric_.rows()); }
  const Vec & center() const { return center_; }
  Mat identity() const { return Mat::Identity(matrix_size(), matrix_size()); }

  /// Distance of g from G (0 for members).
  virtual double membership_residual(const Mat & g) const = 0;
  /// Distance of g from H: G-membership, stabilizer of σ₀, and model-specific component checks.
  double h_membership_residual(const Mat & g) const;
  /// Distance of σ from the coset model (unit norm, signature, ...).
  virtual double coset_constraint_residual(const Vec & sigma) const = 0;

  /// Linear action of g on coset coordinates.
  Mat coset_rep(const Mat & g) const;
  MatC coset_rep(const MatC & g) const { return coset_rep_impl(g); }
  Vec act(const Mat & g, const Vec & sigma) const { return coset_rep(g) * sigma; }

  /// Matrix M_p with J_p(σ) = M_p σ.
  const Mat & higgs_generator(int p) const { return higgs_generators_.at(static_cast<std::size_t>(p)); }
  std::span<const Mat> higgs_generators() const { return higgs_generators_; }

  int num_coset_charts() const { return static_cast<int>(chart_names_.size()); }
  const std::string & coset_chart_name(int chart) const { return chart_names_.at(static_cast<std::size_t>(chart)); }
  /// Positive inside the chart's domain, larger further from its boundary.
  virtual double chart_margin(const Vec & sigma, int chart) const = 0;
  /// Chart with the largest margin; ChartDomainError if σ is in none.
  int preferred_chart(const Vec & sigma) const;
  Mat section(const Vec & sigma, int chart) const;
  /// Directional derivative of the section at σ along dsigma.
  Mat section_derivative(const Vec & sigma, int chart, const Vec & dsigma) const;

  /// Component of an ambient vector tangent to the coset space at sigma.
  virtual Vec tangent_projection(const Vec & /*sigma*/, const Vec & v) const { return v; }

  /// Representation of H on the matter fiber; linear in its matrix argument.
  virtual Mat fiber_rep(const Mat & rho) const = 0;
  /// I_a for the k-th entry of algebra().h_indices().
  const Mat & fiber_generator(int k) const { return fiber_generators_.at(static_cast<std::size_t>(k)); }
  std::span<const Mat> fiber_generators() const { return fiber_generators_; }
  /// H-invariant metric on the matter fiber.
  const Mat & fiber_metric() const { return fiber_metric_; }

  /// True if the whole coset model is covered by one chart diffeomorphic to a Euclidean space.
  virtual bool euclidean_fiber() const { return false; }
  virtual Vec to_euclidean(const Vec & sigma) const;
  virtual Vec from_euclidean(const Vec & u) const;

  /// Deterministic sample of H used by orbit comparisons.
  virtual std::vector<Mat> h_sample(int count) const = 0;

protected:
  GroupModel(std::string name, AlgebraBasis algebra, Vec center, std::vector<std::string> chart_names,
             Mat fiber_metric);

  /// Derives generator matrices; call at the end of the derived constructor.
  void finalize();

  virtual double extra_h_residual(const Mat &) const { return 0.0; }
  virtual MatC coset_rep_impl(const MatC & g) const           = 0;
  virtual MatC section_impl(const VecC & sigma, int chart) const = 0;

private:
  std::string name_;
  AlgebraBasis algebra_;
  Vec center_;
  std::vector<std::string> chart_names_;
  Mat fiber_metric_;
  std::vector<Mat> higgs_generators_;
  std::vector<Mat> fiber_generators_;
};

/// Registered models: "SO3_SO2", "SU2_U1", "GL4_SO13". Unknown names throw UsageError.
const GroupModel & group_model(std::string_view name);
std::vector<std::string> group_model_names();

}  // namespace gauge::lie

#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gauge/connection/connection.hpp"

namespace gauge::composite {

using base::Atlas;
using base::HiggsField;
using base::MatterField;
using conn::ConnectionField;

/// Coefficients of a Σ-connection at one point (x, σ): 𝒜^a_λ (h_dim × n) and 𝒜^a_m (h_dim × m).
struct SigmaCoeffs
{
  Mat base;
  Mat fiber;
};

/**
 * Principal connection on P → Σ in coordinates: a map (chart, local node, σ) ↦ coefficients.
 * `tag` names the atlas whose fiber frames the matter coordinates y^i refer to.
 */
struct SigmaConnection
{
  std::string tag;
  std::function<SigmaCoeffs(int chart, int local, const Vec & sigma)> eval;

  SigmaCoeffs operator()(int chart, int local, const Vec & sigma) const { return eval(chart, local, sigma); }
};

/// A point of J¹C ×_X J¹Y: connection value and jet, Higgs value and jet, matter value and jet.
struct JetSample
{
  int chart = 0;
  int local = 0;
  Mat a;                   ///< dim_g × n
  std::vector<Mat> a_jet;  ///< ∂_λ a, dim_g × n each; may be empty
  Vec sigma;
  Mat sigma_jet;  ///< m × n
  Vec y;
  Mat y_jet;  ///< V × n
};

/// 𝒜^a_m σ^m_λ + 𝒜^a_λ as a dim_g × n matrix with zero 𝔣 rows.
Mat contracted_coefficients(const lie::AlgebraBasis & algebra, const SigmaCoeffs & c, const Mat & sigma_jet);

/// D̃^i_λ = y^i_λ − (𝒜^a_m σ^m_λ + 𝒜^a_λ) I^i_a y, V × n.
Mat vertical_covariant_differential(const lie::GroupModel & model, const SigmaCoeffs & c, const JetSample & jet);

/// D_λ y = ∂_λ y − A^a_λ I_a y for an H-connection (dim_g × n, 𝔥 rows used), V × n.
Mat matter_differential(const lie::GroupModel & model, const Mat & A, const Vec & y, const Mat & y_jet);

/// A_h = [𝒜_m ∂_λh + 𝒜_λ](x, h(x)) with the coset-tangent central-difference jet of h. Tag of A_Σ.
ConnectionField pullback_connection(const Atlas & atlas, const SigmaConnection & A_sigma, const HiggsField & h);

/// max |D̃ on j¹(s_h, h) − D^{A_h} s_h| over core nodes.
double restriction_check(const Atlas & atlas, const SigmaConnection & A_sigma, const HiggsField & h,
                         const MatterField & s_h);

/**
 * 𝔥-part of the connection a seen in the frame adapted to the jet (σ, P): the right-hand side
 * a^a_λ − Θ^a_λ of the defining identity, h_dim × n.
 */
Mat universal_rhs(const lie::GroupModel & model, const Mat & a, const Vec & sigma, int coset_chart, const Mat & P);

struct UniversalSolution
{
  SigmaCoeffs coeffs;
  double quadratic_residue;  ///< largest even part of the probe responses
};

/// Affine extraction of (𝒜_m, 𝒜_λ) from probe jets {0, ±unit}; ModelError if the response is not affine.
UniversalSolution solve_universal(const lie::GroupModel & model, const Mat & a, const Vec & sigma, int coset_chart);

/// max |𝒜_m P_λ + 𝒜_λ − RHS(P)| over the 2m+1 probe jets of every direction λ and the extra probes.
double universal_identity_residual(const lie::GroupModel & model, const Mat & a, const Vec & sigma, int coset_chart,
                                   const SigmaCoeffs & coeffs, const std::vector<Mat> & extra_probes = {});

/// Σ-connection induced by a G-connection A (atlas frames); matter frames are the adapted atlas of h.
SigmaConnection universal_sigma_connection(const Atlas & atlas, const ConnectionField & A, const HiggsField & h);

/// Seeded Σ-connection, smooth in x and σ, for identity checks.
SigmaConnection random_sigma_connection(const Atlas & atlas, std::string tag, double amplitude, std::mt19937_64 & rng);

/// ½ Σ_λ D̃_λᵀ k D̃_λ with k the H-invariant fiber metric of the model.
double lagrangian_density(const lie::GroupModel & model, const Mat & vertical_differential);
double matter_lagrangian(const lie::GroupModel & model, const SigmaCoeffs & c, const JetSample & jet);

/// Jet sample of (A, h, y) at a core node; false if any input or stencil is missing.
bool sample_jet(const Atlas & atlas, const ConnectionField & A, const HiggsField & h, const MatterField & y, int chart,
                int local, JetSample & out);

/**
 * First jets after a vertical automorphism, obtained algebraically from the jets before.
 * ∂f enters through its 𝔤-projection X = ∂f f⁻¹. Requires the coset charts of σ and fσ.
 */
JetSample prolong_automorphism(const lie::GroupModel & model, const JetSample & jet, const Mat & f,
                               const std::vector<Mat> & df, int chart_from, int chart_to);

struct InvarianceReport
{
  double max_delta = 0.0;
  double max_density = 0.0;
  int nodes = 0;
};

/// Applies f to (A, h, y), rebuilds A_Σ from the transformed A and compares L_m node-wise.
InvarianceReport gauge_invariance_test(const Atlas & atlas, const ConnectionField & A, const HiggsField & h,
                                       const MatterField & y, const base::EquivariantFunction & f);

/// A section of Y → X in coordinates (σ^m, y^i) per node.
using CompositeSection = base::ChartField<Vec>;

CompositeSection compose_section(const HiggsField & h, const MatterField & y);
HiggsField project_section(const CompositeSection & s, const std::string & atlas_tag, int coset_dim);
MatterField restrict_section(const CompositeSection & s, int coset_dim);

struct RoundtripRecord
{
  bool identical = false;
  int nodes = 0;
};

/// (h, y) → s → (π∘s, s_h), compared bit for bit.
RoundtripRecord composite_section_roundtrip(const HiggsField & h, const MatterField & y);

}  // namespace gauge::composite

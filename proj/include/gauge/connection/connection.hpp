#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gauge/base/random_fields.hpp"
#include "gauge/base/reduction.hpp"

namespace gauge::conn {

using base::ChartField;

/// A^p_λ per node as a dim_g × n matrix.
using ConnectionField = ChartField<Mat>;
using ThetaField      = ChartField<Mat>;

/// Pointwise A' = Ad(g⁻¹)A + g⁻¹∂g.
Mat gauge_transform(const lie::AlgebraBasis & algebra, const Mat & A, const Mat & g, const std::vector<Mat> & dg);

/// Applies a gauge change chart-wise; the field must be in g.from_tag and comes out in g.to_tag.
ConnectionField transform_connection(const lie::AlgebraBasis & algebra, const ConnectionField & A,
                                     const base::GroupField & g);

/// Global connection (in the generated atlas' global frame) carried into the charts.
ConnectionField restrict_connection(const base::GeneratedAtlas & gen, const std::vector<Mat> & A);

/**
 * Σ_p A^p_λ G_p per direction. With dim_g generators (e.g. the J_p) all components are used;
 * with one generator per 𝔥 index (the I_a) only the 𝔥-components are. DimensionError otherwise.
 */
std::vector<Mat> contract(const lie::AlgebraBasis & algebra, const Mat & A, std::span<const Mat> generators);

ChartField<std::vector<Mat>> associated_connection_coeffs(const lie::AlgebraBasis & algebra, const ConnectionField & A,
                                                          std::span<const Mat> generators);

/// D_λ h = ∂_λ h − A^p_λ J_p(h), m × n per core node.
ChartField<Mat> covariant_differential_higgs(const base::Atlas & atlas, const ConnectionField & A,
                                             const base::HiggsField & h);

struct Reducibility
{
  bool reducible;
  double max_norm;  ///< largest node-wise Frobenius norm of D h
};

Reducibility is_reducible(const base::Atlas & atlas, const ConnectionField & A, const base::HiggsField & h, double tol);

/**
 * Reads an 𝔥-valued connection of the adapted atlas as a G-connection and moves it with
 * `to_target` (adapted → target atlas). PreconditionError if any 𝔣-component is nonzero.
 */
ConnectionField extend_H_connection(const lie::AlgebraBasis & algebra, const ConnectionField & A_h,
                                    const base::GroupField & to_target);

/// Splits coefficients into 𝔥- and 𝔣-parts; the parts sum to the input exactly.
std::pair<ConnectionField, ThetaField> split_connection(const lie::AlgebraBasis & algebra, const ConnectionField & A);

struct CartanSplit
{
  base::AdaptedAtlas adapted;
  ConnectionField adapted_connection;  ///< A in the adapted atlas
  ConnectionField h_part;              ///< Ā_h, adapted atlas
  ThetaField theta;                    ///< Θ, adapted atlas
  ThetaField theta_original;           ///< Θ carried back to the original frames, Ad(g)Θ
};

/// Cartan split A = Ā_h + Θ in Ψ^h; UnsupportedModelError for non-reductive splits.
CartanSplit cartan_split(const base::Atlas & atlas, const ConnectionField & A, const base::HiggsField & h,
                         base::GaugeJets jets = base::GaugeJets::chain_rule);

/**
 * max over nodes of |Θ^p_λ J_p(h) + D_λ h| in the original atlas. In the right-algebra
 * convention Θ^p J_p(h) equals −D h. With chain-rule gauge jets both sides are built from the
 * same discrete jet and agree to rounding; with differenced gauges the residual is O(Δx²).
 */
double verify_theta_identity(const base::Atlas & atlas, const ConnectionField & A, const base::HiggsField & h,
                             base::GaugeJets jets = base::GaugeJets::chain_rule);

/// Node-wise Θ^p_λ J_p(h) + D_λ h (m × n), whose max is verify_theta_identity.
ChartField<Mat> theta_identity_defect(const base::Atlas & atlas, const ConnectionField & A, const base::HiggsField & h,
                                      base::GaugeJets jets = base::GaugeJets::chain_rule);

/// F_λμ = ∂_λA_μ − ∂_μA_λ + [A_λ, A_μ], stored as dim_g × n² with column λ·n + μ.
ChartField<Mat> curvature(const base::Atlas & atlas, const ConnectionField & A);

/// max |A_b − Ad(ϱ_ab⁻¹)A_a − ϱ_ab⁻¹∂ϱ_ab| over overlap nodes where ∂ϱ_ab has a stencil.
double connection_transition_residual(const base::Atlas & atlas, const ConnectionField & A);

struct Configuration
{
  base::FieldSet fields;
  std::optional<ConnectionField> connection;
};

/// Vertical automorphism on Higgs, matter and connection: A ↦ Ad(f)A − ∂f f⁻¹.
Configuration vertical_automorphism(const base::Atlas & atlas, const base::EquivariantFunction & f,
                                    const Configuration & config);

}  // namespace gauge::conn

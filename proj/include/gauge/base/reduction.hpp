#pragma once

#include <optional>
#include <vector>

#include "gauge/base/fields.hpp"

namespace gauge::base {

/**
 * Reduced atlas Ψ^h for a Higgs field h: chart frames z_α g_α with g_α = z_c(h_α), where c is
 * one coset chart per atlas chart. Its transitions g_α⁻¹ ϱ_αβ g_β are H-valued and h reads σ₀
 * in every chart.
 */
struct AdaptedAtlas
{
  Atlas atlas;
  GroupField gauge;               ///< g_α, from the original atlas tag to the adapted tag
  std::vector<int> coset_charts;  ///< coset chart used on each atlas chart
};

/**
 * How the adapted gauge g_α = z_c(h_α) is differentiated. chain_rule evaluates the section
 * derivative at the discrete jet, ∂g = Dz_c(h)[∂h] with ∂h by central differences, so that
 * everything built from g is a function of the jet (h, ∂h) at the node. central differences
 * the values of g between neighbouring nodes.
 */
enum class GaugeJets
{
  chain_rule,
  central
};

/// Best coset chart per atlas chart (max over c of the min margin); ChartDomainError if none fits.
std::vector<int> assign_coset_charts(const Atlas & atlas, const HiggsField & h);

/// Coset-tangent part of the central-difference gradient of h (m × n); empty off the core.
std::optional<Mat> higgs_jet(const Atlas & atlas, const HiggsField & h, int chart, int local);

AdaptedAtlas adapt_atlas(const Atlas & atlas, const HiggsField & h, GaugeJets jets = GaugeJets::chain_rule);

/// max ‖h_α − ϱ_αβ·h_β‖ over overlaps.
double higgs_compatibility_residual(const Atlas & atlas, const HiggsField & h);

/// max ‖h − σ₀‖ over valid entries.
double higgs_center_residual(const lie::GroupModel & model, const HiggsField & h);

/// Passive change of frame: h' = g⁻¹·h, tagged with g.to_tag.
HiggsField gauge_higgs(const lie::GroupModel & model, const HiggsField & h, const GroupField & g);

/**
 * Global section from partial local pieces (valid entries of `pieces`), blended in the model's
 * Euclidean coordinates with normalized bump weights. Requires a Euclidean coset model
 * (UnsupportedModelError otherwise); StructureError when some node has no piece.
 */
HiggsField construct_global_higgs(const Atlas & atlas, const HiggsField & pieces);

/// Bump weight of a chart at a node: product over cut axes of sin²(π (offset+1)/(length+1)).
double chart_bump(const Atlas & atlas, int chart, int node);

/// Higgs and matter fields of one configuration; matter lives in the atlas adapted to `higgs`.
struct FieldSet
{
  HiggsField higgs;
  std::optional<MatterField> matter;
};

/**
 * Active vertical automorphism p ↦ p·f(p): h ↦ f·h and, through the induced action with the
 * adapted coset charts of h and of f·h, y ↦ ρ_V(z(f·h)⁻¹ f z(h)) y. Matter components change
 * atlas with the Higgs field; the result's matter tag is that of adapt_atlas(atlas, f·h).
 */
FieldSet vertical_automorphism(const Atlas & atlas, const EquivariantFunction & f, const FieldSet & fields);

/// max ‖f_α − ϱ_αβ f_β ϱ_αβ⁻¹‖ over overlaps.
double equivariant_compatibility_residual(const Atlas & atlas, const EquivariantFunction & f);

/// max ‖y_α − ρ_V(ϱ_αβ) y_β‖ over overlaps of an (H-valued) atlas.
double matter_compatibility_residual(const Atlas & atlas, const MatterField & y);

/**
 * Extends a function given in the adapted atlas to the original atlas by conjugation:
 * f_α = g_α f^h_α g_α⁻¹, jets by the product rule.
 */
EquivariantFunction extend_subbundle_iso(const EquivariantFunction & f_adapted, const GroupField & adapted_gauge);

/// Inverse of extend_subbundle_iso: f^h_α = g_α⁻¹ f_α g_α.
EquivariantFunction restrict_to_adapted(const EquivariantFunction & f, const GroupField & adapted_gauge);

/**
 * Orbit-difference witness: max over probes g and ρ from a coarse H-sample of
 * min over ρ' from a dense H-sample of ‖f ρ f⁻¹ g − ρ' g‖.
 */
double orbit_difference_witness(const lie::GroupModel & model, const Mat & f, const std::vector<Mat> & probes,
                                int coarse = 16, int dense = 4000);

}  // namespace gauge::base

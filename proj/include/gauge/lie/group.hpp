#pragma once

#include "gauge/lie/group_model.hpp"

namespace gauge::lie {

struct GroupElement
{
  const GroupModel * model = nullptr;
  Mat matrix;
};

/// Coordinates σ^m of a point of the coset model.
struct CosetPoint
{
  Vec coords;
};

/// Validates membership (≤ kMembershipTol); MembershipError otherwise.
GroupElement make_element(const GroupModel & model, Mat matrix);

/// exp(t X) with X = x^p e_p.
GroupElement exp_map(const GroupModel & model, const Vec & x, double t = 1.0);

/// π_GH(g) = g·σ₀.
CosetPoint coset_project(const GroupElement & g);

/// z_chart(σ); ChartDomainError outside the chart.
GroupElement coset_section(const GroupModel & model, const CosetPoint & sigma, int chart);

struct InducedAction
{
  CosetPoint point;
  Vec fiber;
  Mat compensator;  ///< ρ' = z_b(σ')⁻¹ g z_a(σ) ∈ H
  int chart_from;
  int chart_to;
};

/**
 * Action of g on W = (G × V)/H in the charts (a, b):
 * σ' = π(g z_a(σ)), v' = ρ_V(ρ') v with ρ' = z_b(σ')⁻¹ g z_a(σ).
 * Throws ModelError if ρ' misses H by more than kMembershipTol.
 */
InducedAction induced_action(const GroupElement & g, const CosetPoint & sigma, const Vec & v, int chart_from,
                             int chart_to);

/// Same, with both charts chosen by GroupModel::preferred_chart.
InducedAction induced_action(const GroupElement & g, const CosetPoint & sigma, const Vec & v);

}  // namespace gauge::lie

#include "gauge/lie/group.hpp"

#include <string>

#include <Eigen/LU>

#include "gauge/errors.hpp"

namespace gauge::lie {

GroupElement make_element(const GroupModel & model, Mat matrix)
{
  const double r = model.membership_residual(matrix);
  if (!(r <= kMembershipTol)) {
    throw MembershipError(model.name() + ": matrix is not a group element (residual " + std::to_string(r) + ")");
  }
  return {&model, std::move(matrix)};
}

GroupElement exp_map(const GroupModel & model, const Vec & x, double t)
{
  return make_element(model, matrix_exp(t * model.algebra().to_matrix(x)));
}

CosetPoint coset_project(const GroupElement & g)
{
  const GroupModel & model = *g.model;
  if (!(model.membership_residual(g.matrix) <= kMembershipTol)) {
    throw MembershipError(model.name() + ": cannot project a non-member");
  }
  return {model.act(g.matrix, model.center())};
}

GroupElement coset_section(const GroupModel & model, const CosetPoint & sigma, int chart)
{
  return {&model, model.section(sigma.coords, chart)};
}

InducedAction induced_action(const GroupElement & g, const CosetPoint & sigma, const Vec & v, int chart_from,
                             int chart_to)
{
  const GroupModel & model = *g.model;
  if (v.size() != model.fiber_dim()) { throw DimensionError("fiber vector has wrong dimension"); }
  const Mat za      = model.section(sigma.coords, chart_from);
  const Mat gza     = g.matrix * za;
  const Vec image   = model.act(gza, model.center());
  const Mat zb      = model.section(image, chart_to);
  const Mat rho     = zb.inverse() * gza;
  const double hres = model.h_membership_residual(rho);
  if (!(hres <= kMembershipTol)) {
    throw ModelError(model.name() + ": compensator leaves H (residual " + std::to_string(hres) + ")");
  }
  return {{image}, model.fiber_rep(rho) * v, rho, chart_from, chart_to};
}

InducedAction induced_action(const GroupElement & g, const CosetPoint & sigma, const Vec & v)
{
  const GroupModel & model = *g.model;
  const int a              = model.preferred_chart(sigma.coords);
  const Vec image          = model.act(g.matrix, sigma.coords);
  return induced_action(g, sigma, v, a, model.preferred_chart(image));
}

}  // namespace gauge::lie

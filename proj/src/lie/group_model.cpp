#include "gauge/lie/group_model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "gauge/errors.hpp"

namespace gauge::lie {

namespace {

// Complex-step increment; derivatives come out exact to rounding for analytic maps.
constexpr double kStep = 1e-30;

}  // namespace

Mat matrix_exp(const Mat & X) { return X.exp(); }

GroupModel::GroupModel(std::string name, AlgebraBasis algebra, Vec center, std::vector<std::string> chart_names,
                       Mat fiber_metric)
    : name_(std::move(name)), algebra_(std::move(algebra)), center_(std::move(center)),
      chart_names_(std::move(chart_names)), fiber_metric_(std::move(fiber_metric))
{}

void GroupModel::finalize()
{
  const int n = matrix_size();
  higgs_generators_.clear();
  for (int p = 0; p < algebra_.dim(); ++p) {
    MatC g = MatC::Identity(n, n);
    g += std::complex<double>(0.0, kStep) * algebra_.element(p).cast<std::complex<double>>();
    higgs_generators_.push_back(-coset_rep_impl(g).imag() / kStep);
  }
  fiber_generators_.clear();
  for (int a : algebra_.h_indices()) { fiber_generators_.push_back(-fiber_rep(algebra_.element(a))); }
}

double GroupModel::h_membership_residual(const Mat & g) const
{
  double r = membership_residual(g);
  r        = std::max(r, max_abs(act(g, center_) - center_));
  return std::max(r, extra_h_residual(g));
}

Mat GroupModel::coset_rep(const Mat & g) const
{
  return coset_rep_impl(g.cast<std::complex<double>>()).real();
}

int GroupModel::preferred_chart(const Vec & sigma) const
{
  int best      = -1;
  double margin = kChartMargin;
  for (int c = 0; c < num_coset_charts(); ++c) {
    const double m = chart_margin(sigma, c);
    if (m > margin) {
      margin = m;
      best   = c;
    }
  }
  if (best < 0) { throw ChartDomainError(name_ + ": coset point lies in no section chart"); }
  return best;
}

Mat GroupModel::section(const Vec & sigma, int chart) const
{
  if (sigma.size() != coset_dim()) { throw DimensionError("coset point has wrong dimension"); }
  if (chart < 0 || chart >= num_coset_charts()) { throw ChartDomainError("unknown coset chart"); }
  if (!(chart_margin(sigma, chart) > kChartMargin)) {
    throw ChartDomainError(name_ + ": coset point outside chart '" + coset_chart_name(chart) + "'");
  }
  return section_impl(sigma.cast<std::complex<double>>(), chart).real();
}

Mat GroupModel::section_derivative(const Vec & sigma, int chart, const Vec & dsigma) const
{
  if (dsigma.size() != coset_dim()) { throw DimensionError("coset tangent has wrong dimension"); }
  if (!(chart_margin(sigma, chart) > kChartMargin)) {
    throw ChartDomainError(name_ + ": coset point outside chart '" + coset_chart_name(chart) + "'");
  }
  VecC s = sigma.cast<std::complex<double>>();
  s += std::complex<double>(0.0, kStep) * dsigma.cast<std::complex<double>>();
  return section_impl(s, chart).imag() / kStep;
}

Vec GroupModel::to_euclidean(const Vec &) const
{
  throw UnsupportedModelError(name_ + ": coset space is not Euclidean");
}

Vec GroupModel::from_euclidean(const Vec &) const
{
  throw UnsupportedModelError(name_ + ": coset space is not Euclidean");
}

}  // namespace gauge::lie

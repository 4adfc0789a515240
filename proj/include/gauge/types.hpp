#pragma once

#include <complex>

#include <Eigen/Core>

namespace gauge {

using Mat  = Eigen::MatrixXd;
using Vec  = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

/// Largest absolute entry, 0 for empty matrices.
template<typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> & m)
{
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace gauge

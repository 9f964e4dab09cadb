#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "dfmpc/errors.hpp"

namespace dfmpc {

/// Collapse a vector of constraint values c_i <= 0 into one scalar by taking
/// the maximum. Feasibility of the aggregate is equivalent to feasibility of
/// every component.
inline double aggregate_max(const Eigen::VectorXd& c) {
  if (c.size() == 0) throw DimensionError("aggregate_max: empty constraint vector");
  return c.maxCoeff();
}

/// Smooth aggregate: sum of violations raised to the power q (q >= 1).
/// Zero exactly when every component is feasible.
inline double aggregate_penalty(const Eigen::VectorXd& c, double q) {
  if (c.size() == 0) throw DimensionError("aggregate_penalty: empty constraint vector");
  if (!(q >= 1.0)) throw DimensionError("aggregate_penalty: exponent must be >= 1");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    acc += std::pow(std::max(0.0, c[i]), q);
  }
  return acc;
}

/// Fold a soft constraint into the cost as a quadratic penalty on violation.
inline double soften(double J, double g_soft, double penalty) {
  double viol = std::max(g_soft, 0.0);
  return J + penalty * viol * viol;
}

}  // namespace dfmpc

#pragma once

#include <Eigen/Core>

#include "dfmpc/params.hpp"

namespace dfmpc {

/// Advance the state by one sampling period with the explicit Runge-Kutta
/// scheme selected by ode.rk_order (1 = Euler, 2 = midpoint, 4 = classical).
/// The control is held constant over the step. Exactly rk_order evaluations
/// of rhs are performed. Throws NonFiniteStateError if the new state is not
/// finite, DimensionError for an unsupported rk_order.
Eigen::VectorXd one_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const OdeParams& ode, const OdeRhs& rhs);

/// Integrate a whole control profile (Np x nu) from initial state x0.
/// Returns a trajectory with Np+1 state rows; row 1 is x0 and row k+1 is
/// one_step applied to row k under control row k.
Trajectory rollout(const Eigen::VectorXd& x0, const Eigen::MatrixXd& u_profile,
                   const OdeParams& ode, const OdeRhs& rhs);

}  // namespace dfmpc

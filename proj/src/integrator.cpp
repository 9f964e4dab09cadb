#include "dfmpc/integrator.hpp"

#include <string>

#include "dfmpc/errors.hpp"

namespace dfmpc {

Eigen::VectorXd one_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const OdeParams& ode, const OdeRhs& rhs) {
  const double tau = ode.tau;
  Eigen::VectorXd xn;
  switch (ode.rk_order) {
    case 1: {
      xn = x + tau * rhs(x, u, ode);
      break;
    }
    case 2: {
      Eigen::VectorXd k1 = rhs(x, u, ode);
      Eigen::VectorXd k2 = rhs(x + (tau / 2.0) * k1, u, ode);
      xn = x + tau * k2;
      break;
    }
    case 4: {
      Eigen::VectorXd k1 = rhs(x, u, ode);
      Eigen::VectorXd k2 = rhs(x + (tau / 2.0) * k1, u, ode);
      Eigen::VectorXd k3 = rhs(x + (tau / 2.0) * k2, u, ode);
      Eigen::VectorXd k4 = rhs(x + tau * k3, u, ode);
      xn = x + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      break;
    }
    default:
      throw DimensionError("one_step: rk_order must be 1, 2 or 4, observed " +
                           std::to_string(ode.rk_order));
  }
  if (!xn.allFinite()) {
    throw NonFiniteStateError("one_step produced a non-finite state");
  }
  return xn;
}

Trajectory rollout(const Eigen::VectorXd& x0, const Eigen::MatrixXd& u_profile,
                   const OdeParams& ode, const OdeRhs& rhs) {
  const Eigen::Index Np = u_profile.rows();
  const Eigen::Index nx = x0.size();
  Trajectory traj;
  traj.xx.resize(Np + 1, nx);
  traj.uu = u_profile;
  traj.xx.row(0) = x0.transpose();
  Eigen::VectorXd x = x0;
  Eigen::VectorXd u(u_profile.cols());
  for (Eigen::Index k = 0; k < Np; ++k) {
    u = u_profile.row(k).transpose();
    x = one_step(x, u, ode, rhs);
    traj.xx.row(k + 1) = x.transpose();
  }
  return traj;
}

}  // namespace dfmpc

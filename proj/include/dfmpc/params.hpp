#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "dfmpc/value.hpp"

namespace dfmpc {

/// Parameters of the controlled dynamics and of its fixed-step integration.
/// Mandatory fields keep sentinel defaults (NaN / 0 / empty) until assigned;
/// validation reports them as missing.
struct OdeParams {
  double tau = std::numeric_limits<double>::quiet_NaN();  ///< sampling period [s]
  Eigen::VectorXd x0;                                     ///< initial state
  Eigen::VectorXd u0;                                     ///< previously applied control
  int rk_order = 0;                                       ///< 1, 2 or 4
  /// Model uncertainty vector. Empty means the model has no uncertainty
  /// parameters; the engine always zeroes its own copy.
  Eigen::VectorXd w;
  /// Free-form model constants (overridable without recompiling).
  ParamMap extra;

  Eigen::Index nx() const { return x0.size(); }
};

/// Parameters of the control parametrization p -> profile.
struct ProfileParams {
  int nu = 0;  ///< number of control inputs
  int Np = 0;  ///< prediction horizon length in sampling periods
  int np = 0;  ///< dimension of the decision vector
  Eigen::VectorXd p;     ///< current / initial decision vector
  Eigen::VectorXd pmin;  ///< lower bounds (hard)
  Eigen::VectorXd pmax;  ///< upper bounds (hard)
  /// Parametrization-specific data (interpolation matrix, free instants,
  /// cyclic phase index, ...).
  ParamMap extra;
};

/// Cost/constraint parameters. Everything lives in the open map.
struct OcpParams {
  ParamMap extra;
};

/// State/control history over one prediction horizon.
/// xx has Np+1 rows (row 1 is the initial state), uu has Np rows.
struct Trajectory {
  Eigen::MatrixXd xx;
  Eigen::MatrixXd uu;
};

/// Dynamics callback: time derivative of the state at (x, u).
using OdeRhs = std::function<Eigen::VectorXd(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u, const OdeParams& ode)>;

/// Parametrization callback: decision vector -> Np x nu control profile.
using ControlProfileFn = std::function<Eigen::MatrixXd(
    const Eigen::VectorXd& p, const OdeParams& ode, const ProfileParams& uparam)>;

/// Cost/constraint callback: predicted trajectory -> (J, g). The scalar g
/// aggregates all inequality constraints; g <= 0 means feasible.
using OcpFn = std::function<std::pair<double, double>(
    const Trajectory& traj, const OdeParams& ode, const ProfileParams& uparam,
    const OcpParams& ocp)>;

/// A complete problem: the three callbacks plus the three parameter records.
/// Callbacks must be pure (no observable state, same inputs -> same outputs);
/// records are treated as immutable once validated.
struct ProblemDefinition {
  std::string name;
  OdeRhs ode_rhs;
  ControlProfileFn control_profile;
  OcpFn ocp;
  OdeParams ode;
  ProfileParams uparam;
  OcpParams ocp_params;
};

}  // namespace dfmpc

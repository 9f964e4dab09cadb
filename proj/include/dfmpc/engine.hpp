#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "dfmpc/params.hpp"
#include "dfmpc/solver.hpp"

namespace dfmpc {

/// Outcome of one control update.
struct MpcResult {
  Eigen::VectorXd u;      ///< control to apply now (first profile row)
  Eigen::VectorXd u_sol;  ///< optimized profile stacked instant by instant
  double t_exec = 0.0;    ///< wall-clock seconds spent inside the solver
  SolverState state;      ///< solver details (evaluations, history, radii)
};

/// Receding-horizon controller around one problem definition.
///
/// Construction validates the definition, copies the three parameter records,
/// zeroes the uncertainty vector of its own dynamics copy (predictions are
/// always nominal, whatever the simulated plant uses), and measures the mean
/// cost of one candidate evaluation (teval).
///
/// Each step solves the parametrized problem from the measured state under
/// the per-step evaluation budget, applies the first profile row, and warm
/// starts the next step from the returned optimum.
class Engine {
 public:
  Engine(const ProblemDefinition& def, int nev, TrustRegionConfig trust_cfg = {});

  /// One control update from measured state x. subset optionally restricts
  /// optimization to the listed decision components (numbered from 1); the
  /// rest stay at their warm-start values. An optional trace records every
  /// solver evaluation.
  MpcResult step(const Eigen::VectorXd& x, const std::vector<int>& subset = {},
                 std::vector<TraceEntry>* trace = nullptr);

  /// (J, g) of candidate p starting from state x, under the nominal model.
  /// Integration blow-ups surface as non-finite values, never as errors.
  std::pair<double, double> evaluate(const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& x) const;

  /// Mutate one record field through a "record.field" path (e.g. "ocp.rd",
  /// "ode.rk_order", "uparam.index"). The decision-space dimensions
  /// (uparam.Np, uparam.np, uparam.nu) cannot be changed on a live engine;
  /// lengths of vector fields must stay consistent.
  void set(const std::string& path, const Value& v);

  /// Read one record field through a "record.field" path.
  Value get(const std::string& path) const;

  const OdeParams& ode() const { return ode_; }
  const ProfileParams& uparam() const { return uparam_; }
  const OcpParams& ocp() const { return ocp_; }
  const Eigen::VectorXd& warm_p() const { return warm_p_; }
  /// Measured mean seconds per candidate evaluation.
  double teval() const { return teval_; }

  int nev() const { return nev_; }
  void set_nev(int nev);

  TrustRegionConfig trust;  ///< per-step solver controls

 private:
  std::pair<double, double> evaluate_with(const OdeParams& ode,
                                          const Eigen::VectorXd& p) const;
  std::pair<double, double> evaluate_installed(const Eigen::VectorXd& p) const;

  OdeRhs rhs_;
  ControlProfileFn profile_;
  OcpFn ocp_fn_;
  OdeParams ode_;  // nominal copy: w is zero here
  ProfileParams uparam_;
  OcpParams ocp_;
  Eigen::VectorXd warm_p_;
  double teval_ = 0.0;
  int nev_ = 0;
};

}  // namespace dfmpc

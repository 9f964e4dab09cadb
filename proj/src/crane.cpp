#include <cmath>

#include "dfmpc/constraints.hpp"
#include "dfmpc/parametrization.hpp"
#include "dfmpc/scenario.hpp"

namespace dfmpc {

namespace {

// Missing uncertainty components read as nominal (zero).
double wval(const Eigen::VectorXd& w, Eigen::Index i) {
  return i < w.size() ? w[i] : 0.0;
}

// State: [r, rdot, theta, thetadot]; control: trolley force.
Eigen::VectorXd crane_rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          const OdeParams& ode) {
  const double m = 200.0 * (1.0 + wval(ode.w, 0));          // load mass
  const double M = 1500.0;                                  // trolley mass
  const double frot_theta = 1e5 * (1.0 + wval(ode.w, 1));   // rotational friction
  const double frot_r = 10.0 * (1.0 + wval(ode.w, 2));      // translational friction
  const double L = 100.0;                                   // cable length
  const double grav = ode.extra.scalar_or("gravity", 0.81);

  const double v = x[1];
  const double th = x[2];
  const double thp = x[3];
  const double c = std::cos(th);
  const double s = std::sin(th);
  const double F = u[0];

  Eigen::VectorXd xdot(4);
  xdot[0] = v;
  xdot[1] = (F + m * grav * c * s + m * L * s * thp * thp - frot_r * v) /
            (M + m * (1.0 - c * c));
  xdot[2] = thp;
  xdot[3] = (-F * c - m * L * thp * thp * c * s - (M - m) * grav * s -
             frot_theta * thp) /
            ((M + m * s * s) * L);
  return xdot;
}

// Quadratic tracking cost with a move penalty; hard bounds on the swing
// angle and rate over every instant of the prediction (initial row included).
std::pair<double, double> crane_ocp(const Trajectory& traj, const OdeParams& ode,
                                    const ProfileParams& uparam,
                                    const OcpParams& ocp) {
  const ParamMap& e = ocp.extra;
  const Eigen::MatrixXd& Q = e.matrix("Q");
  const double R = e.scalar("R");
  const double Mdu = e.scalar("M");
  const double rd = e.scalar("rd");
  const double theta_max = e.scalar("theta_max");
  const double thetap_max = e.scalar("thetap_max");

  const int Np = uparam.Np;
  Eigen::Vector4d xd(rd, 0.0, 0.0, 0.0);
  double J = 0.0;
  double u_prev = ode.u0[0];
  for (int i = 0; i < Np; ++i) {
    const double ui = traj.uu(i, 0);
    const double du = ui - u_prev;
    Eigen::Vector4d err = traj.xx.row(i + 1).transpose() - xd;
    J += err.dot(Q * err) + R * ui * ui + Mdu * du * du;
    u_prev = ui;
  }

  Eigen::Vector4d h;
  h[0] = (traj.xx.col(2).array() - theta_max).maxCoeff();
  h[1] = (-traj.xx.col(2).array() - theta_max).maxCoeff();
  h[2] = (traj.xx.col(3).array() - thetap_max).maxCoeff();
  h[3] = (-traj.xx.col(3).array() - thetap_max).maxCoeff();
  return {J, aggregate_max(h)};
}

}  // namespace

Scenario make_crane() {
  Scenario sc;
  sc.name = "crane";

  ProblemDefinition& def = sc.def;
  def.name = "crane";
  def.ode_rhs = crane_rhs;
  def.control_profile = profile_from_R;
  def.ocp = crane_ocp;

  def.ode.tau = 0.5;
  def.ode.rk_order = 4;
  def.ode.x0 = Eigen::VectorXd::Zero(4);
  def.ode.u0 = Eigen::VectorXd::Zero(1);
  // Plant: doubled load mass, frictions reduced by 20%.
  def.ode.w = (Eigen::VectorXd(3) << 1.0, -0.2, -0.2).finished();

  const int Np = 20;
  const std::vector<int> ifree = {1, 2, 3, 10};
  Eigen::MatrixXd R = compute_R(ifree, Np, 1);
  def.uparam.nu = 1;
  def.uparam.Np = Np;
  def.uparam.np = static_cast<int>(R.cols());
  def.uparam.p = Eigen::VectorXd::Zero(def.uparam.np);
  def.uparam.pmin = Eigen::VectorXd::Constant(def.uparam.np, -30.0);
  def.uparam.pmax = Eigen::VectorXd::Constant(def.uparam.np, 30.0);
  def.uparam.extra.set("R", std::move(R));
  def.uparam.extra.set("Ifree",
                       (Eigen::VectorXd(4) << 1.0, 2.0, 3.0, 10.0).finished());

  Eigen::MatrixXd Q = Eigen::Vector4d(1e8, 1e4, 1.0, 1.0).asDiagonal();
  def.ocp_params.extra.set("Q", std::move(Q));
  def.ocp_params.extra.set("R", 1e2);
  def.ocp_params.extra.set("M", 1e4);
  def.ocp_params.extra.set("rd", 1.0);
  def.ocp_params.extra.set("theta_max", 0.0035);
  def.ocp_params.extra.set("thetap_max", 2.0 * M_PI / 30.0);

  sc.nev = 500;
  sc.tsim = 400.0;
  sc.engine_rk_order = 2;  // cheaper predictions; the plant integrates at order 4
  sc.trust = update_trust_region_parameters(TrustRegionConfig{}, 2.0, 0.5);
  sc.scheduler = [](const SchedulerContext& c, Engine& eng) {
    const double T = c.t_end;
    const double rd = (c.t <= T / 3.0) ? 1.0 : (c.t <= 2.0 * T / 3.0 ? -3.0 : 3.0);
    eng.set("ocp.rd", Value(rd));
  };
  sc.log_fields = {"ocp.rd"};
  return sc;
}

}  // namespace dfmpc

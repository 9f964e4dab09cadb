#include <cmath>
#include <cstdint>

#include "dfmpc/parametrization.hpp"
#include "dfmpc/scenario.hpp"

namespace dfmpc {

namespace {

// Model constants, cached per thread keyed on the record's version stamp:
// the dynamics run millions of times per closed-loop step and must not pay
// a map lookup per call, yet overrides must take effect immediately.
struct TumorConstants {
  double a, b, c1, g, r, h, k1, k2, k3, p, s1, s2, delta, gam;
};

const TumorConstants& tumor_constants(const OdeParams& ode) {
  thread_local std::uint64_t cached_version = 0;
  thread_local bool primed = false;
  thread_local TumorConstants tc;
  if (!primed || ode.extra.version() != cached_version) {
    const ParamMap& e = ode.extra;
    tc = {e.scalar("a"),  e.scalar("b"),  e.scalar("c1"), e.scalar("g"),
          e.scalar("r"),  e.scalar("h"),  e.scalar("k1"), e.scalar("k2"),
          e.scalar("k3"), e.scalar("p"),  e.scalar("s1"), e.scalar("s2"),
          e.scalar("delta"), e.scalar("gam")};
    cached_version = ode.extra.version();
    primed = true;
  }
  return tc;
}

// State: [effector cells, circulating lymphocytes, chemo concentration,
// tumor cells]; control: [immunotherapy rate, chemotherapy rate].
Eigen::VectorXd tumor_rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          const OdeParams& ode) {
  const TumorConstants& c = tumor_constants(ode);
  const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
  Eigen::VectorXd xdot(4);
  xdot[0] = c.g * x4 * x1 / (c.h + x4) - c.r * x1 - c.p * x1 * x4 -
            c.k1 * x1 * x3 + c.s1 * u[0];
  xdot[1] = -c.delta * x2 - c.k2 * x3 * x2 + c.s2;
  xdot[2] = -c.gam * x3 + u[1];
  xdot[3] = c.a * x4 * (1.0 - c.b * x4) - c.c1 * x1 * x4 - c.k3 * x3 * x4;
  return xdot;
}

// Terminal tumor population while it remains detectable; once it is wiped
// out the objective switches to the total administered dose. Constraint:
// lymphocytes must stay above rho at every instant.
std::pair<double, double> tumor_ocp(const Trajectory& traj, const OdeParams& /*ode*/,
                                    const ProfileParams& /*uparam*/,
                                    const OcpParams& ocp) {
  const double rho = ocp.extra.scalar("rho");
  const double threshold = ocp.extra.scalar("threshold");
  const double x4_end = traj.xx(traj.xx.rows() - 1, 3);
  const double J = (x4_end > threshold) ? x4_end : traj.uu.sum();
  const double g = rho - traj.xx.col(1).minCoeff();
  return {J, g};
}

}  // namespace

Scenario make_cancer(const CancerOptions& opts) {
  Scenario sc;
  sc.name = "cancer";

  ProblemDefinition& def = sc.def;
  def.name = "cancer";
  def.ode_rhs = tumor_rhs;
  def.control_profile = cyclic_block_profile;
  def.ocp = tumor_ocp;

  const double tau = 0.25;  // days
  def.ode.tau = tau;
  def.ode.rk_order = 4;
  def.ode.x0 = (Eigen::VectorXd(4) << 5e8, 1e9, 0.0, 1e9).finished();
  def.ode.u0 = Eigen::VectorXd::Zero(2);

  ParamMap& oe = def.ode.extra;
  oe.set("a", 25e-2);
  oe.set("b", 1.02e-14);
  oe.set("c1", 4.41e-10);
  oe.set("f", 4.12e-2);  // part of the published constant set; unused by the rhs
  oe.set("g", 1.5e-2);
  oe.set("r", 4e-2);
  oe.set("h", 2.02e1);
  oe.set("k1", 8e-1);
  oe.set("k2", 6e-1);
  oe.set("k3", 6e-1);
  oe.set("p", 2e-11);
  oe.set("s1", 1.2e7);
  oe.set("s2", 7.5e6);
  oe.set("delta", 1.2e-2);
  oe.set("gam", 9e-1);

  const int N1 = static_cast<int>(std::floor(opts.treat_days / tau + 1e-9));
  const int N2 = static_cast<int>(std::floor(opts.rest_days / tau + 1e-9));
  const int Np = N1 + N2;
  const int nu = 2;
  Eigen::VectorXd umax = opts.umax;
  if (umax.size() == 0) umax = (Eigen::VectorXd(2) << 10.0, 1.0).finished();

  ProfileParams& up = def.uparam;
  up.nu = nu;
  up.Np = Np;
  up.np = nu * N1;
  up.p = Eigen::VectorXd::Zero(up.np);
  up.pmin = Eigen::VectorXd::Zero(up.np);
  up.pmax.resize(up.np);
  for (int j = 0; j < up.np; ++j) up.pmax[j] = umax[j % nu];
  up.extra.set("N1", static_cast<double>(N1));
  up.extra.set("N2", static_cast<double>(N2));
  up.extra.set("index", 1.0);
  up.extra.set("umax", umax);

  def.ocp_params.extra.set("rho", 5e7);
  def.ocp_params.extra.set("threshold", 1e-40);

  sc.nev = 2000;
  sc.tsim = 20.0 * Np * tau;
  sc.engine_rk_order = 0;  // predictions use the plant's own order
  sc.trust = update_trust_region_parameters(TrustRegionConfig{}, 2.0, 0.5);
  sc.scheduler = [](const SchedulerContext& c, Engine& eng) {
    const int Np_loop = eng.uparam().Np;
    const int index = ((c.step - 1) % Np_loop) + 1;
    eng.set("uparam.index", Value(static_cast<double>(index)));
  };
  sc.log_fields = {"uparam.index"};
  return sc;
}

}  // namespace dfmpc

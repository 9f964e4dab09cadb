#include "dfmpc/engine.hpp"

#include <chrono>
#include <limits>

#include "dfmpc/errors.hpp"
#include "dfmpc/integrator.hpp"
#include "dfmpc/serialize.hpp"
#include "dfmpc/validate.hpp"

namespace dfmpc {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Engine::Engine(const ProblemDefinition& def, int nev, TrustRegionConfig trust_cfg)
    : trust(std::move(trust_cfg)),
      rhs_(def.ode_rhs),
      profile_(def.control_profile),
      ocp_fn_(def.ocp),
      ode_(def.ode),
      uparam_(def.uparam),
      ocp_(def.ocp_params) {
  require_valid(def);
  set_nev(nev);
  ode_.w.setZero();  // predictions are nominal regardless of the plant record
  warm_p_ = uparam_.p;
  teval_ = estimate_eval_time(
      [this](const Eigen::VectorXd& p) { return evaluate_installed(p); }, warm_p_);
}

void Engine::set_nev(int nev) {
  if (nev < 1) throw DimensionError("Nev must be >= 1");
  nev_ = nev;
}

std::pair<double, double> Engine::evaluate_with(const OdeParams& ode,
                                                const Eigen::VectorXd& p) const {
  Eigen::MatrixXd prof = profile_(p, ode, uparam_);
  if (prof.rows() != uparam_.Np || prof.cols() != uparam_.nu) {
    throw DimensionError("control_profile returned shape " +
                         std::to_string(prof.rows()) + "x" +
                         std::to_string(prof.cols()) + ", expected " +
                         std::to_string(uparam_.Np) + "x" + std::to_string(uparam_.nu));
  }
  Trajectory traj;
  try {
    traj = rollout(ode.x0, prof, ode, rhs_);
  } catch (const NonFiniteStateError&) {
    return {kNaN, kNaN};  // diverged candidate: ranks below every finite one
  }
  return ocp_fn_(traj, ode, uparam_, ocp_);
}

std::pair<double, double> Engine::evaluate_installed(const Eigen::VectorXd& p) const {
  return evaluate_with(ode_, p);
}

std::pair<double, double> Engine::evaluate(const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& x) const {
  if (x.size() != ode_.x0.size()) {
    throw DimensionError("evaluate: state has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(ode_.x0.size()));
  }
  if ((x.array() == ode_.x0.array()).all()) return evaluate_installed(p);
  OdeParams local = ode_;
  local.x0 = x;
  return evaluate_with(local, p);
}

MpcResult Engine::step(const Eigen::VectorXd& x, const std::vector<int>& subset,
                       std::vector<TraceEntry>* trace) {
  if (x.size() != ode_.x0.size()) {
    throw DimensionError("step: state has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(ode_.x0.size()));
  }
  ode_.x0 = x;
  // The warm start must satisfy the (possibly re-tightened) box.
  for (Eigen::Index i = 0; i < warm_p_.size(); ++i) {
    warm_p_[i] = std::clamp(warm_p_[i], uparam_.pmin[i], uparam_.pmax[i]);
  }

  MpcResult res;
  const auto t0 = std::chrono::steady_clock::now();
  res.state = solve([this](const Eigen::VectorXd& p) { return evaluate_installed(p); },
                    warm_p_, uparam_.pmin, uparam_.pmax, nev_, trust, subset, trace);
  const auto t1 = std::chrono::steady_clock::now();
  res.t_exec = std::chrono::duration<double>(t1 - t0).count();

  Eigen::MatrixXd prof = profile_(res.state.p_best, ode_, uparam_);
  res.u = prof.row(0).transpose();
  Eigen::MatrixXd stacked = prof.transpose();  // nu x Np, instant-major when flattened
  res.u_sol = Eigen::Map<const Eigen::VectorXd>(stacked.data(), stacked.size());

  warm_p_ = res.state.p_best;
  ode_.u0 = res.u;
  return res;
}

void Engine::set(const std::string& path, const Value& v) {
  const auto dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    throw DimensionError("expected a record.field path, observed '" + path + "'");
  }
  const std::string record = path.substr(0, dot);
  const std::string field = path.substr(dot + 1);
  if (record == "ode") {
    if (field == "x0" && v.vector().size() != ode_.x0.size()) {
      throw DimensionError("ode.x0 length cannot change on a live engine");
    }
    if (field == "u0" && v.vector().size() != ode_.u0.size()) {
      throw DimensionError("ode.u0 length cannot change on a live engine");
    }
    if (field == "w" && v.vector().size() != ode_.w.size()) {
      throw DimensionError("ode.w length cannot change on a live engine");
    }
    OdeParams next = ode_;
    set_ode_field(next, field, v);
    if (field == "tau" && !(next.tau > 0)) {
      throw DimensionError("ode.tau must stay positive");
    }
    if (field == "rk_order" && next.rk_order != 1 && next.rk_order != 2 &&
        next.rk_order != 4) {
      throw DimensionError("ode.rk_order must be 1, 2 or 4");
    }
    ode_ = std::move(next);
  } else if (record == "uparam") {
    if (field == "Np" || field == "np" || field == "nu") {
      throw DimensionError("uparam." + field +
                           " cannot be changed after engine creation "
                           "(decision-space dimensions are fixed)");
    }
    if ((field == "p" || field == "pmin" || field == "pmax") &&
        v.vector().size() != uparam_.np) {
      throw DimensionError("uparam." + field + " must keep length np = " +
                           std::to_string(uparam_.np));
    }
    set_uparam_field(uparam_, field, v);
    if (field == "p") warm_p_ = uparam_.p;
  } else if (record == "ocp") {
    ocp_.extra.set(field, v);
  } else {
    throw DimensionError("unknown record '" + record + "' (use ode, uparam or ocp)");
  }
}

Value Engine::get(const std::string& path) const {
  const auto dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    throw DimensionError("expected a record.field path, observed '" + path + "'");
  }
  const std::string record = path.substr(0, dot);
  const std::string field = path.substr(dot + 1);
  if (record == "ode") return get_ode_field(ode_, field);
  if (record == "uparam") return get_uparam_field(uparam_, field);
  if (record == "ocp") return ocp_.extra.at(field);
  throw DimensionError("unknown record '" + record + "' (use ode, uparam or ocp)");
}

}  // namespace dfmpc

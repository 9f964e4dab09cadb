#include "dfmpc/sim.hpp"

#include <cmath>
#include <ostream>

#include "dfmpc/errors.hpp"
#include "dfmpc/integrator.hpp"
#include "dfmpc/serialize.hpp"
#include "dfmpc/validate.hpp"

namespace dfmpc {

OpenLoopResult simulate_ol(const Eigen::VectorXd& p, const OdeParams& ode,
                           const ProfileParams& uparam, const ProblemDefinition& def) {
  require_valid(def);
  if (p.size() != uparam.np) {
    throw DimensionError("simulate_ol: p has length " + std::to_string(p.size()) +
                         ", expected np = " + std::to_string(uparam.np));
  }
  OpenLoopResult out;
  Eigen::MatrixXd prof = def.control_profile(p, ode, uparam);
  out.traj = rollout(ode.x0, prof, ode, def.ode_rhs);
  out.tt = Eigen::VectorXd::LinSpaced(uparam.Np + 1, 0.0, uparam.Np * ode.tau);
  return out;
}

ClosedLoopLog initialize(double tsim, const Engine& engine) {
  const double tau = engine.ode().tau;
  if (!(tsim > 0.0)) throw DimensionError("initialize: tsim must be > 0");
  const int ntsim = static_cast<int>(std::floor(tsim / tau + 1e-9)) + 1;
  ClosedLoopLog log;
  log.tt = Eigen::VectorXd::LinSpaced(ntsim, 0.0, (ntsim - 1) * tau);
  log.xx = Eigen::MatrixXd::Zero(ntsim, engine.ode().x0.size());
  log.xx.row(0) = engine.ode().x0.transpose();
  log.uu = Eigen::MatrixXd::Zero(ntsim, engine.uparam().nu);
  log.tt_exec = Eigen::VectorXd::Zero(ntsim);
  log.rows_valid = 1;
  return log;
}

ClosedLoopLog run_closed_loop(const ProblemDefinition& def, Engine& engine,
                              const OdeParams& plant_ode, double tsim,
                              const RunOptions& opts) {
  ClosedLoopLog log = initialize(tsim, engine);
  const int ntsim = log.ntsim();

  log.scheduled_names.clear();
  for (const auto& path : opts.log_fields) {
    const auto dot = path.find('.');
    log.scheduled_names.push_back(dot == std::string::npos ? path
                                                           : path.substr(dot + 1));
  }
  log.scheduled = Eigen::MatrixXd::Zero(ntsim, static_cast<Eigen::Index>(
                                                   opts.log_fields.size()));

  Eigen::VectorXd x = engine.ode().x0;
  for (int i = 0; i + 1 < ntsim; ++i) {
    if (opts.scheduler) {
      opts.scheduler(SchedulerContext{i + 1, log.tt[i], log.tt[ntsim - 1]}, engine);
    }
    for (std::size_t f = 0; f < opts.log_fields.size(); ++f) {
      log.scheduled(i, static_cast<Eigen::Index>(f)) =
          engine.get(opts.log_fields[f]).scalar();
    }

    const bool last_update = (i + 2 == ntsim);
    MpcResult res = engine.step(x, opts.subset,
                                last_update ? opts.last_step_trace : nullptr);
    log.uu.row(i) = res.u.transpose();
    log.tt_exec[i] = res.t_exec;

    try {
      x = one_step(x, res.u, plant_ode, def.ode_rhs);
    } catch (const NonFiniteStateError&) {
      log.diverged = true;
      log.rows_valid = i + 1;
      return log;
    }
    log.xx.row(i + 1) = x.transpose();
    log.rows_valid = i + 2;
  }

  // The final instant gets no update: repeat the scheduled signals for plotting.
  if (ntsim >= 2 && log.scheduled.cols() > 0) {
    log.scheduled.row(ntsim - 1) = log.scheduled.row(ntsim - 2);
  }
  return log;
}

namespace {

void write_row(std::ostream& os, const double* vals, int n) {
  for (int i = 0; i < n; ++i) {
    if (i) os << ',';
    os << format_double(vals[i]);
  }
  os << '\n';
}

}  // namespace

void write_closed_loop_csv(std::ostream& os, const ClosedLoopLog& log) {
  os << 't';
  for (Eigen::Index j = 0; j < log.xx.cols(); ++j) os << ",x" << (j + 1);
  for (Eigen::Index j = 0; j < log.uu.cols(); ++j) os << ",u" << (j + 1);
  for (const auto& name : log.scheduled_names) os << ',' << name;
  os << '\n';
  std::vector<double> row;
  for (int i = 0; i < log.rows_valid; ++i) {
    row.clear();
    row.push_back(log.tt[i]);
    for (Eigen::Index j = 0; j < log.xx.cols(); ++j) row.push_back(log.xx(i, j));
    for (Eigen::Index j = 0; j < log.uu.cols(); ++j) row.push_back(log.uu(i, j));
    for (Eigen::Index j = 0; j < log.scheduled.cols(); ++j) {
      row.push_back(log.scheduled(i, j));
    }
    write_row(os, row.data(), static_cast<int>(row.size()));
  }
}

void write_timing_csv(std::ostream& os, const ClosedLoopLog& log) {
  os << "t,t_exec\n";
  for (int i = 0; i < log.rows_valid; ++i) {
    const double row[2] = {log.tt[i], log.tt_exec[i]};
    write_row(os, row, 2);
  }
}

void write_open_loop_csv(std::ostream& os, const OpenLoopResult& ol) {
  os << 't';
  for (Eigen::Index j = 0; j < ol.traj.xx.cols(); ++j) os << ",x" << (j + 1);
  for (Eigen::Index j = 0; j < ol.traj.uu.cols(); ++j) os << ",u" << (j + 1);
  os << '\n';
  std::vector<double> row;
  const Eigen::Index n = ol.traj.xx.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    row.push_back(ol.tt[i]);
    for (Eigen::Index j = 0; j < ol.traj.xx.cols(); ++j) row.push_back(ol.traj.xx(i, j));
    for (Eigen::Index j = 0; j < ol.traj.uu.cols(); ++j) {
      row.push_back(i < ol.traj.uu.rows() ? ol.traj.uu(i, j) : 0.0);
    }
    write_row(os, row.data(), static_cast<int>(row.size()));
  }
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "n_eval";
  const Eigen::Index np = trace.empty() ? 0 : trace.front().p.size();
  for (Eigen::Index j = 0; j < np; ++j) os << ",p" << (j + 1);
  os << ",J,g,accepted\n";
  for (const auto& e : trace) {
    os << e.n_eval;
    for (Eigen::Index j = 0; j < np; ++j) os << ',' << format_double(e.p[j]);
    os << ',' << format_double(e.J) << ',' << format_double(e.g) << ','
       << (e.accepted ? 1 : 0) << '\n';
  }
}

}  // namespace dfmpc

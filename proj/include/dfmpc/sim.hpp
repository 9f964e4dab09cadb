#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfmpc/engine.hpp"
#include "dfmpc/params.hpp"

namespace dfmpc {

/// Open-loop rollout of one decision vector.
struct OpenLoopResult {
  Eigen::VectorXd tt;  ///< Np+1 instants, starting at 0
  Trajectory traj;
};

/// Roll out candidate p under the GIVEN dynamics record (which may carry
/// non-zero uncertainty, unlike the engine's nominal copy).
OpenLoopResult simulate_ol(const Eigen::VectorXd& p, const OdeParams& ode,
                           const ProfileParams& uparam, const ProblemDefinition& def);

/// Context handed to the per-step scheduler hook.
struct SchedulerContext {
  int step;      ///< control update number, starting at 1
  double t;      ///< current instant
  double t_end;  ///< last instant of the run
};

/// Called before every control update; may mutate engine fields (setpoints,
/// phase counters, budgets) through the engine's guarded interface.
using Scheduler = std::function<void(const SchedulerContext&, Engine&)>;

/// Closed-loop history. Row k holds instant k; the last control row and
/// solver-time entry stay zero (no update happens at the final instant).
struct ClosedLoopLog {
  Eigen::VectorXd tt;
  Eigen::MatrixXd xx;       ///< ntsim x nx, row 1 = initial state
  Eigen::MatrixXd uu;       ///< ntsim x nu
  Eigen::VectorXd tt_exec;  ///< per-update solver seconds
  std::vector<std::string> scheduled_names;  ///< logged scheduled signals
  Eigen::MatrixXd scheduled;                 ///< ntsim x |scheduled_names|
  bool diverged = false;
  int rows_valid = 0;  ///< rows actually filled (< ntsim only when diverged)

  int ntsim() const { return static_cast<int>(tt.size()); }
};

/// Pre-allocate a closed-loop log for a run of duration tsim:
/// ntsim = floor(tsim/tau) + 1 instants, states zeroed except row 1 = x0.
ClosedLoopLog initialize(double tsim, const Engine& engine);

struct RunOptions {
  std::vector<int> subset;  ///< decision components to optimize (1-based; empty = all)
  Scheduler scheduler;      ///< optional per-step hook
  /// Engine fields snapshotted into the log each step (e.g. "ocp.rd"); the
  /// logged column is named by the part after the dot.
  std::vector<std::string> log_fields;
  /// When set, receives the solver trace of the final control update.
  std::vector<TraceEntry>* last_step_trace = nullptr;
};

/// Simulate the receding-horizon loop: per instant, run the scheduler, solve
/// for the control, apply its first row to the plant dynamics (plant_ode may
/// differ from the engine's nominal record in uncertainty and integration
/// order) and advance. A non-finite plant state stops the run early with
/// diverged = true and a truncated but well-formed log.
ClosedLoopLog run_closed_loop(const ProblemDefinition& def, Engine& engine,
                              const OdeParams& plant_ode, double tsim,
                              const RunOptions& opts = {});

/// Deterministic CSV writers: RFC-4180-style rows, '.' decimal separator,
/// shortest round-trip double formatting, '\n' line ends.
void write_closed_loop_csv(std::ostream& os, const ClosedLoopLog& log);
void write_timing_csv(std::ostream& os, const ClosedLoopLog& log);
void write_open_loop_csv(std::ostream& os, const OpenLoopResult& ol);
void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);

}  // namespace dfmpc

#pragma once

#include <string>
#include <vector>

#include "dfmpc/engine.hpp"
#include "dfmpc/params.hpp"
#include "dfmpc/sim.hpp"
#include "dfmpc/solver.hpp"

namespace dfmpc {

/// A ready-to-run closed-loop study. def.ode is the PLANT record (it may
/// carry non-zero uncertainty); the engine always predicts with a nominal
/// copy, optionally at a cheaper integration order.
struct Scenario {
  std::string name;
  ProblemDefinition def;
  int nev = 0;              ///< per-update evaluation budget
  double tsim = 0.0;        ///< default run duration
  int engine_rk_order = 0;  ///< prediction integration order (0 = same as plant)
  TrustRegionConfig trust;
  Scheduler scheduler;                   ///< setpoint / phase schedule
  std::vector<std::string> log_fields;   ///< engine fields logged per step
};

/// Gantry crane positioning under a tight swing-angle limit. Mismatched
/// plant: doubled load mass, 20% lower frictions. The scheduler walks the
/// position setpoint through +1, -3, +3.
Scenario make_crane();

struct CancerOptions {
  double treat_days = 5.0;  ///< length of the active dosing block
  double rest_days = 4.0;   ///< length of the rest block
  Eigen::VectorXd umax;     ///< per-input dose ceilings (empty = [10, 1])
};

/// Combined immuno/chemotherapy dosing on a four-state tumor growth model,
/// cycling through treatment and rest phases while keeping the circulating
/// lymphocyte population above a survival threshold.
Scenario make_cancer(const CancerOptions& opts = {});

/// Registered study names.
std::vector<std::string> scenario_names();

/// Build a registered study by name; throws Error for unknown names.
Scenario make_scenario(const std::string& name);

/// Engine for a scenario, with its prediction integration order applied.
Engine make_engine(const Scenario& sc);

}  // namespace dfmpc

#include <sstream>

#include "dfmpc/errors.hpp"
#include "dfmpc/scenario.hpp"

namespace dfmpc {

std::vector<std::string> scenario_names() {
  return {"crane", "cancer", "cancer-n2-2", "cancer-n2-3", "cancer-umax-20"};
}

Scenario make_scenario(const std::string& name) {
  if (name == "crane") return make_crane();
  if (name == "cancer") return make_cancer();
  if (name == "cancer-n2-2") {
    CancerOptions o;
    o.rest_days = 2.0;
    Scenario sc = make_cancer(o);
    sc.name = name;
    return sc;
  }
  if (name == "cancer-n2-3") {
    CancerOptions o;
    o.rest_days = 3.0;
    Scenario sc = make_cancer(o);
    sc.name = name;
    return sc;
  }
  if (name == "cancer-umax-20") {
    CancerOptions o;
    o.umax = (Eigen::VectorXd(2) << 20.0, 1.0).finished();
    Scenario sc = make_cancer(o);
    sc.name = name;
    return sc;
  }
  std::ostringstream msg;
  msg << "unknown example '" << name << "' (available:";
  for (const std::string& n : scenario_names()) msg << ' ' << n;
  msg << ')';
  throw Error(msg.str());
}

Engine make_engine(const Scenario& sc) {
  Engine eng(sc.def, sc.nev, sc.trust);
  if (sc.engine_rk_order != 0 && sc.engine_rk_order != sc.def.ode.rk_order) {
    eng.set("ode.rk_order", Value(static_cast<double>(sc.engine_rk_order)));
  }
  return eng;
}

}  // namespace dfmpc

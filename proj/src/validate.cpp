#include "dfmpc/validate.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "dfmpc/errors.hpp"

namespace dfmpc {

namespace {

void add(ValidationReport& r, const std::string& field, const std::string& msg) {
  r.violations.push_back({field, msg});
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].field << ": " << violations[i].message;
  }
  return os.str();
}

ValidationReport validate_problem(const ProblemDefinition& def) {
  ValidationReport r;

  const OdeParams& ode = def.ode;
  if (std::isnan(ode.tau)) {
    add(r, "tau", "missing field tau");
  } else if (!(ode.tau > 0.0) || !std::isfinite(ode.tau)) {
    add(r, "tau", "expected a positive sampling period, observed " + std::to_string(ode.tau));
  }
  if (ode.x0.size() == 0) {
    add(r, "x0", "missing field x0 (empty initial state)");
  } else if (!all_finite(ode.x0)) {
    add(r, "x0", "initial state contains non-finite entries");
  }
  if (ode.u0.size() == 0) {
    add(r, "u0", "missing field u0 (empty previous control)");
  } else if (!all_finite(ode.u0)) {
    add(r, "u0", "previous control contains non-finite entries");
  }
  if (ode.rk_order == 0) {
    add(r, "rk_order", "missing field rk_order");
  } else if (ode.rk_order != 1 && ode.rk_order != 2 && ode.rk_order != 4) {
    add(r, "rk_order",
        "expected 1, 2 or 4, observed " + std::to_string(ode.rk_order));
  }

  const ProfileParams& up = def.uparam;
  if (up.nu < 1) add(r, "nu", "expected nu >= 1, observed " + std::to_string(up.nu));
  if (up.Np < 1) add(r, "Np", "expected Np >= 1, observed " + std::to_string(up.Np));
  if (up.np < 1) add(r, "np", "expected np >= 1, observed " + std::to_string(up.np));
  auto check_len = [&](const char* name, const Eigen::VectorXd& v) {
    if (v.size() == 0) {
      add(r, name, std::string("missing field ") + name);
      return false;
    }
    if (up.np >= 1 && v.size() != up.np) {
      add(r, name,
          std::string("expected length np = ") + std::to_string(up.np) +
              ", observed " + std::to_string(v.size()));
      return false;
    }
    return true;
  };
  bool p_ok = check_len("p", up.p);
  bool lo_ok = check_len("pmin", up.pmin);
  bool hi_ok = check_len("pmax", up.pmax);
  if (lo_ok && !all_finite(up.pmin)) {
    add(r, "pmin", "bounds must be finite (the box is always hard)");
    lo_ok = false;
  }
  if (hi_ok && !all_finite(up.pmax)) {
    add(r, "pmax", "bounds must be finite (the box is always hard)");
    hi_ok = false;
  }
  if (p_ok && lo_ok && hi_ok) {
    for (Eigen::Index i = 0; i < up.p.size(); ++i) {
      if (!(up.pmin[i] <= up.p[i] && up.p[i] <= up.pmax[i])) {
        std::ostringstream os;
        os << "expected pmin <= p <= pmax componentwise, violated at component "
           << (i + 1) << " (" << up.pmin[i] << ", " << up.p[i] << ", " << up.pmax[i] << ")";
        add(r, "p", os.str());
        break;
      }
    }
  }

  if (up.nu >= 1 && ode.u0.size() != 0 && ode.u0.size() != up.nu) {
    add(r, "u0",
        "expected length nu = " + std::to_string(up.nu) + ", observed " +
            std::to_string(ode.u0.size()));
  }

  if (!def.ode_rhs) add(r, "ode_rhs", "missing callback");
  if (!def.control_profile) add(r, "control_profile", "missing callback");
  if (!def.ocp) add(r, "ocp", "missing callback");

  // Probe calls only once the static checks hold for the data they consume.
  if (def.ode_rhs && ode.x0.size() > 0 && ode.u0.size() > 0) {
    try {
      Eigen::VectorXd xdot = def.ode_rhs(ode.x0, ode.u0, ode);
      if (xdot.size() != ode.x0.size()) {
        add(r, "ode_rhs",
            "expected output length nx = " + std::to_string(ode.x0.size()) +
                ", observed " + std::to_string(xdot.size()));
      } else if (!all_finite(xdot)) {
        add(r, "ode_rhs", "probe call at (x0, u0) returned non-finite values");
      }
    } catch (const std::exception& e) {
      add(r, "ode_rhs", std::string("probe call failed: ") + e.what());
    }
  }
  if (def.control_profile && p_ok && up.Np >= 1 && up.nu >= 1) {
    try {
      Eigen::MatrixXd prof = def.control_profile(up.p, ode, up);
      if (prof.rows() != up.Np || prof.cols() != up.nu) {
        std::ostringstream os;
        os << "expected shape " << up.Np << "x" << up.nu << ", observed "
           << prof.rows() << "x" << prof.cols();
        add(r, "control_profile", os.str());
      }
    } catch (const std::exception& e) {
      add(r, "control_profile", std::string("probe call failed: ") + e.what());
    }
  }

  return r;
}

void require_valid(const ProblemDefinition& def) {
  ValidationReport r = validate_problem(def);
  if (!r.ok()) throw ValidationError("invalid problem definition: " + r.str());
}

}  // namespace dfmpc

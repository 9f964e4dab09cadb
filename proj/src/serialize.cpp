#include "dfmpc/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>

#include "dfmpc/errors.hpp"

namespace dfmpc {

namespace {

Json number_to_json(double v) {
  // Integral values within the exact range serialize as integers.
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.007199254740992e15) {
    return Json(static_cast<std::int64_t>(v));
  }
  return Json(v);
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number_to_json(v[i]));
  return arr;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (j.is_number()) return Eigen::VectorXd::Constant(1, j.get<double>());
  if (!j.is_array()) throw DimensionError("expected a numeric array");
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw DimensionError("expected a numeric array");
    v[i++] = e.get<double>();
  }
  return v;
}

}  // namespace

Json value_to_json(const Value& v) {
  if (v.is_scalar()) return number_to_json(v.scalar());
  if (v.is_vector()) return vector_to_json(v.vector_ref());
  const Eigen::MatrixXd& m = v.matrix();
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Value value_from_json(const Json& j) {
  if (j.is_number()) return Value(j.get<double>());
  if (!j.is_array()) throw DimensionError("expected a number or an array");
  if (j.empty()) return Value(Eigen::VectorXd());
  if (j.front().is_array()) {
    const Eigen::Index rows = j.size();
    const Eigen::Index cols = j.front().size();
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index r = 0;
    for (const auto& row : j) {
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw DimensionError("matrix rows must be arrays of equal length");
      }
      Eigen::Index c = 0;
      for (const auto& e : row) {
        if (!e.is_number()) throw DimensionError("matrix entries must be numbers");
        m(r, c++) = e.get<double>();
      }
      ++r;
    }
    return Value(std::move(m));
  }
  return Value(vector_from_json(j));
}

Json ode_to_json(const OdeParams& ode) {
  Json j = Json::object();
  if (!std::isnan(ode.tau)) j["tau"] = number_to_json(ode.tau);
  if (ode.x0.size()) j["x0"] = vector_to_json(ode.x0);
  if (ode.u0.size()) j["u0"] = vector_to_json(ode.u0);
  if (ode.rk_order) j["rk_order"] = ode.rk_order;
  if (ode.w.size()) j["w"] = vector_to_json(ode.w);
  for (const auto& [k, v] : ode.extra) j[k] = value_to_json(v);
  return j;
}

OdeParams ode_from_json(const Json& j) {
  OdeParams ode;
  for (const auto& [key, val] : j.items()) {
    set_ode_field(ode, key, value_from_json(val));
  }
  return ode;
}

Json uparam_to_json(const ProfileParams& up) {
  Json j = Json::object();
  if (up.nu) j["nu"] = up.nu;
  if (up.Np) j["Np"] = up.Np;
  if (up.np) j["np"] = up.np;
  if (up.p.size()) j["p"] = vector_to_json(up.p);
  if (up.pmin.size()) j["pmin"] = vector_to_json(up.pmin);
  if (up.pmax.size()) j["pmax"] = vector_to_json(up.pmax);
  for (const auto& [k, v] : up.extra) j[k] = value_to_json(v);
  return j;
}

ProfileParams uparam_from_json(const Json& j) {
  ProfileParams up;
  for (const auto& [key, val] : j.items()) {
    set_uparam_field(up, key, value_from_json(val));
  }
  return up;
}

Json ocp_to_json(const OcpParams& ocp) {
  Json j = Json::object();
  for (const auto& [k, v] : ocp.extra) j[k] = value_to_json(v);
  return j;
}

OcpParams ocp_from_json(const Json& j) {
  OcpParams ocp;
  for (const auto& [key, val] : j.items()) {
    ocp.extra.set(key, value_from_json(val));
  }
  return ocp;
}

void set_ode_field(OdeParams& ode, const std::string& name, const Value& v) {
  if (name == "tau") {
    ode.tau = v.scalar();
  } else if (name == "x0") {
    ode.x0 = v.vector();
  } else if (name == "u0") {
    ode.u0 = v.vector();
  } else if (name == "rk_order") {
    ode.rk_order = static_cast<int>(v.integer());
  } else if (name == "w") {
    ode.w = v.vector();
  } else {
    ode.extra.set(name, v);
  }
}

Value get_ode_field(const OdeParams& ode, const std::string& name) {
  if (name == "tau") return Value(ode.tau);
  if (name == "x0") return Value(ode.x0);
  if (name == "u0") return Value(ode.u0);
  if (name == "rk_order") return Value(ode.rk_order);
  if (name == "w") return Value(ode.w);
  return ode.extra.at(name);
}

void set_uparam_field(ProfileParams& up, const std::string& name, const Value& v) {
  if (name == "nu") {
    up.nu = static_cast<int>(v.integer());
  } else if (name == "Np") {
    up.Np = static_cast<int>(v.integer());
  } else if (name == "np") {
    up.np = static_cast<int>(v.integer());
  } else if (name == "p") {
    up.p = v.vector();
  } else if (name == "pmin") {
    up.pmin = v.vector();
  } else if (name == "pmax") {
    up.pmax = v.vector();
  } else {
    up.extra.set(name, v);
  }
}

Value get_uparam_field(const ProfileParams& up, const std::string& name) {
  if (name == "nu") return Value(up.nu);
  if (name == "Np") return Value(up.Np);
  if (name == "np") return Value(up.np);
  if (name == "p") return Value(up.p);
  if (name == "pmin") return Value(up.pmin);
  if (name == "pmax") return Value(up.pmax);
  return up.extra.at(name);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace dfmpc

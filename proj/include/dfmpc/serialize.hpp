#pragma once

#include <json.hpp>
#include <string>

#include "dfmpc/params.hpp"

namespace dfmpc {

/// JSON flavor used throughout: preserves object key order.
using Json = nlohmann::ordered_json;

/// Value <-> JSON. Scalars map to numbers, vectors to arrays, matrices to
/// arrays of row arrays. Integral scalars serialize as integers.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

/// Records <-> JSON objects. Mandatory fields use their canonical names
/// (tau, x0, u0, rk_order, w / nu, Np, np, p, pmin, pmax); every other key
/// round-trips through the record's extra map. Deserialization leaves absent
/// mandatory fields at their sentinel defaults so validation can name them.
Json ode_to_json(const OdeParams& ode);
OdeParams ode_from_json(const Json& j);
Json uparam_to_json(const ProfileParams& up);
ProfileParams uparam_from_json(const Json& j);
Json ocp_to_json(const OcpParams& ocp);
OcpParams ocp_from_json(const Json& j);

/// Field access by name, covering both mandatory fields and the extra map.
/// Setters accept any Value whose kind converts to the field's kind.
/// Unknown names read from / write to the extra map.
void set_ode_field(OdeParams& ode, const std::string& name, const Value& v);
Value get_ode_field(const OdeParams& ode, const std::string& name);
void set_uparam_field(ProfileParams& up, const std::string& name, const Value& v);
Value get_uparam_field(const ProfileParams& up, const std::string& name);

/// Shortest round-trip decimal formatting ('.' decimal separator, never
/// locale dependent). Non-finite values format as nan / inf / -inf.
std::string format_double(double v);

}  // namespace dfmpc

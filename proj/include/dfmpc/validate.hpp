#pragma once

#include <string>
#include <vector>

#include "dfmpc/params.hpp"

namespace dfmpc {

/// One validation failure: which field, what was expected vs observed.
struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  /// All violations joined into one diagnostic string.
  std::string str() const;
};

/// Check a problem definition: mandatory fields present and in range,
/// bounds consistent, callbacks present, and one probe call of ode_rhs and
/// control_profile returning the right shapes. Never throws; every problem
/// found is a named entry of the report.
ValidationReport validate_problem(const ProblemDefinition& def);

/// Convenience: throw ValidationError listing all violations if any.
void require_valid(const ProblemDefinition& def);

}  // namespace dfmpc

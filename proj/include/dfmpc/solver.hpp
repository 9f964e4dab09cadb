#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace dfmpc {

/// Objective/constraint oracle: p -> (J, g). g <= 0 means feasible. Non-finite
/// outputs are legal; such candidates rank below every finite one.
using EvalFn = std::function<std::pair<double, double>(const Eigen::VectorXd&)>;

/// One recorded evaluation.
struct Evaluation {
  Eigen::VectorXd p;
  double J = std::numeric_limits<double>::quiet_NaN();
  double g = std::numeric_limits<double>::quiet_NaN();
  bool finite() const { return std::isfinite(J) && std::isfinite(g); }
};

/// Feasibility-first comparison: true iff a is strictly better than b.
/// Non-finite never wins (two non-finite compare as a tie); a feasible point
/// beats any infeasible one; two infeasible points compare by g; two feasible
/// points compare by J. Ties are never "better".
bool merit_better(const Evaluation& a, const Evaluation& b);

/// Trust-region controls. alpha_min may be empty (default 1e-9 for every
/// component), a 1-vector (broadcast) or a full per-component vector.
struct TrustRegionConfig {
  double beta_plus = 2.0;    ///< radius expansion factor on success
  double beta_minus = 0.5;   ///< radius contraction factor on failure
  Eigen::VectorXd alpha_min; ///< stop when all radii fall below this
  double alpha0_fraction = 0.1;  ///< initial radius as a fraction of box width

  static constexpr double kDefaultAlphaMin = 1e-9;
};

/// Validated update of the trust-region factors. beta_plus must be >= 1,
/// beta_minus in (0, 1). The vector overload checks alpha_min length against
/// np (scalar and 1-vector broadcast; any other mismatch is an error).
TrustRegionConfig update_trust_region_parameters(TrustRegionConfig cfg,
                                                 double beta_plus, double beta_minus);
TrustRegionConfig update_trust_region_parameters(TrustRegionConfig cfg,
                                                 double beta_plus, double beta_minus,
                                                 double alpha_min);
TrustRegionConfig update_trust_region_parameters(TrustRegionConfig cfg,
                                                 double beta_plus, double beta_minus,
                                                 const Eigen::VectorXd& alpha_min, int np);

struct HistoryEntry {
  int n_eval;
  double J_best;
  double g_best;
};

/// One row of the optional per-evaluation trace.
struct TraceEntry {
  int n_eval;
  Eigen::VectorXd p;
  double J;
  double g;
  bool accepted;  ///< this evaluation became the incumbent
};

struct SolverState {
  Eigen::VectorXd p_best;
  double J_best = std::numeric_limits<double>::quiet_NaN();
  double g_best = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd alpha;  ///< final per-component radii
  int n_eval = 0;
  std::vector<HistoryEntry> history;  ///< incumbent improvements
};

/// Derivative-free box-constrained minimization of J subject to g <= 0.
///
/// Per round, the incumbent is probed along each optimized component at
/// +/- alpha_i (clipped to the box, duplicates of the incumbent skipped),
/// univariate quadratic models of J and g are fitted per component, and a
/// composite candidate combines the per-component model minimizers: the
/// g-model minimizer while the incumbent is infeasible, otherwise the J-model
/// minimizer restricted to where the g-model is non-positive. A round whose
/// candidate strictly improves the incumbent (merit_better) expands the radii
/// by beta_plus (capped at the box width); any other round contracts them by
/// beta_minus. Stops when the next evaluation would exceed max_evals or when
/// every optimized radius has fallen below alpha_min.
///
/// subset lists the components to optimize, numbered from 1; all remaining
/// components of every evaluated point keep their p_init value bit-exactly.
/// An empty subset optimizes every component.
///
/// The search is deterministic, performs at most max_evals evaluations, and
/// returns the best point among all evaluated ones.
SolverState solve(const EvalFn& eval, const Eigen::VectorXd& p_init,
                  const Eigen::VectorXd& pmin, const Eigen::VectorXd& pmax,
                  int max_evals, const TrustRegionConfig& cfg = {},
                  const std::vector<int>& subset = {},
                  std::vector<TraceEntry>* trace = nullptr);

/// Mean wall-clock seconds of one evaluation, averaged over K calls.
double estimate_eval_time(const EvalFn& eval, const Eigen::VectorXd& p, int K = 100);

}  // namespace dfmpc

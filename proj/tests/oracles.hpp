// Independent reference implementations used to pin expected values in the
// tests. Each oracle recomputes a quantity by the most direct method
// available (per-sample interpolation, closed-form solutions, exhaustive
// search) without touching the library's own algorithms.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

// Piecewise-linear reconstruction of a scalar profile from free samples:
// value p_j at instant ifree[j], linear interpolation between consecutive
// free instants, constant extrapolation before the first and after the last.
// Direct per-instant evaluation; no matrix is formed.
inline Eigen::VectorXd interp_profile(const std::vector<int>& ifree,  // 1-based
                                      const Eigen::VectorXd& p, int N) {
  Eigen::VectorXd out(N);
  for (int k = 1; k <= N; ++k) {
    double v;
    if (k <= ifree.front()) {
      v = p[0];
    } else if (k >= ifree.back()) {
      v = p[p.size() - 1];
    } else {
      int j = 0;
      while (ifree[j + 1] < k) ++j;
      const double k0 = ifree[j], k1 = ifree[j + 1];
      const double w = (k - k0) / (k1 - k0);
      v = (1.0 - w) * p[j] + w * p[j + 1];
    }
    out[k - 1] = v;
  }
  return out;
}

// Closed-form lymphocyte population in the drug-free cancer model:
// x2' = -delta*x2 + s2 with x3 = 0  =>  x2(t) = s2/delta + (x2(0)-s2/delta)*exp(-delta*t).
inline double lymphocytes_drug_free(double x2_0, double t, double s2 = 7.5e6,
                                    double delta = 1.2e-2) {
  const double xeq = s2 / delta;
  return xeq + (x2_0 - xeq) * std::exp(-delta * t);
}

// Exhaustive 1-D minimizer of f subject to g(p) <= 0 over a uniform grid.
template <class F, class G>
double grid_min_1d(F f, G g, double lo, double hi, double step) {
  double best_p = std::numeric_limits<double>::quiet_NaN();
  double best_f = std::numeric_limits<double>::infinity();
  for (double p = lo; p <= hi + 0.5 * step; p += step) {
    if (g(p) > 0) continue;
    const double v = f(p);
    if (v < best_f) {
      best_f = v;
      best_p = p;
    }
  }
  return best_p;
}

}  // namespace oracles

#include "dfmpc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>

#include "dfmpc/errors.hpp"

namespace dfmpc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Univariate model f(s) ~ A s^2 + B s + C fitted through up to three samples.
/// npts counts the samples used: 3 exact quadratic, 2 linear, 1 constant,
/// 0 no data.
struct QuadModel {
  int npts = 0;
  double A = 0.0, B = 0.0, C = 0.0;
  double eval(double s) const { return (A * s + B) * s + C; }
};

struct Sample {
  double s;
  double f;
};

QuadModel fit_model(const Sample* samples, int n) {
  QuadModel m;
  m.npts = n;
  if (n == 0) return m;
  if (n == 1) {
    m.C = samples[0].f;
    return m;
  }
  if (n == 2) {
    const double s1 = samples[0].s, f1 = samples[0].f;
    const double s2 = samples[1].s, f2 = samples[1].f;
    m.B = (f2 - f1) / (s2 - s1);
    m.C = f1 - m.B * s1;
    return m;
  }
  // Three samples at -dm, 0, +dp (center always at s = 0 by construction).
  double dm = 0.0, dp = 0.0, fm = 0.0, f0 = 0.0, fp = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (samples[i].s < 0) {
      dm = -samples[i].s;
      fm = samples[i].f;
    } else if (samples[i].s > 0) {
      dp = samples[i].s;
      fp = samples[i].f;
    } else {
      f0 = samples[i].f;
    }
  }
  const double denom = dm * dp * (dm + dp);
  m.A = (dp * (fm - f0) + dm * (fp - f0)) / denom;
  m.B = (dm * dm * (fp - f0) - dp * dp * (fm - f0)) / denom;
  m.C = f0;
  return m;
}

/// Deterministic pick: smallest model value, ties resolved toward the
/// incumbent (smaller |s|), then toward negative s.
struct BestPick {
  bool have = false;
  double s = 0.0;
  double value = 0.0;

  void consider(double cand_s, double cand_value) {
    if (!std::isfinite(cand_value)) return;
    if (!have || cand_value < value ||
        (cand_value == value &&
         (std::abs(cand_s) < std::abs(s) ||
          (std::abs(cand_s) == std::abs(s) && cand_s < s)))) {
      have = true;
      s = cand_s;
      value = cand_value;
    }
  }
};

/// Minimum of the model over [a, b] (a <= b assumed), fed into pick.
void min_over_interval(const QuadModel& m, double a, double b, BestPick& pick) {
  pick.consider(a, m.eval(a));
  pick.consider(b, m.eval(b));
  if (a <= 0.0 && 0.0 <= b) pick.consider(0.0, m.C);
  if (m.A > 0.0) {
    double vertex = -m.B / (2.0 * m.A);
    vertex = std::clamp(vertex, a, b);
    pick.consider(vertex, m.eval(vertex));
  }
}

struct Interval {
  double a, b;
};

/// Subintervals of [lo, hi] where the g-model is non-positive (at most two).
int feasible_intervals(const QuadModel& g, double lo, double hi, Interval out[2]) {
  if (g.npts == 0) {  // no constraint information: treat as unconstrained
    out[0] = {lo, hi};
    return 1;
  }
  double A = g.A, B = g.B, C = g.C;
  const double span = std::max(std::abs(lo), std::abs(hi));
  // Degenerate curvature: fall back to the linear part when the quadratic
  // term cannot move the model by more than a relative epsilon over the span.
  if (std::abs(A) * span * span <= 1e-12 * (std::abs(B) * span + std::abs(C)) ||
      A == 0.0) {
    if (B == 0.0) {
      if (C <= 0.0) {
        out[0] = {lo, hi};
        return 1;
      }
      return 0;
    }
    double root = -C / B;
    if (B > 0.0) {
      if (root < lo) return 0;
      out[0] = {lo, std::min(hi, root)};
      return 1;
    }
    if (root > hi) return 0;
    out[0] = {std::max(lo, root), hi};
    return 1;
  }
  const double D = B * B - 4.0 * A * C;
  if (D <= 0.0) {
    if (A > 0.0) return 0;  // parabola opens up and never reaches zero
    out[0] = {lo, hi};      // opens down, everywhere below zero
    return 1;
  }
  const double sq = std::sqrt(D);
  // Numerically stable root pair.
  const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
  double r1 = q / A;
  double r2 = (q != 0.0) ? C / q : -B / A - r1;
  if (r1 > r2) std::swap(r1, r2);
  int n = 0;
  if (A > 0.0) {
    double a = std::max(lo, r1), b = std::min(hi, r2);
    if (a <= b) out[n++] = {a, b};
  } else {
    double b1 = std::min(hi, r1);
    if (lo <= b1) out[n++] = {lo, b1};
    double a2 = std::max(lo, r2);
    if (a2 <= hi) out[n++] = {a2, hi};
  }
  return n;
}

Eigen::VectorXd broadcast_alpha_min(const Eigen::VectorXd& given, Eigen::Index np) {
  if (given.size() == 0) {
    return Eigen::VectorXd::Constant(np, TrustRegionConfig::kDefaultAlphaMin);
  }
  if (given.size() == 1) return Eigen::VectorXd::Constant(np, given[0]);
  if (given.size() == np) return given;
  throw DimensionError("alpha_min has length " + std::to_string(given.size()) +
                       ", expected a scalar or a vector of length " +
                       std::to_string(np));
}

void check_betas(double beta_plus, double beta_minus) {
  if (!(beta_plus >= 1.0) || !std::isfinite(beta_plus)) {
    throw DimensionError("beta_plus must be finite and >= 1");
  }
  if (!(beta_minus > 0.0 && beta_minus < 1.0)) {
    throw DimensionError("beta_minus must lie in (0, 1)");
  }
}

}  // namespace

bool merit_better(const Evaluation& a, const Evaluation& b) {
  const bool af = a.finite(), bf = b.finite();
  if (!af) return false;
  if (!bf) return true;
  const bool a_feas = a.g <= 0.0, b_feas = b.g <= 0.0;
  if (a_feas != b_feas) return a_feas;
  if (!a_feas) return a.g < b.g;
  return a.J < b.J;
}

TrustRegionConfig update_trust_region_parameters(TrustRegionConfig cfg,
                                                 double beta_plus, double beta_minus) {
  check_betas(beta_plus, beta_minus);
  cfg.beta_plus = beta_plus;
  cfg.beta_minus = beta_minus;
  return cfg;
}

TrustRegionConfig update_trust_region_parameters(TrustRegionConfig cfg,
                                                 double beta_plus, double beta_minus,
                                                 double alpha_min) {
  check_betas(beta_plus, beta_minus);
  if (!(alpha_min > 0.0) || !std::isfinite(alpha_min)) {
    throw DimensionError("alpha_min must be finite and > 0");
  }
  cfg.beta_plus = beta_plus;
  cfg.beta_minus = beta_minus;
  cfg.alpha_min = Eigen::VectorXd::Constant(1, alpha_min);
  return cfg;
}

TrustRegionConfig update_trust_region_parameters(TrustRegionConfig cfg,
                                                 double beta_plus, double beta_minus,
                                                 const Eigen::VectorXd& alpha_min,
                                                 int np) {
  check_betas(beta_plus, beta_minus);
  Eigen::VectorXd full = broadcast_alpha_min(alpha_min, np);
  if (!(full.array() > 0.0).all() || !full.allFinite()) {
    throw DimensionError("alpha_min entries must be finite and > 0");
  }
  cfg.beta_plus = beta_plus;
  cfg.beta_minus = beta_minus;
  cfg.alpha_min = full;
  return cfg;
}

SolverState solve(const EvalFn& eval, const Eigen::VectorXd& p_init,
                  const Eigen::VectorXd& pmin, const Eigen::VectorXd& pmax,
                  int max_evals, const TrustRegionConfig& cfg,
                  const std::vector<int>& subset,
                  std::vector<TraceEntry>* trace) {
  const Eigen::Index np = p_init.size();
  if (np == 0) throw DimensionError("solve: empty decision vector");
  if (pmin.size() != np || pmax.size() != np) {
    throw DimensionError("solve: pmin/pmax must have the same length as p_init");
  }
  if (!pmin.allFinite() || !pmax.allFinite()) {
    throw DimensionError("solve: bounds must be finite (the box is always hard)");
  }
  for (Eigen::Index i = 0; i < np; ++i) {
    if (!(pmin[i] <= pmax[i])) throw DimensionError("solve: pmin must not exceed pmax");
    if (!(pmin[i] <= p_init[i] && p_init[i] <= pmax[i])) {
      throw DimensionError("solve: p_init must satisfy the box");
    }
  }
  if (max_evals < 1) throw DimensionError("solve: max_evals must be >= 1");
  check_betas(cfg.beta_plus, cfg.beta_minus);
  if (!(cfg.alpha0_fraction > 0.0)) {
    throw DimensionError("solve: alpha0_fraction must be > 0");
  }

  std::vector<Eigen::Index> comps;
  if (subset.empty()) {
    comps.resize(np);
    for (Eigen::Index i = 0; i < np; ++i) comps[i] = i;
  } else {
    for (int c : subset) {
      if (c < 1 || c > np) {
        throw DimensionError("solve: subset components are numbered 1.." +
                             std::to_string(np) + ", observed " + std::to_string(c));
      }
      comps.push_back(c - 1);
    }
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
  }

  const Eigen::VectorXd alpha_min = broadcast_alpha_min(cfg.alpha_min, np);

  SolverState state;
  state.alpha = cfg.alpha0_fraction * (pmax - pmin);

  auto evaluate = [&](const Eigen::VectorXd& p) -> Evaluation {
    auto [J, g] = eval(p);
    ++state.n_eval;
    if (trace) trace->push_back({state.n_eval, p, J, g, false});
    return Evaluation{p, J, g};
  };
  auto can_eval = [&]() { return state.n_eval < max_evals; };

  Evaluation best = evaluate(p_init);
  if (trace) trace->back().accepted = true;
  state.history.push_back({state.n_eval, best.J, best.g});
  auto improve = [&](const Evaluation& e) {
    if (merit_better(e, best)) {
      best = e;
      if (trace) trace->back().accepted = true;
      state.history.push_back({state.n_eval, best.J, best.g});
      return true;
    }
    return false;
  };

  struct SideSample {
    bool have = false;
    double d = 0.0;  // signed offset from the round center
    double J = kNaN;
    double g = kNaN;
  };
  std::vector<SideSample> minus(np), plus(np);

  bool out_of_budget = false;
  while (!out_of_budget) {
    bool any_active = false;
    for (Eigen::Index i : comps) {
      if (state.alpha[i] >= alpha_min[i]) {
        any_active = true;
        break;
      }
    }
    if (!any_active) break;

    const Evaluation center = best;

    // Stencil probes along every optimized component.
    for (Eigen::Index i : comps) {
      minus[i] = SideSample{};
      plus[i] = SideSample{};
      for (int sign : {-1, +1}) {
        double target = std::clamp(center.p[i] + sign * state.alpha[i], pmin[i], pmax[i]);
        double d = target - center.p[i];
        if (d == 0.0) continue;  // clipped onto the incumbent: skip duplicate
        if (!can_eval()) {
          out_of_budget = true;
          break;
        }
        Eigen::VectorXd cand = center.p;
        cand[i] = target;
        Evaluation e = evaluate(cand);
        improve(e);
        SideSample& slot = (sign < 0) ? minus[i] : plus[i];
        slot = {true, d, e.J, e.g};
      }
      if (out_of_budget) break;
    }
    if (out_of_budget) break;

    // Composite candidate from the per-component model minimizers.
    const bool center_feasible = center.finite() && center.g <= 0.0;
    Eigen::VectorXd comp = center.p;
    for (Eigen::Index i : comps) {
      const double slo = std::max(pmin[i], center.p[i] - state.alpha[i]) - center.p[i];
      const double shi = std::min(pmax[i], center.p[i] + state.alpha[i]) - center.p[i];

      Sample js[3], gs[3];
      int jn = 0, gn = 0;
      auto push = [](Sample* arr, int& n, double s, double f) {
        if (std::isfinite(f)) arr[n++] = {s, f};
      };
      if (minus[i].have) {
        push(js, jn, minus[i].d, minus[i].J);
        push(gs, gn, minus[i].d, minus[i].g);
      }
      if (center.finite()) {
        push(js, jn, 0.0, center.J);
        push(gs, gn, 0.0, center.g);
      }
      if (plus[i].have) {
        push(js, jn, plus[i].d, plus[i].J);
        push(gs, gn, plus[i].d, plus[i].g);
      }
      const QuadModel mj = fit_model(js, jn);
      const QuadModel mg = fit_model(gs, gn);

      double s = 0.0;
      if (!center_feasible) {
        // Drive the constraint model down.
        BestPick pick;
        min_over_interval(mg, slo, shi, pick);
        s = pick.have ? pick.s : 0.0;
      } else {
        // Minimize the cost model where the constraint model stays feasible;
        // keep the coordinate when no such point exists.
        Interval segs[2];
        const int nseg = feasible_intervals(mg, slo, shi, segs);
        BestPick pick;
        for (int k = 0; k < nseg; ++k) {
          min_over_interval(mj, segs[k].a, segs[k].b, pick);
        }
        s = pick.have ? pick.s : 0.0;
      }
      comp[i] = std::clamp(center.p[i] + s, pmin[i], pmax[i]);
    }

    bool success = false;
    const bool moved = !(comp.array() == center.p.array()).all();
    if (moved) {
      if (!can_eval()) break;
      Evaluation e = evaluate(comp);
      improve(e);
      success = merit_better(e, center);
    }

    for (Eigen::Index i : comps) {
      if (success) {
        state.alpha[i] = std::min(cfg.beta_plus * state.alpha[i], pmax[i] - pmin[i]);
      } else {
        state.alpha[i] *= cfg.beta_minus;
      }
    }
  }

  state.p_best = best.p;
  state.J_best = best.J;
  state.g_best = best.g;
  return state;
}

double estimate_eval_time(const EvalFn& eval, const Eigen::VectorXd& p, int K) {
  if (K < 1) throw DimensionError("estimate_eval_time: K must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < K; ++k) {
    volatile double sink = eval(p).first;
    (void)sink;
  }
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / K;
}

}  // namespace dfmpc

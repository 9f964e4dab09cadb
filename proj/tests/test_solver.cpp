#include <doctest.h>

#include <cmath>
#include <random>

#include "dfmpc/errors.hpp"
#include "dfmpc/solver.hpp"
#include "oracles.hpp"

using dfmpc::Evaluation;
using dfmpc::merit_better;
using dfmpc::SolverState;
using dfmpc::TrustRegionConfig;

namespace {

Evaluation ev(double J, double g) {
  Evaluation e;
  e.J = J;
  e.g = g;
  return e;
}

// Wrap an objective with instrumentation: counts calls and checks that every
// probed point respects the box and the frozen components.
struct Instrumented {
  dfmpc::EvalFn inner;
  Eigen::VectorXd pmin, pmax, p_init;
  std::vector<int> subset;  // 1-based; empty = all free
  mutable int calls = 0;
  mutable bool box_ok = true;
  mutable bool frozen_ok = true;

  std::pair<double, double> operator()(const Eigen::VectorXd& p) const {
    ++calls;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p[i] < pmin[i] || p[i] > pmax[i]) box_ok = false;
    }
    if (!subset.empty()) {
      std::vector<bool> free_comp(static_cast<size_t>(p.size()), false);
      for (int c : subset) free_comp[static_cast<size_t>(c - 1)] = true;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!free_comp[static_cast<size_t>(i)] && p[i] != p_init[i]) {
          frozen_ok = false;
        }
      }
    }
    return inner(p);
  }
};

}  // namespace

TEST_CASE("merit order: feasibility first, then violation, then cost") {
  // A feasible point beats an infeasible one regardless of cost.
  CHECK(merit_better(ev(5, -1), ev(0, 0.1)));
  CHECK_FALSE(merit_better(ev(0, 0.1), ev(5, -1)));
  // Between infeasible points the smaller violation wins.
  CHECK(merit_better(ev(0, 0.2), ev(-9, 0.3)));
  // Between feasible points the smaller cost wins.
  CHECK(merit_better(ev(1, -0.5), ev(2, -3)));
  // Ties keep the incumbent.
  CHECK_FALSE(merit_better(ev(5, -1), ev(5, -2)));
  CHECK_FALSE(merit_better(ev(1, 0.3), ev(1, 0.3)));
  // Non-finite never wins, and losing to it is impossible only for non-finite.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(merit_better(ev(nan, -1), ev(1e300, 1e300)));
  CHECK(merit_better(ev(1e300, 1e300), ev(nan, -1)));
  CHECK_FALSE(merit_better(ev(nan, nan), ev(nan, -1)));
}

TEST_CASE("trust-region parameter updates are validated") {
  TrustRegionConfig cfg;
  cfg = dfmpc::update_trust_region_parameters(cfg, 2.0, 0.5);
  CHECK(cfg.beta_plus == 2.0);
  CHECK(cfg.beta_minus == 0.5);

  cfg = dfmpc::update_trust_region_parameters(cfg, 3.0, 0.25, 1e-6);
  REQUIRE(cfg.alpha_min.size() == 1);
  CHECK(cfg.alpha_min[0] == 1e-6);

  const Eigen::VectorXd per = (Eigen::VectorXd(3) << 1e-6, 1e-7, 1e-8).finished();
  cfg = dfmpc::update_trust_region_parameters(cfg, 2.0, 0.5, per, 3);
  CHECK(cfg.alpha_min == per);

  // Wrong-length vectors and out-of-range factors are errors.
  CHECK_THROWS_AS((void)dfmpc::update_trust_region_parameters(
                      cfg, 2.0, 0.5, Eigen::VectorXd::Ones(4), 3),
                  dfmpc::DimensionError);
  CHECK_THROWS_AS((void)dfmpc::update_trust_region_parameters(cfg, 0.5, 0.5),
                  dfmpc::DimensionError);
  CHECK_THROWS_AS((void)dfmpc::update_trust_region_parameters(cfg, 2.0, 1.5),
                  dfmpc::DimensionError);
  CHECK_THROWS_AS((void)dfmpc::update_trust_region_parameters(cfg, 2.0, 0.5, -1.0),
                  dfmpc::DimensionError);
}

TEST_CASE("constant objective keeps the starting point") {
  const dfmpc::EvalFn flat = [](const Eigen::VectorXd&) {
    return std::make_pair(0.0, -1.0);
  };
  const Eigen::VectorXd p0 = Eigen::VectorXd::Constant(2, 0.25);
  const SolverState s =
      dfmpc::solve(flat, p0, -Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2), 100);
  CHECK(s.p_best == p0);
  CHECK(s.J_best == 0.0);
}

TEST_CASE("1-D quadratic reaches the analytic minimum") {
  Instrumented f;
  f.inner = [](const Eigen::VectorXd& p) {
    return std::make_pair((p[0] - 3.0) * (p[0] - 3.0), -1.0);
  };
  f.pmin = Eigen::VectorXd::Constant(1, -10.0);
  f.pmax = Eigen::VectorXd::Constant(1, 10.0);
  f.p_init = Eigen::VectorXd::Zero(1);
  const SolverState s = dfmpc::solve(std::ref(f), f.p_init, f.pmin, f.pmax, 200);
  CHECK(std::abs(s.p_best[0] - 3.0) <= 1e-4);
  CHECK(f.calls <= 200);
  CHECK(s.n_eval == f.calls);
  CHECK(f.box_ok);

  // Exhaustive grid confirms the analytic optimum this run must match.
  const double grid = oracles::grid_min_1d(
      [](double p) { return (p - 3.0) * (p - 3.0); }, [](double) { return -1.0; },
      -10.0, 10.0, 1e-5);
  CHECK(std::abs(grid - 3.0) <= 1e-5);
}

TEST_CASE("active inequality constraint is tracked to its boundary") {
  Instrumented f;
  f.inner = [](const Eigen::VectorXd& p) {
    return std::make_pair(p[0], 1.0 - p[0]);  // min p  s.t.  p >= 1
  };
  f.pmin = Eigen::VectorXd::Constant(1, -10.0);
  f.pmax = Eigen::VectorXd::Constant(1, 10.0);
  f.p_init = Eigen::VectorXd::Constant(1, 5.0);
  const SolverState s = dfmpc::solve(std::ref(f), f.p_init, f.pmin, f.pmax, 300);
  CHECK(std::abs(s.p_best[0] - 1.0) <= 1e-3);
  CHECK(s.g_best <= 0.0);
  CHECK(f.calls <= 300);
  CHECK(f.box_ok);
}

TEST_CASE("5-D sphere from a fixed off-center start") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  Eigen::VectorXd p0(5);
  for (int i = 0; i < 5; ++i) p0[i] = unif(rng);

  Instrumented f;
  f.inner = [](const Eigen::VectorXd& p) {
    return std::make_pair(p.squaredNorm(), -1.0);
  };
  f.pmin = Eigen::VectorXd::Constant(5, -5.0);
  f.pmax = Eigen::VectorXd::Constant(5, 5.0);
  f.p_init = p0;
  const SolverState s = dfmpc::solve(std::ref(f), p0, f.pmin, f.pmax, 1000);
  CHECK(s.p_best.norm() <= 1e-3);
  CHECK(f.calls <= 1000);
  CHECK(f.box_ok);
  // Radii contract near the optimum.
  CHECK((s.alpha.array() < 0.1 * 10.0).all());
}

TEST_CASE("budget is respected exactly and the incumbent is the best evaluated") {
  Instrumented f;
  f.inner = [](const Eigen::VectorXd& p) {
    return std::make_pair(std::cos(3 * p[0]) + p.squaredNorm(), -1.0);
  };
  f.pmin = Eigen::VectorXd::Constant(2, -4.0);
  f.pmax = Eigen::VectorXd::Constant(2, 4.0);
  f.p_init = (Eigen::VectorXd(2) << 3.0, -2.0).finished();

  for (int budget : {1, 2, 7, 23, 60}) {
    f.calls = 0;
    std::vector<dfmpc::TraceEntry> trace;
    const SolverState s =
        dfmpc::solve(std::ref(f), f.p_init, f.pmin, f.pmax, budget, {}, {}, &trace);
    CHECK(f.calls <= budget);
    CHECK(s.n_eval == f.calls);
    CHECK(static_cast<int>(trace.size()) == s.n_eval);

    // Returned state must be the merit-best point over the whole trace.
    Evaluation best;
    best.p = f.p_init;
    for (const auto& t : trace) {
      Evaluation e;
      e.p = t.p;
      e.J = t.J;
      e.g = t.g;
      if (!best.p.size() || merit_better(e, best)) best = e;
    }
    CHECK(s.J_best == best.J);
    CHECK(s.p_best == best.p);
  }
}

TEST_CASE("frozen components never move") {
  Instrumented f;
  f.inner = [](const Eigen::VectorXd& p) {
    return std::make_pair((p - Eigen::VectorXd::Constant(p.size(), 2.0)).squaredNorm(),
                          -1.0);
  };
  f.pmin = Eigen::VectorXd::Constant(4, -5.0);
  f.pmax = Eigen::VectorXd::Constant(4, 5.0);
  f.p_init = (Eigen::VectorXd(4) << 0.5, -1.0, 0.25, 4.5).finished();
  f.subset = {1, 3};
  const SolverState s =
      dfmpc::solve(std::ref(f), f.p_init, f.pmin, f.pmax, 400, {}, f.subset);
  CHECK(f.frozen_ok);
  CHECK(s.p_best[1] == f.p_init[1]);
  CHECK(s.p_best[3] == f.p_init[3]);
  CHECK(std::abs(s.p_best[0] - 2.0) <= 1e-3);
  CHECK(std::abs(s.p_best[2] - 2.0) <= 1e-3);
}

TEST_CASE("subset indices outside the decision space are rejected") {
  const dfmpc::EvalFn flat = [](const Eigen::VectorXd&) {
    return std::make_pair(0.0, -1.0);
  };
  const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS((void)dfmpc::solve(flat, p0, -Eigen::VectorXd::Ones(2),
                                     Eigen::VectorXd::Ones(2), 10, {}, {3}),
                  dfmpc::DimensionError);
  CHECK_THROWS_AS((void)dfmpc::solve(flat, p0, -Eigen::VectorXd::Ones(2),
                                     Eigen::VectorXd::Ones(2), 10, {}, {0}),
                  dfmpc::DimensionError);
}

TEST_CASE("non-finite evaluations are survivable") {
  // The objective blows up left of the origin; the solver must keep working
  // and return a finite point.
  Instrumented f;
  f.inner = [](const Eigen::VectorXd& p) {
    if (p[0] < 0) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return std::make_pair(nan, nan);
    }
    return std::make_pair((p[0] - 0.5) * (p[0] - 0.5), -1.0);
  };
  f.pmin = Eigen::VectorXd::Constant(1, -10.0);
  f.pmax = Eigen::VectorXd::Constant(1, 10.0);
  f.p_init = Eigen::VectorXd::Constant(1, 4.0);
  const SolverState s = dfmpc::solve(std::ref(f), f.p_init, f.pmin, f.pmax, 300);
  CHECK(std::isfinite(s.J_best));
  CHECK(std::abs(s.p_best[0] - 0.5) <= 1e-3);
}

TEST_CASE("infeasible-everywhere problems return the least-violating point") {
  const dfmpc::EvalFn f = [](const Eigen::VectorXd& p) {
    return std::make_pair(0.0, 1.0 + p[0] * p[0]);  // g >= 1 everywhere
  };
  const SolverState s = dfmpc::solve(f, Eigen::VectorXd::Constant(1, 2.0),
                                     Eigen::VectorXd::Constant(1, -3.0),
                                     Eigen::VectorXd::Constant(1, 3.0), 200);
  CHECK(s.g_best > 0.0);
  CHECK(std::abs(s.p_best[0]) <= 1e-2);  // violation is minimized at 0
}

TEST_CASE("the search is deterministic") {
  const dfmpc::EvalFn f = [](const Eigen::VectorXd& p) {
    return std::make_pair(std::sin(p[0]) + 0.1 * p.squaredNorm(), p[1] - 2.0);
  };
  const Eigen::VectorXd p0 = (Eigen::VectorXd(2) << 1.0, 1.0).finished();
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -4.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 4.0);
  std::vector<dfmpc::TraceEntry> t1, t2;
  const SolverState a = dfmpc::solve(f, p0, lo, hi, 150, {}, {}, &t1);
  const SolverState b = dfmpc::solve(f, p0, lo, hi, 150, {}, {}, &t2);
  CHECK(a.p_best == b.p_best);
  CHECK(a.n_eval == b.n_eval);
  REQUIRE(t1.size() == t2.size());
  for (size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i].p == t2[i].p);
    CHECK(t1[i].J == t2[i].J);
  }
}

TEST_CASE("radius collapse terminates the search before the budget") {
  int calls = 0;
  const dfmpc::EvalFn f = [&calls](const Eigen::VectorXd& p) {
    ++calls;
    return std::make_pair(p.squaredNorm(), -1.0);
  };
  TrustRegionConfig cfg;
  cfg = dfmpc::update_trust_region_parameters(cfg, 2.0, 0.5, 1e-2);
  const SolverState s =
      dfmpc::solve(f, Eigen::VectorXd::Constant(1, 0.5),
                   Eigen::VectorXd::Constant(1, -1.0),
                   Eigen::VectorXd::Constant(1, 1.0), 100000, cfg);
  CHECK(s.n_eval < 100000);
  CHECK((s.alpha.array() < 1e-2).all());
}

TEST_CASE("history records strictly improving incumbents") {
  const dfmpc::EvalFn f = [](const Eigen::VectorXd& p) {
    return std::make_pair((p[0] - 3.0) * (p[0] - 3.0), -1.0);
  };
  const SolverState s = dfmpc::solve(f, Eigen::VectorXd::Zero(1),
                                     Eigen::VectorXd::Constant(1, -10.0),
                                     Eigen::VectorXd::Constant(1, 10.0), 200);
  REQUIRE(s.history.size() >= 2);
  for (size_t i = 1; i < s.history.size(); ++i) {
    Evaluation prev = ev(s.history[i - 1].J_best, s.history[i - 1].g_best);
    Evaluation cur = ev(s.history[i].J_best, s.history[i].g_best);
    CHECK(merit_better(cur, prev));
    CHECK(s.history[i].n_eval > s.history[i - 1].n_eval);
  }
}

TEST_CASE("evaluation-time estimate is positive and finite") {
  const dfmpc::EvalFn f = [](const Eigen::VectorXd& p) {
    return std::make_pair(p.squaredNorm(), -1.0);
  };
  const double t = dfmpc::estimate_eval_time(f, Eigen::VectorXd::Zero(3), 50);
  CHECK(t >= 0.0);
  CHECK(std::isfinite(t));
}

// Command-line front end: run the bundled closed-loop studies (or a JSON
// config), probe evaluation cost, or roll out a decision vector open loop.
// Every run emits diffable CSV logs plus a meta.json echoing the resolved
// parameters; wall-clock values never leak into the CSVs.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dfmpc/engine.hpp"
#include "dfmpc/errors.hpp"
#include "dfmpc/scenario.hpp"
#include "dfmpc/serialize.hpp"
#include "dfmpc/sim.hpp"
#include "dfmpc/validate.hpp"

namespace {

using dfmpc::Json;
using dfmpc::Value;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitDiverged = 3;

struct OverrideError : dfmpc::Error {
  using Error::Error;
};

// Dot-path override into one of the three parameter records of a definition.
// Decision-space dimensions are immutable: rejecting them here mirrors the
// live-engine guard, with the same message.
void apply_override(dfmpc::ProblemDefinition& def, const std::string& path,
                    const Value& v) {
  const auto dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    throw OverrideError("override path '" + path +
                        "' must have the form record.field (records: ode, uparam, ocp)");
  }
  const std::string record = path.substr(0, dot);
  const std::string field = path.substr(dot + 1);
  if (record == "ode") {
    dfmpc::set_ode_field(def.ode, field, v);
  } else if (record == "uparam") {
    if (field == "Np" || field == "np" || field == "nu") {
      throw OverrideError("field 'uparam." + field +
                          "' cannot be changed (decision-space dimensions are fixed)");
    }
    dfmpc::set_uparam_field(def.uparam, field, v);
  } else if (record == "ocp") {
    def.ocp_params.extra.set(field, v);
  } else {
    throw OverrideError("unknown record '" + record +
                        "' in override path '" + path + "' (records: ode, uparam, ocp)");
  }
}

Value value_from_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, true);
  return dfmpc::value_from_json(j);
}

// All inputs a run can take, from flags and/or a config file (flags win).
struct RunSpec {
  std::string example;
  std::optional<double> tsim;
  std::optional<int> nev;
  std::optional<int> rk_order;
  std::vector<int> subset;
  std::optional<double> beta_plus, beta_minus;
  std::optional<Eigen::VectorXd> alpha_min;
  std::vector<std::pair<std::string, Value>> overrides;
};

void merge_config(RunSpec& spec, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw dfmpc::Error("cannot open config file '" + config_path + "'");
  Json cfg = Json::parse(in);
  if (!cfg.is_object()) throw dfmpc::Error("config root must be a JSON object");

  for (const auto& [key, val] : cfg.items()) {
    if (key == "example") {
      if (spec.example.empty()) spec.example = val.get<std::string>();
    } else if (key == "tsim") {
      if (!spec.tsim) spec.tsim = val.get<double>();
    } else if (key == "nev") {
      if (!spec.nev) spec.nev = val.get<int>();
    } else if (key == "rk_order") {
      if (!spec.rk_order) spec.rk_order = val.get<int>();
    } else if (key == "subset") {
      if (spec.subset.empty()) spec.subset = val.get<std::vector<int>>();
    } else if (key == "trust") {
      if (!val.is_object()) throw dfmpc::Error("config 'trust' must be an object");
      for (const auto& [tk, tv] : val.items()) {
        if (tk == "beta_plus") {
          if (!spec.beta_plus) spec.beta_plus = tv.get<double>();
        } else if (tk == "beta_minus") {
          if (!spec.beta_minus) spec.beta_minus = tv.get<double>();
        } else if (tk == "alpha_min") {
          if (!spec.alpha_min) {
            spec.alpha_min = dfmpc::value_from_json(tv).vector();
          }
        } else {
          throw dfmpc::Error("unknown config key 'trust." + tk + "'");
        }
      }
    } else if (key == "overrides") {
      if (!val.is_object()) throw dfmpc::Error("config 'overrides' must be an object");
      for (const auto& [ok, ov] : val.items()) {
        spec.overrides.emplace_back(ok, dfmpc::value_from_json(ov));
      }
    } else {
      throw dfmpc::Error("unknown config key '" + key + "'");
    }
  }
  if (spec.example.empty()) {
    throw dfmpc::Error("config must name an 'example'");
  }
}

// Build the scenario a spec describes and apply its overrides.
dfmpc::Scenario resolve_scenario(const RunSpec& spec) {
  dfmpc::Scenario sc = dfmpc::make_scenario(spec.example);
  if (spec.tsim) sc.tsim = *spec.tsim;
  if (spec.nev) sc.nev = *spec.nev;
  if (spec.rk_order) sc.engine_rk_order = *spec.rk_order;
  if (spec.beta_plus || spec.beta_minus) {
    sc.trust = dfmpc::update_trust_region_parameters(
        sc.trust, spec.beta_plus.value_or(sc.trust.beta_plus),
        spec.beta_minus.value_or(sc.trust.beta_minus));
  }
  if (spec.alpha_min) {
    sc.trust = dfmpc::update_trust_region_parameters(
        sc.trust, sc.trust.beta_plus, sc.trust.beta_minus, *spec.alpha_min,
        sc.def.uparam.np);
  }
  for (const auto& [path, v] : spec.overrides) apply_override(sc.def, path, v);
  dfmpc::require_valid(sc.def);
  return sc;
}

Json trust_to_json(const dfmpc::TrustRegionConfig& t, int np) {
  Json j = Json::object();
  j["beta_plus"] = t.beta_plus;
  j["beta_minus"] = t.beta_minus;
  const Eigen::VectorXd amin =
      t.alpha_min.size() > 0
          ? t.alpha_min
          : Eigen::VectorXd::Constant(np,
                                      dfmpc::TrustRegionConfig::kDefaultAlphaMin);
  j["alpha_min"] = dfmpc::value_to_json(Value(amin));
  j["alpha0_fraction"] = t.alpha0_fraction;
  return j;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw dfmpc::Error("cannot write '" + p.string() + "'");
  out << content;
}

std::string plot_script(const dfmpc::ClosedLoopLog& log) {
  std::ostringstream gp;
  const Eigen::Index nx = log.xx.cols();
  const Eigen::Index nu = log.uu.cols();
  gp << "# gnuplot script; run from the output directory:  gnuplot plot.gp\n"
     << "set datafile separator ','\n"
     << "set key outside\n"
     << "set terminal pngcairo size 1200,800\n"
     << "set output 'closedloop.png'\n"
     << "set multiplot layout 2,1\n"
     << "set xlabel 't'\n"
     << "set title 'states'\n"
     << "plot";
  for (Eigen::Index j = 0; j < nx; ++j) {
    gp << (j ? "," : "") << " 'closedloop.csv' using 1:" << (2 + j)
       << " with lines title 'x" << (j + 1) << "'";
  }
  gp << "\nset title 'controls'\nplot";
  for (Eigen::Index j = 0; j < nu; ++j) {
    gp << (j ? "," : "") << " 'closedloop.csv' using 1:" << (2 + nx + j)
       << " with steps title 'u" << (j + 1) << "'";
  }
  for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(log.scheduled_names.size());
       ++s) {
    gp << ", 'closedloop.csv' using 1:" << (2 + nx + nu + s)
       << " with lines dashtype 2 title '" << log.scheduled_names[s] << "'";
  }
  gp << "\nunset multiplot\n";
  return gp.str();
}

int cmd_run(const RunSpec& spec, const std::string& out_dir, bool want_trace,
            bool seed_given) {
  if (seed_given) {
    std::cerr << "warning: --seed ignored (the toolkit is deterministic)\n";
  }
  const auto t_run0 = std::chrono::steady_clock::now();
  dfmpc::Scenario sc = resolve_scenario(spec);
  dfmpc::Engine engine = dfmpc::make_engine(sc);

  std::vector<dfmpc::TraceEntry> trace;
  dfmpc::RunOptions opts;
  opts.subset = spec.subset;
  opts.scheduler = sc.scheduler;
  opts.log_fields = sc.log_fields;
  if (want_trace) opts.last_step_trace = &trace;

  dfmpc::ClosedLoopLog log =
      dfmpc::run_closed_loop(sc.def, engine, sc.def.ode, sc.tsim, opts);
  const double total_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_run0)
          .count();

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  {
    std::ostringstream csv;
    dfmpc::write_closed_loop_csv(csv, log);
    write_file(dir / "closedloop.csv", csv.str());
  }
  {
    std::ostringstream csv;
    dfmpc::write_timing_csv(csv, log);
    write_file(dir / "timing.csv", csv.str());
  }
  if (want_trace) {
    std::ostringstream csv;
    dfmpc::write_trace_csv(csv, trace);
    write_file(dir / "trace.csv", csv.str());
  }
  write_file(dir / "plot.gp", plot_script(log));

  // meta.json: the one artifact allowed to carry wall-clock information.
  Json meta = Json::object();
  meta["example"] = sc.name;
  meta["tsim"] = sc.tsim;
  meta["nev"] = engine.nev();
  meta["subset"] = spec.subset;
  meta["engine_rk_order"] = engine.ode().rk_order;
  meta["plant_rk_order"] = sc.def.ode.rk_order;
  meta["trust"] = trust_to_json(engine.trust, sc.def.uparam.np);
  meta["plant_ode"] = dfmpc::ode_to_json(sc.def.ode);
  meta["engine_ode"] = dfmpc::ode_to_json(engine.ode());
  meta["uparam"] = dfmpc::uparam_to_json(engine.uparam());
  meta["ocp"] = dfmpc::ocp_to_json(engine.ocp());
  meta["ntsim"] = log.ntsim();
  meta["rows_valid"] = log.rows_valid;
  meta["diverged"] = log.diverged;
  meta["teval_seconds"] = engine.teval();
  const int nupd = std::max(1, log.rows_valid - 1);
  meta["t_exec_mean_seconds"] = log.tt_exec.head(nupd).mean();
  meta["t_exec_max_seconds"] = log.tt_exec.head(nupd).maxCoeff();
  meta["total_runtime_seconds"] = total_s;
  meta["generated_at"] = timestamp_utc();
  write_file(dir / "meta.json", meta.dump(2) + "\n");

  if (log.diverged) {
    std::cerr << "simulation diverged at t = " << dfmpc::format_double(
                     log.tt[log.rows_valid - 1])
              << "; partial log written to " << dir.string() << '\n';
    return kExitDiverged;
  }
  std::cout << "wrote " << (dir / "closedloop.csv").string() << " ("
            << log.rows_valid << " rows)\n";
  return kExitOk;
}

int cmd_teval(const std::string& example, std::optional<double> period) {
  dfmpc::Scenario sc = dfmpc::make_scenario(example);
  dfmpc::Engine engine = dfmpc::make_engine(sc);
  const double teval = engine.teval();
  std::cout << "teval = " << dfmpc::format_double(teval) << " s/evaluation\n";
  if (period) {
    if (!(*period > 0)) throw dfmpc::Error("--period must be > 0");
    const auto nev = static_cast<long long>(std::floor(*period / teval));
    std::cout << "suggested Nev for a " << dfmpc::format_double(*period)
              << " s control period: " << nev << '\n';
  }
  return kExitOk;
}

int cmd_openloop(const RunSpec& spec, const std::vector<double>& p_flag,
                 const std::string& out_dir) {
  dfmpc::Scenario sc = resolve_scenario(spec);
  Eigen::VectorXd p = sc.def.uparam.p;
  if (!p_flag.empty()) {
    p = Eigen::Map<const Eigen::VectorXd>(p_flag.data(),
                                          static_cast<Eigen::Index>(p_flag.size()));
  }
  dfmpc::OpenLoopResult ol = dfmpc::simulate_ol(p, sc.def.ode, sc.def.uparam, sc.def);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  std::ostringstream csv;
  dfmpc::write_open_loop_csv(csv, ol);
  write_file(dir / "openloop.csv", csv.str());
  std::cout << "wrote " << (dir / "openloop.csv").string() << " ("
            << ol.traj.xx.rows() << " rows)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative-free parametrized NMPC toolkit"};
  app.require_subcommand(1);

  std::string example, config_path, out_dir = ".";
  double tsim = 0, nev_period = 0, beta_plus = 0, beta_minus = 0;
  int nev = 0, rk_order = 0, seed = 0;
  std::vector<int> subset;
  std::vector<std::string> override_flags;
  std::vector<double> p_flag;
  bool want_trace = false;

  auto add_scenario_flags = [&](CLI::App* cmd, bool with_config) {
    auto* ex = cmd->add_option("--example", example, "Registered example name");
    if (with_config) {
      auto* cf = cmd->add_option("--config", config_path, "JSON scenario config");
      ex->excludes(cf);
    } else {
      ex->required();
    }
  };

  CLI::App* run = app.add_subcommand("run", "Closed-loop simulation of a scenario");
  add_scenario_flags(run, true);
  auto* run_tsim = run->add_option("--tsim", tsim, "Simulation duration");
  auto* run_nev = run->add_option("--nev", nev, "Evaluation budget per update");
  auto* run_rk =
      run->add_option("--rk-order", rk_order, "Engine-side integration order")
          ->check(CLI::IsMember({1, 2, 4}));
  run->add_option("--subset", subset,
                  "Decision components to optimize (1-based)")
      ->delimiter(',');
  auto* run_seed = run->add_option("--seed", seed, "Ignored (deterministic system)");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--override", override_flags,
                  "record.field=json-value (repeatable)");
  run->add_flag("--trace", want_trace, "Write the last update's solver trace");

  CLI::App* teval = app.add_subcommand("teval", "Measure seconds per evaluation");
  add_scenario_flags(teval, false);
  auto* teval_period = teval->add_option(
      "--period", nev_period, "Control period to size the budget for");

  CLI::App* openloop =
      app.add_subcommand("openloop", "Open-loop rollout of a decision vector");
  add_scenario_flags(openloop, true);
  openloop->add_option("--p", p_flag, "Decision vector (comma separated)")
      ->delimiter(',');
  openloop->add_option("--out", out_dir, "Output directory")->capture_default_str();
  openloop->add_option("--override", override_flags,
                       "record.field=json-value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    RunSpec spec;
    spec.example = example;
    if ((run->parsed() || openloop->parsed()) && example.empty() &&
        config_path.empty()) {
      std::cerr << "error: either --example or --config is required\n";
      return kExitUsage;
    }
    if (run->parsed()) {
      if (*run_tsim) spec.tsim = tsim;
      if (*run_nev) spec.nev = nev;
      if (*run_rk) spec.rk_order = rk_order;
      spec.subset = subset;
    }
    for (const std::string& ov : override_flags) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --override expects record.field=value, got '" << ov
                  << "'\n";
        return kExitUsage;
      }
      try {
        spec.overrides.emplace_back(ov.substr(0, eq),
                                    value_from_text(ov.substr(eq + 1)));
      } catch (const Json::parse_error&) {
        std::cerr << "error: override value '" << ov.substr(eq + 1)
                  << "' is not valid JSON\n";
        return kExitUsage;
      }
    }
    if (!config_path.empty()) merge_config(spec, config_path);

    if (run->parsed()) {
      return cmd_run(spec, out_dir, want_trace, run_seed->count() > 0);
    }
    if (teval->parsed()) {
      std::optional<double> period;
      if (*teval_period) period = nev_period;
      return cmd_teval(example, period);
    }
    if (openloop->parsed()) {
      return cmd_openloop(spec, p_flag, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

// catlab: population-game QRE toolkit. Subcommands compute Nash/QRE
// structure, critical temperatures, bifurcation sweeps, ODE / Q-learning
// trajectories, catastrophe schedules and robustness bounds, writing one
// deterministic CSV or JSON artifact per run.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catlab/dynamics.hpp"
#include "catlab/errors.hpp"
#include "catlab/game.hpp"
#include "catlab/mechanism.hpp"
#include "catlab/qre.hpp"
#include "catlab/version.hpp"
#include "table_io.hpp"

namespace {

using catlab_cli::Cell;
using catlab_cli::RunConfig;
using catlab_cli::Table;

struct CommandOutput {
  Table table;
  std::string summary;
  bool check_failed = false;  // inequalities: a reported bound was violated
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

catlab::GameParams make_params(const RunConfig& cfg) {
  catlab::GameParams p;
  p.gamma = cfg.gamma;
  p.alpha = cfg.alpha;
  catlab::validate_params(p);
  return p;
}

std::string stability_str(catlab::Stability s) {
  return s == catlab::Stability::Stable ? "stable" : "unstable";
}

std::string ess_str(catlab::EssStatus s) {
  switch (s) {
    case catlab::EssStatus::Ess: return "ess";
    case catlab::EssStatus::NotEss: return "not_ess";
    default: return "unclassified";
  }
}

std::string reason_str(catlab::TerminalReason r) {
  switch (r) {
    case catlab::TerminalReason::Converged: return "converged";
    case catlab::TerminalReason::Escaped: return "escaped";
    default: return "max_time";
  }
}

std::vector<double> temp_grid(const RunConfig& cfg) {
  if (!(cfg.tstep > 0.0)) throw catlab::DomainError("tstep: must be positive");
  if (!(cfg.tmax >= cfg.tmin)) throw catlab::DomainError("tmax: must be >= tmin");
  if (!(cfg.tmin >= 0.0)) throw catlab::DomainError("tmin: must be nonnegative");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>((cfg.tmax - cfg.tmin) / cfg.tstep + 1e-9) + 1;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(cfg.tmin + static_cast<double>(i) * cfg.tstep);
  return grid;
}

double default_eps0(const RunConfig& cfg) {
  return cfg.eps0 > 0.0 ? cfg.eps0 : 0.5 * std::min(cfg.gamma, 1.0 - cfg.gamma);
}

CommandOutput run_nash(const RunConfig& cfg) {
  const auto profile = catlab::nash_equilibria(make_params(cfg));
  CommandOutput out;
  out.table.columns = {"x", "average_payoff", "ess"};
  for (const auto& eq : profile.equilibria) {
    out.table.add_row({eq.x, eq.avg_payoff, ess_str(eq.ess)});
  }
  out.summary = "nash: " + std::to_string(profile.equilibria.size()) + " equilibria (gamma=" +
                fmt(cfg.gamma) + ", alpha=" + fmt(cfg.alpha) + ")" +
                (profile.degenerate ? " [degenerate: S dominant]" : "");
  return out;
}

CommandOutput run_qre(const RunConfig& cfg) {
  const auto set = catlab::find_qre(cfg.temp, make_params(cfg));
  CommandOutput out;
  out.table.columns = {"T", "x", "stability", "bracket_lo", "bracket_hi", "residual"};
  for (const auto& pt : set.points) {
    out.table.add_row({set.temp, pt.x, stability_str(pt.stability), pt.bracket_lo, pt.bracket_hi,
                       pt.residual});
  }
  out.summary = "qre: " + std::to_string(set.points.size()) + " roots at T=" + fmt(cfg.temp) +
                "; min_root=" + fmt(set.min_root, "%.9g") + (set.at_fold ? " (at fold)" : "");
  return out;
}

CommandOutput run_tc(const RunConfig& cfg) {
  const auto c = catlab::critical_temperature(cfg.gamma);
  CommandOutput out;
  out.table.columns = {"gamma", "T_c", "x_fold"};
  out.table.add_row({c.gamma, c.t_c, c.x_fold});
  out.summary = "tc: T_c(" + fmt(cfg.gamma) + ")=" + fmt(c.t_c, "%.9g") +
                " x_fold=" + fmt(c.x_fold, "%.9g");
  return out;
}

CommandOutput run_sweep(const RunConfig& cfg) {
  const auto grid = temp_grid(cfg);
  const auto sweep = catlab::sweep_correspondence(cfg.gamma, cfg.alpha, grid);
  CommandOutput out;
  out.table.columns = {"T", "branch_id", "x", "stability"};
  int max_branch = -1;
  for (const auto& pt : sweep) {
    for (std::size_t k = 0; k < pt.set.points.size(); ++k) {
      out.table.add_row({pt.temp, static_cast<std::int64_t>(pt.branch_ids[k]),
                         pt.set.points[k].x, stability_str(pt.set.points[k].stability)});
      max_branch = std::max(max_branch, pt.branch_ids[k]);
    }
  }
  out.summary = "sweep: " + std::to_string(grid.size()) + " T-levels, " +
                std::to_string(max_branch + 1) + " branches, " +
                std::to_string(out.table.rows.size()) + " rows";
  return out;
}

CommandOutput run_simulate(const RunConfig& cfg, double horizon) {
  const auto p = make_params(cfg);
  catlab::PerturbationSpec pert;
  const bool perturbed = cfg.eps0 > 0.0;
  if (perturbed) pert = catlab::PerturbationSpec::smooth_random(cfg.eps0, cfg.seed);
  catlab::IntegrateOptions opts;
  opts.max_samples = 2002;
  const auto traj = catlab::integrate(cfg.x0, cfg.temp, p, horizon,
                                      perturbed ? &pert : nullptr, opts);
  CommandOutput out;
  out.table.columns = {"t", "x"};
  for (const auto& [t, x] : traj.samples) out.table.add_row({t, x});
  out.summary = "simulate: terminal_x=" + fmt(traj.terminal_x, "%.9g") + " (" +
                reason_str(traj.terminal) + ") at t=" + fmt(traj.terminal_t);
  return out;
}

CommandOutput run_qlearn(const RunConfig& cfg) {
  const auto p = make_params(cfg);
  catlab::QLearningConfig qcfg;
  qcfg.delta = cfg.delta;
  qcfg.steps = cfg.steps;
  const auto traj = catlab::discrete_q_learning(cfg.x0, cfg.temp, p, qcfg);
  CommandOutput out;
  out.table.columns = {"step", "x"};
  for (const auto& [t, x] : traj.samples) {
    out.table.add_row({static_cast<std::int64_t>(t), x});
  }
  out.summary = "qlearn: terminal_x=" + fmt(traj.terminal_x, "%.9g") + " after " +
                std::to_string(cfg.steps) + " steps";
  return out;
}

CommandOutput run_mechanism(const RunConfig& cfg) {
  const auto p = make_params(cfg);
  catlab::ScheduleMode mode;
  if (cfg.mode == "minimal") {
    mode = catlab::ScheduleMode::Minimal;
  } else if (cfg.mode == "ramp") {
    mode = catlab::ScheduleMode::Ramp;
  } else {
    throw catlab::DomainError("mode: expected 'minimal' or 'ramp'");
  }
  const bool perturbed = cfg.eps0 > 0.0;
  std::optional<double> eps0;
  catlab::PerturbationSpec pert;
  if (perturbed) {
    eps0 = cfg.eps0;
    pert = catlab::PerturbationSpec::smooth_random(cfg.eps0, cfg.seed);
  }
  const auto schedule =
      catlab::build_schedule(p, mode, cfg.margin, static_cast<int>(cfg.steps), eps0);
  const auto rep = catlab::run_mechanism(cfg.x0, schedule, p, perturbed ? &pert : nullptr);

  CommandOutput out;
  out.table.columns = {"phase", "T", "start_x", "terminal_x", "converged"};
  for (std::size_t i = 0; i < rep.phases.size(); ++i) {
    const auto& ph = rep.phases[i];
    out.table.add_row({static_cast<std::int64_t>(i), ph.temp, ph.start_x, ph.terminal_x,
                       ph.converged});
  }
  out.summary = "final_x=" + fmt(rep.final_x, "%.6f") +
                ", hysteresis=" + (rep.hysteresis_confirmed ? "true" : "false");
  if (rep.jump) {
    out.summary += " (jump " + fmt(rep.jump->x_before) + " -> " + fmt(rep.jump->x_after) +
                   " at phase " + std::to_string(rep.jump->phase_index) + ")";
  }
  if (!rep.warning.empty()) out.summary += " [" + rep.warning + "]";
  return out;
}

CommandOutput run_perturb(const RunConfig& cfg) {
  const double eps0 = default_eps0(cfg);
  const auto b = catlab::perturbation_bounds(cfg.x0, cfg.temp, cfg.gamma, eps0);
  CommandOutput out;
  out.table.columns = {"x_query", "T",          "gamma",       "eps0",
                       "f_low",   "f_high",     "root_lo",     "root_hi",
                       "displacement_bound",    "tc_upper_bound", "t_shift_bound"};
  out.table.add_row({cfg.x0, cfg.temp, cfg.gamma, b.eps0, b.f_low, b.f_high, b.root_lo,
                     b.root_hi, b.displacement_bound, b.tc_upper_bound, b.t_shift_bound});
  out.summary = "perturb: displacement_bound=" + fmt(b.displacement_bound, "%.9g") +
                " min-QRE in [" + fmt(b.root_lo, "%.9g") + ", " + fmt(b.root_hi, "%.9g") + "]";
  return out;
}

// Numerical form of the supplementary inequality suite; worst margins on
// dense grids (positive worst_violation means the bound failed).
CommandOutput run_inequalities(const RunConfig& cfg) {
  CommandOutput out;
  out.table.columns = {"name", "worst_violation", "x_at", "param_at", "pass"};
  constexpr double kTol = 1e-12;
  const int n = 10000;

  auto add = [&](const std::string& name, double worst, double x_at, double param_at) {
    out.table.add_row({name, worst, x_at, param_at, worst <= kTol});
    if (worst > kTol) out.check_failed = true;
  };

  {
    double worst = -1.0, xa = 0, pa = 0;
    for (int ai = 0; ai <= 60; ++ai) {
      const double a = 2.0 + 0.1 * ai;
      for (int i = 1; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double v = std::pow(x, a) * (1 - x) + x * std::pow(1 - x, a) - 0.5 / a;
        if (v > worst) { worst = v; xa = x; pa = a; }
      }
    }
    add("mixing_loss_cap", worst, xa, pa);
  }
  {
    double worst = -1.0, xa = 0, pa = 0;
    for (int ai = 0; ai <= 60; ++ai) {
      const double a = 2.0 + 0.1 * ai;
      for (int i = 1; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double v = std::pow(x, a - 1) * (1 - x) - 0.5 / a;
        if (v > worst) { worst = v; xa = x; pa = a; }
      }
    }
    add("edge_weight_cap", worst, xa, pa);
  }
  {
    double worst = -1.0, xa = 0, pa = 0;
    for (int ai = 1; ai <= 70; ++ai) {
      const double a = 1.0 + 0.1 * ai;
      for (int i = 1; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double v = std::pow(2.0, 1.0 - a) - (std::pow(x, a) + std::pow(1 - x, a));
        if (v > worst) { worst = v; xa = x; pa = a; }
      }
    }
    add("power_sum_floor", worst, xa, pa);
  }
  {
    // (1 - 1/x)^(x-1) decreasing on (1, inf), value 1/2 at x = 2.
    double worst = -1.0, xa = 0;
    auto h = [](double x) { return std::pow(1.0 - 1.0 / x, x - 1.0); };
    double prev = h(1.0 + 49.0 / n);
    for (int i = 2; i <= n; ++i) {
      const double x = 1.0 + 49.0 * static_cast<double>(i) / n;
      const double cur = h(x);
      if (cur - prev > worst) { worst = cur - prev; xa = x; }
      prev = cur;
    }
    add("base_rate_decreasing", worst, xa, 0.0);
    add("base_rate_half_at_2", std::abs(h(2.0) - 0.5), 2.0, 0.0);
  }
  {
    // Envelope under a seeded bounded perturbation.
    const double eps0 = default_eps0(cfg);
    const auto pert = catlab::PerturbationSpec::smooth_random(eps0, cfg.seed);
    catlab::GameParams mid{cfg.gamma, 2.0, 1.0, true};
    catlab::GameParams plus{cfg.gamma + eps0, 2.0, 1.0, true};
    catlab::GameParams minus{cfg.gamma - eps0, 2.0, 1.0, true};
    double worst = -1.0, xa = 0, pa = 0;
    for (int ti = 0; ti <= 10; ++ti) {
      const double temp = 0.1 * ti;
      for (int i = 1; i < 2000; ++i) {
        const double x = static_cast<double>(i) / 2000;
        const double fe = catlab::drift(x, temp, mid) + catlab::sample_perturbation(pert, x);
        const double lo = catlab::drift(x, temp, plus);
        const double hi = catlab::drift(x, temp, minus);
        const double v = std::max(lo - fe, fe - hi);
        if (v > worst) { worst = v; xa = x; pa = temp; }
      }
    }
    add("perturbed_drift_envelope", worst, xa, pa);
  }
  {
    // f'(x) <= 2 - 4T for the bilinear drift; the cap is attained at x = 1/2.
    catlab::GameParams p{cfg.gamma, 2.0, 1.0, true};
    double worst = -1.0, xa = 0, pa = 0;
    for (int ti = 0; ti <= 10; ++ti) {
      const double temp = 0.1 * ti;
      for (int i = 1; i < 2000; ++i) {
        const double x = static_cast<double>(i) / 2000;
        const double v = catlab::drift_derivative(x, temp, p) - (2.0 - 4.0 * temp);
        if (v > worst) { worst = v; xa = x; pa = temp; }
      }
    }
    add("drift_slope_cap", worst, xa, pa);
  }

  double worst_all = -1.0;
  for (const auto& row : out.table.rows) {
    worst_all = std::max(worst_all, std::get<double>(row[1]));
  }
  out.summary = std::string("inequalities: ") + std::to_string(out.table.rows.size()) +
                " checks, worst violation " + fmt(worst_all, "%.3g") +
                (out.check_failed ? " FAILED" : ", all pass");
  return out;
}

int dispatch(const std::string& name, const RunConfig& cfg, double sim_horizon) {
  CommandOutput out;
  if (name == "nash") out = run_nash(cfg);
  else if (name == "qre") out = run_qre(cfg);
  else if (name == "tc") out = run_tc(cfg);
  else if (name == "sweep") out = run_sweep(cfg);
  else if (name == "simulate") out = run_simulate(cfg, sim_horizon);
  else if (name == "qlearn") out = run_qlearn(cfg);
  else if (name == "mechanism") out = run_mechanism(cfg);
  else if (name == "perturb") out = run_perturb(cfg);
  else out = run_inequalities(cfg);

  const std::string path =
      cfg.out.empty() ? "catlab_" + name + "." + cfg.format : cfg.out;
  const std::string content =
      cfg.format == "csv" ? catlab_cli::to_csv(out.table)
                          : catlab_cli::to_json(catlab_cli::config_meta(name, cfg), out.table);
  catlab_cli::write_file(path, content);
  std::cout << out.summary << " [" << path << "]\n";
  return out.check_failed ? 3 : 0;
}

std::string prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path = prescan_config(argc, argv);
  try {
    if (!config_path.empty()) catlab_cli::load_config(config_path, &cfg);
  } catch (const catlab_cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"catlab: QRE structure, bifurcation sweeps and catastrophe "
               "schedules for the two-technology population game"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(catlab::kVersion));

  bool sim_horizon_set = false;
  double sim_horizon = 1000.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--gamma", cfg.gamma, "normalized cost, in (0,1)");
    sub->add_option("--alpha", cfg.alpha, "network-effect exponent, >= 1");
    sub->add_option("--out", cfg.out, "artifact path (default catlab_<subcommand>.<format>)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
  };

  CLI::App* nash = app.add_subcommand("nash", "Nash equilibria and ESS labels of the T=0 game");
  add_common(nash);

  CLI::App* qre = app.add_subcommand("qre", "QRE locations and stability at one control level");
  add_common(qre);
  qre->add_option("--temp", cfg.temp, "control level T >= 0");

  CLI::App* tc = app.add_subcommand("tc", "critical control level T_c(gamma) and fold location");
  add_common(tc);

  CLI::App* sweep = app.add_subcommand("sweep", "bifurcation diagram over a T grid");
  add_common(sweep);
  sweep->add_option("--tmin", cfg.tmin, "grid start");
  sweep->add_option("--tmax", cfg.tmax, "grid end");
  sweep->add_option("--tstep", cfg.tstep, "grid step");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the population dynamics");
  add_common(simulate);
  simulate->add_option("--temp", cfg.temp, "control level T >= 0");
  simulate->add_option("--x0", cfg.x0, "initial population state");
  simulate->add_option("--eps0", cfg.eps0, "bounded perturbation amplitude (0 = none)");
  simulate->add_option("--seed", cfg.seed, "perturbation seed");
  auto* hor = simulate->add_option("--tmax", sim_horizon, "integration horizon (default 1000)");
  hor->each([&](const std::string&) { sim_horizon_set = true; });

  CLI::App* qlearn = app.add_subcommand("qlearn", "discrete Boltzmann Q-learning iteration");
  add_common(qlearn);
  qlearn->add_option("--temp", cfg.temp, "control level T > 0");
  qlearn->add_option("--x0", cfg.x0, "initial population state");
  qlearn->add_option("--delta", cfg.delta, "learning rate in (0,1]");
  qlearn->add_option("--steps", cfg.steps, "iteration budget");

  CLI::App* mechanism = app.add_subcommand("mechanism", "catastrophe schedule end to end");
  add_common(mechanism);
  mechanism->add_option("--x0", cfg.x0, "initial population state");
  mechanism->add_option("--mode", cfg.mode, "minimal or ramp")
      ->check(CLI::IsMember({"minimal", "ramp"}));
  mechanism->add_option("--margin", cfg.margin, "peak excess above the critical threshold");
  mechanism->add_option("--steps", cfg.steps, "ramp level count (>= 3)");
  mechanism->add_option("--eps0", cfg.eps0, "bounded perturbation amplitude (0 = none)");
  mechanism->add_option("--seed", cfg.seed, "perturbation seed");

  CLI::App* perturb = app.add_subcommand("perturb", "robustness bounds for bounded noise");
  add_common(perturb);
  perturb->add_option("--temp", cfg.temp, "control level T >= 0, != 1/2");
  perturb->add_option("--x0", cfg.x0, "query state for the envelope and shift bound");
  perturb->add_option("--eps0", cfg.eps0,
                      "perturbation amplitude (default 0.5*min(gamma,1-gamma))");

  CLI::App* ineq = app.add_subcommand("inequalities",
                                      "supplementary inequality suite with worst margins");
  add_common(ineq);
  ineq->add_option("--eps0", cfg.eps0, "envelope check amplitude");
  ineq->add_option("--seed", cfg.seed, "envelope check seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "simulate" && !sim_horizon_set) sim_horizon = 1000.0;
  try {
    return dispatch(name, cfg, sim_horizon);
  } catch (const catlab::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const catlab::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

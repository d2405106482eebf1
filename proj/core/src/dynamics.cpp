#include "catlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "catlab/errors.hpp"
#include "logit.hpp"

namespace catlab {
namespace {

constexpr int kSmoothKnots = 33;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_amp(double v, double eps0) { return std::clamp(v, -eps0, eps0); }

// 53-bit uniform in [0,1) from a raw engine draw; avoids
// uniform_real_distribution, whose output is implementation-defined.
double unit_uniform(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

double interp_knots(const std::vector<std::pair<double, double>>& knots, double x, bool smooth) {
  if (knots.empty()) return 0.0;
  if (x <= knots.front().first) return knots.front().second;
  if (x >= knots.back().first) return knots.back().second;
  auto it = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const auto& k) { return v < k.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  double u = (x - lo.first) / (hi.first - lo.first);
  if (smooth) u = u * u * (3.0 - 2.0 * u);  // C^1 blend between knot values
  return lo.second + (hi.second - lo.second) * u;
}

// NaN outside the admissible interval; the stepper treats that as a
// rejected step.
double field_or_nan(double x, double temp, const GameParams& p, const PerturbationSpec* pert) {
  if (temp > 0.0) {
    if (!(x > 0.0 && x < 1.0)) return kNaN;
  } else if (!(x >= 0.0 && x <= 1.0)) {
    return kNaN;
  }
  const double eps = pert ? sample_perturbation(*pert, x) : 0.0;
  return x * (1.0 - x) * (detail::drift_x(x, temp, p.gamma, p.alpha) + eps);
}

}  // namespace

PerturbationSpec PerturbationSpec::constant_bias(double eps0) {
  if (!(eps0 >= 0.0)) throw DomainError("eps0: amplitude must be nonnegative");
  PerturbationSpec s;
  s.kind = Kind::ConstantBias;
  s.eps0 = eps0;
  return s;
}

PerturbationSpec PerturbationSpec::smooth_random(double eps0, std::uint64_t seed) {
  if (!(eps0 >= 0.0)) throw DomainError("eps0: amplitude must be nonnegative");
  PerturbationSpec s;
  s.kind = Kind::SmoothRandom;
  s.eps0 = eps0;
  s.seed = seed;
  // splitmix64 over the seed; knot values uniform in [-eps0, eps0].
  std::uint64_t state = seed;
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  s.knots.reserve(kSmoothKnots);
  for (int i = 0; i < kSmoothKnots; ++i) {
    const double x = static_cast<double>(i) / (kSmoothKnots - 1);
    s.knots.emplace_back(x, eps0 * (2.0 * unit_uniform(next()) - 1.0));
  }
  return s;
}

PerturbationSpec PerturbationSpec::user_table(double eps0,
                                              std::vector<std::pair<double, double>> table) {
  if (!(eps0 >= 0.0)) throw DomainError("eps0: amplitude must be nonnegative");
  if (table.empty()) throw DomainError("table: needs at least one knot");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first)) {
      throw DomainError("table: knot abscissae must be strictly ascending");
    }
  }
  PerturbationSpec s;
  s.kind = Kind::UserTable;
  s.eps0 = eps0;
  s.knots = std::move(table);
  return s;
}

double sample_perturbation(const PerturbationSpec& spec, double x) {
  switch (spec.kind) {
    case PerturbationSpec::Kind::ConstantBias:
      return spec.eps0;
    case PerturbationSpec::Kind::SmoothRandom:
      return clamp_amp(interp_knots(spec.knots, x, /*smooth=*/true), spec.eps0);
    case PerturbationSpec::Kind::UserTable:
      return clamp_amp(interp_knots(spec.knots, x, /*smooth=*/false), spec.eps0);
  }
  return 0.0;
}

double vector_field(double x, double temp, const GameParams& p, const PerturbationSpec* pert) {
  if (!(temp >= 0.0)) throw DomainError("T: control level must be nonnegative");
  const double v = field_or_nan(x, temp, p, pert);
  if (std::isnan(v)) {
    throw DomainError(temp > 0.0 ? "x: state must lie strictly inside (0,1) when T > 0"
                                 : "x: state must lie in [0,1]");
  }
  return v;
}

Trajectory integrate(double x0, double temp, const GameParams& p, double t_max,
                     const PerturbationSpec* pert, const IntegrateOptions& opts) {
  validate_params(p);
  if (!(t_max > 0.0)) throw DomainError("t_max: horizon must be positive");
  if (!(opts.step > 0.0)) throw DomainError("step: must be positive");
  vector_field(x0, temp, p, pert);  // validates x0 against the T regime

  Trajectory traj;
  const double est_steps = std::ceil(t_max / opts.step);
  const std::size_t cap = std::max<std::size_t>(opts.max_samples, 8);
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(est_steps / (cap - 2)) + 1);

  double t = 0.0;
  double x = x0;
  traj.samples.emplace_back(t, x);
  int streak = 0;
  std::size_t step_index = 0;

  auto f = [&](double xi) { return field_or_nan(xi, temp, p, pert); };

  while (t < t_max) {
    double h = std::min(opts.step, t_max - t);
    double x_new = kNaN;
    for (;;) {
      const double k1 = f(x);
      const double k2 = f(x + 0.5 * h * k1);
      const double k3 = f(x + 0.5 * h * k2);
      const double k4 = f(x + h * k3);
      x_new = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const bool ok = !std::isnan(k1) && !std::isnan(k2) && !std::isnan(k3) && !std::isnan(k4) &&
                      !std::isnan(field_or_nan(x_new, temp, p, pert));
      if (ok) break;
      h *= 0.5;
      if (h < opts.min_step) {
        throw NumericalError("integrate: step underflow below min_step at t=" +
                             std::to_string(t) + ", x=" + std::to_string(x));
      }
    }
    x = x_new;
    t += h;
    ++step_index;
    if (step_index % stride == 0) traj.samples.emplace_back(t, x);

    const double speed = f(x);
    if (std::abs(speed) < opts.conv_tol) {
      if (++streak >= opts.conv_window) {
        traj.terminal = TerminalReason::Converged;
        break;
      }
    } else {
      streak = 0;
    }
    if (opts.stop_below >= 0.0 && x < opts.stop_below) {
      traj.terminal = TerminalReason::Escaped;
      break;
    }
  }
  if (traj.samples.back().first < t) traj.samples.emplace_back(t, x);
  traj.terminal_x = x;
  traj.terminal_t = t;
  if (traj.terminal != TerminalReason::Converged && traj.terminal != TerminalReason::Escaped) {
    traj.terminal = TerminalReason::MaxTime;
  }
  return traj;
}

ConvergenceResult converge_to_qre(double x0, double temp, const GameParams& p,
                                  const PerturbationSpec* pert, const IntegrateOptions& opts,
                                  double budget_cap) {
  ConvergenceResult res;
  double x = x0;
  double budget = 100.0;
  double spent = 0.0;
  IntegrateOptions run_opts = opts;
  run_opts.max_samples = 8;  // terminal state only; callers wanting paths use integrate
  for (;;) {
    Trajectory tr = integrate(x, temp, p, budget, pert, run_opts);
    x = tr.terminal_x;
    spent += tr.terminal_t;
    res.reason = tr.terminal;
    if (tr.terminal != TerminalReason::MaxTime) break;
    if (budget >= budget_cap) break;  // exhausted: reported, never silent
    budget = std::min(budget * 2.0, budget_cap);
  }
  res.terminal_x = x;
  res.time_spent = spent;
  res.certificate.exit_speed = std::abs(field_or_nan(x, temp, p, pert));

  const bool perturbed = pert != nullptr && pert->eps0 > 0.0;
  if (!perturbed) {
    const QreSet qre = find_qre(temp, p);
    double best = std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (std::size_t i = 0; i < qre.points.size(); ++i) {
      const double d = std::abs(qre.points[i].x - x);
      if (d < best) {
        best = d;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i >= 0) {
      res.certificate.matched_point = best_i;
      res.certificate.matched_x = qre.points[best_i].x;
      res.certificate.matched_dist = best;
    }
  } else if (p.gamma - pert->eps0 > 0.0 && p.gamma + pert->eps0 < 1.0) {
    GameParams plus = p;
    plus.gamma = p.gamma + pert->eps0;
    GameParams minus = p;
    minus.gamma = p.gamma - pert->eps0;
    const QreSet a = find_qre(temp, plus);
    const QreSet b = find_qre(temp, minus);
    for (const QrePoint& pa : a.points) {
      if (pa.stability != Stability::Stable) continue;
      double best = std::numeric_limits<double>::infinity();
      double match = pa.x;
      for (const QrePoint& pb : b.points) {
        if (pb.stability != Stability::Stable) continue;
        const double d = std::abs(pb.x - pa.x);
        if (d < best) {
          best = d;
          match = pb.x;
        }
      }
      const double slack = 1e-7;
      res.certificate.envelope.emplace_back(std::min(pa.x, match) - slack,
                                            std::max(pa.x, match) + slack);
    }
    for (const auto& [lo, hi] : res.certificate.envelope) {
      if (x >= lo && x <= hi) {
        res.certificate.in_envelope = true;
        break;
      }
    }
  }
  return res;
}

Trajectory discrete_q_learning(double x0, double temp, const GameParams& p,
                               const QLearningConfig& cfg) {
  validate_params(p);
  if (temp == 0.0) throw DomainError("T: Boltzmann choice map undefined at T = 0");
  if (!(temp > 0.0)) throw DomainError("T: control level must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw DomainError("delta: learning rate in (0,1]");
  if (cfg.steps < 1) throw DomainError("steps: iteration budget must be >= 1");
  if (!(x0 > 0.0 && x0 < 1.0)) throw DomainError("x0: must lie strictly inside (0,1)");

  double q_w, q_s;
  if (cfg.q_init) {
    q_w = cfg.q_init->first;
    q_s = cfg.q_init->second;
  } else {
    // Invert the choice map so the first emitted state is x0:
    // Q0(W) - Q0(S) = T*ln(x0/(1-x0)).
    const double d = temp * detail::logit(x0);
    q_w = 0.5 * d;
    q_s = -0.5 * d;
  }

  Trajectory traj;
  const std::size_t cap = 100000;
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(cfg.steps) / (cap - 2) + 1);
  double x = detail::logistic((q_w - q_s) / temp);
  traj.samples.emplace_back(0.0, x);
  for (long t = 1; t <= cfg.steps; ++t) {
    const auto [u_w, u_s] = payoffs(x, p);
    q_w += cfg.delta * (u_w - q_w);
    q_s += cfg.delta * (u_s - q_s);
    x = detail::logistic((q_w - q_s) / temp);
    if (static_cast<std::size_t>(t) % stride == 0 || t == cfg.steps) {
      traj.samples.emplace_back(static_cast<double>(t), x);
    }
  }
  traj.terminal = TerminalReason::MaxTime;
  traj.terminal_x = x;
  traj.terminal_t = static_cast<double>(cfg.steps);
  return traj;
}

}  // namespace catlab

#include "catlab/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catlab/errors.hpp"
#include "catlab/qre.hpp"

namespace catlab {
namespace {

constexpr double kFinalTol = 1e-6;
constexpr double kBoundaryNudge = 1e-9;
constexpr double kFoldEps = 1e-6;

double check_eps0(const GameParams& p, double eps0) {
  if (!(eps0 > 0.0 && eps0 < std::min(p.gamma, 1.0 - p.gamma))) {
    throw DomainError("eps0: admissible amplitudes lie in (0, min(gamma, 1-gamma))");
  }
  return eps0;
}

// Peak the schedule must exceed: T_c(gamma) for the bilinear game (shifted
// to gamma - eps0 under a bounded perturbation), the conservative 1/2 for
// any other network exponent.
double fold_threshold(const GameParams& p, std::optional<double> eps0) {
  if (p.alpha == 2.0) {
    const double g = eps0 ? p.gamma - *eps0 : p.gamma;
    return critical_temperature(g).t_c;
  }
  return 0.5;
}

int count_above_half(const QreSet& set) {
  int n = 0;
  for (const auto& pt : set.points) {
    if (pt.x > 0.5) ++n;
  }
  return n;
}

}  // namespace

PhaseSchedule build_schedule(const GameParams& p, ScheduleMode mode, double margin, int steps,
                             std::optional<double> eps0) {
  validate_params(p);
  if (!(margin > 0.0)) throw DomainError("margin: must be positive");
  if (eps0) check_eps0(p, *eps0);
  const double peak = fold_threshold(p, eps0) + margin;

  PhaseSchedule schedule;
  if (mode == ScheduleMode::Minimal) {
    schedule.levels = {0.0, peak, 0.0};
    return schedule;
  }
  if (steps < 3) throw DomainError("steps: ramp needs at least 3 levels");
  const int n = steps % 2 == 1 ? steps : steps + 1;  // odd count so the peak is attained
  const int half = (n - 1) / 2;
  schedule.levels.reserve(n);
  for (int i = 0; i <= half; ++i) {
    schedule.levels.push_back(peak * static_cast<double>(i) / half);
  }
  for (int i = half - 1; i >= 0; --i) {
    schedule.levels.push_back(peak * static_cast<double>(i) / half);
  }
  return schedule;
}

MechanismReport run_mechanism(double x0, const PhaseSchedule& schedule, const GameParams& p,
                              const PerturbationSpec* pert) {
  validate_params(p);
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("x0: must lie in [0,1]");
  if (schedule.levels.size() < 2) throw DomainError("schedule: needs at least two levels");
  if (schedule.levels.front() != 0.0 || schedule.levels.back() != 0.0) {
    throw DomainError("schedule: T_0 and T_n must both be 0");
  }
  for (double t : schedule.levels) {
    if (!(std::isfinite(t) && t >= 0.0)) throw DomainError("schedule: levels must be >= 0");
  }
  const bool perturbed = pert != nullptr && pert->eps0 > 0.0;
  if (perturbed) check_eps0(p, pert->eps0);

  MechanismReport report;
  const double mixed = 0.5 * (1.0 + p.gamma);
  if (x0 < mixed) report.warning += "already in basin; ";

  const double threshold =
      fold_threshold(p, perturbed ? std::optional<double>(pert->eps0) : std::nullopt);
  const double peak = *std::max_element(schedule.levels.begin(), schedule.levels.end());
  if (!(peak > threshold)) report.warning += "no fold crossed; ";

  double x = x0;
  for (std::size_t i = 0; i < schedule.levels.size(); ++i) {
    const double temp = schedule.levels[i];
    const double start = x;
    if (temp > 0.0) {
      // Boundary states are inadmissible under the entropy term; nudging by
      // 1e-9 keeps the phase-start speed above the convergence detector.
      x = std::clamp(x, kBoundaryNudge, 1.0 - kBoundaryNudge);
    }
    IntegrateOptions opts;
    const bool last = i + 1 == schedule.levels.size();
    if (!last && temp > 0.0) {
      // Past x_l the state has left the upper attractor for good; cutting
      // there bounds the slow tail of the descent.
      opts.stop_below = temp <= 0.5 ? turning_points(temp).x_l : 0.45;
    }
    ConvergenceResult res =
        converge_to_qre(x, temp, p, pert, opts, schedule.phase_time_budget);
    x = res.terminal_x;

    PhaseResult phase;
    phase.temp = temp;
    phase.start_x = start;
    phase.terminal_x = x;
    phase.reason = res.reason;
    phase.converged = res.reason == TerminalReason::Converged;
    report.phases.push_back(phase);
    if (res.reason == TerminalReason::MaxTime) {
      report.warning += "phase " + std::to_string(i) + " did not converge; ";
    }
    if (!report.jump && x < 0.5) {
      const double before = i == 0 ? x0 : report.phases[i - 1].terminal_x;
      report.jump = Jump{before, x, static_cast<int>(i)};
    }
  }
  report.final_x = x;
  report.hysteresis_confirmed = report.final_x < kFinalTol && x0 >= mixed;
  report.critical_mass = critical_mass_report(p.gamma, p.alpha).x_before;
  return report;
}

CriticalMassReport critical_mass_report(double gamma, double alpha) {
  GameParams p;
  p.gamma = gamma;
  p.alpha = alpha;
  validate_params(p);

  CriticalMassReport rep;
  if (alpha == 2.0) {
    const CriticalPoint c = critical_temperature(gamma);
    rep.t_c = c.t_c;
    rep.x_before = c.x_fold;
    rep.x_after = find_qre(c.t_c + kFoldEps, p).min_root;
    return rep;
  }

  // Sweep-based fold detection: the pair of QRE above 1/2 exists at T = 0
  // and is gone by T = 1/2; bisect the transition.
  double lo = 0.0;
  double hi = 0.5;
  QreSet lo_set = find_qre(lo, p);
  if (count_above_half(lo_set) < 2) {
    throw NumericalError("critical_mass_report: no upper QRE pair at T=0");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const QreSet mid_set = find_qre(mid, p);
    if (count_above_half(mid_set) >= 2) {
      lo = mid;
      lo_set = mid_set;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12) break;
  }
  rep.t_c = 0.5 * (lo + hi);
  double top = 0.0;
  double second = 0.0;
  for (const auto& pt : lo_set.points) {
    if (pt.x > 0.5) {
      second = top;
      top = pt.x;
    }
  }
  rep.x_before = 0.5 * (top + second);  // merging pair straddles the fold
  rep.x_after = find_qre(rep.t_c + kFoldEps, p).min_root;
  return rep;
}

std::vector<std::pair<double, CriticalMassReport>> critical_mass_scan(
    const std::vector<double>& gammas, double alpha) {
  std::vector<std::pair<double, CriticalMassReport>> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    out.emplace_back(g, critical_mass_report(g, alpha));
  }
  return out;
}

}  // namespace catlab

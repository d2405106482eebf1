#ifndef CATLAB_MECHANISM_HPP
#define CATLAB_MECHANISM_HPP

#include <optional>
#include <string>
#include <vector>

#include "catlab/dynamics.hpp"
#include "catlab/game.hpp"

namespace catlab {

/// Control-parameter sequence <T_0, ..., T_n> with T_0 = T_n = 0 whose peak
/// strictly exceeds the applicable critical threshold.
struct PhaseSchedule {
  std::vector<double> levels;
  double phase_time_budget = 1e6;  // converge_to_qre cap per phase
};

enum class ScheduleMode { Minimal, Ramp };

/// Builds a schedule for the catastrophe run. Minimal: <0, peak, 0>.
/// Ramp: a triangular sequence through `steps` levels (rounded up to an odd
/// count so the exact peak is attained). The peak is threshold + margin,
/// where the threshold is T_c(gamma) for alpha = 2, T_c(gamma - eps0) under
/// a bounded perturbation, and 1/2 for alpha > 2.
PhaseSchedule build_schedule(const GameParams& p, ScheduleMode mode, double margin = 0.05,
                             int steps = 3, std::optional<double> eps0 = std::nullopt);

struct PhaseResult {
  double temp = 0.0;
  double start_x = 0.0;
  double terminal_x = 0.0;
  bool converged = false;
  TerminalReason reason = TerminalReason::MaxTime;
};

struct Jump {
  double x_before = 0.0;  // terminal of the last phase above 1/2
  double x_after = 0.0;   // terminal of the first phase below 1/2
  int phase_index = 0;
};

struct MechanismReport {
  std::vector<PhaseResult> phases;
  std::optional<Jump> jump;
  double critical_mass = 0.0;  // upper-branch fraction at the fold
  bool hysteresis_confirmed = false;
  double final_x = 0.0;
  std::string warning;  // "no fold crossed", "already in basin", ...
};

/// Drives the dynamics phase by phase along the schedule, each phase
/// starting from the previous terminal state. Records the fold jump, checks
/// the hysteresis outcome (final state at 0 after T returns to 0), and
/// flags rather than throws on non-convergence or a sub-threshold peak.
MechanismReport run_mechanism(double x0, const PhaseSchedule& schedule, const GameParams& p,
                              const PerturbationSpec* pert = nullptr);

struct CriticalMassReport {
  double x_before = 0.0;  // fraction on the upper branch at the fold
  double x_after = 0.0;   // min QRE just past the fold
  double t_c = 0.0;
};

/// Fold data for the catastrophe jump: closed form via critical_temperature
/// for alpha = 2, sweep-based fold detection for alpha > 2.
CriticalMassReport critical_mass_report(double gamma, double alpha);

/// Jump magnitudes across a gamma grid (scan utility for matching observed
/// before/after adoption levels against the model).
std::vector<std::pair<double, CriticalMassReport>> critical_mass_scan(
    const std::vector<double>& gammas, double alpha);

}  // namespace catlab

#endif  // CATLAB_MECHANISM_HPP

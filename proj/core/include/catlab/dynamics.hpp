#ifndef CATLAB_DYNAMICS_HPP
#define CATLAB_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "catlab/game.hpp"
#include "catlab/qre.hpp"

namespace catlab {

/// Bounded state-dependent noise term eps(x) with |eps(x)| <= eps0.
/// Deterministic in (seed, x): the same spec evaluated twice at the same x
/// yields the same value, independent of call order.
struct PerturbationSpec {
  enum class Kind { SmoothRandom, ConstantBias, UserTable };

  Kind kind = Kind::ConstantBias;
  double eps0 = 0.0;
  std::uint64_t seed = 0;
  // Interpolation knots (x, eps). Seeded at construction for SmoothRandom,
  // caller-supplied for UserTable (must be sorted by x).
  std::vector<std::pair<double, double>> knots;

  /// eps(x) = eps0 for every x.
  static PerturbationSpec constant_bias(double eps0);
  /// C^1 interpolation of seeded knot values, clamped to [-eps0, eps0].
  static PerturbationSpec smooth_random(double eps0, std::uint64_t seed);
  /// Linear interpolation of a user table, clamped to [-eps0, eps0].
  static PerturbationSpec user_table(double eps0, std::vector<std::pair<double, double>> table);
};

/// eps(x) for x in (0,1); |result| <= spec.eps0 always.
double sample_perturbation(const PerturbationSpec& spec, double x);

enum class TerminalReason { Converged, MaxTime, Escaped };

struct Trajectory {
  std::vector<std::pair<double, double>> samples;  // (t, x), strictly increasing t
  TerminalReason terminal = TerminalReason::MaxTime;
  double terminal_x = 0.0;
  double terminal_t = 0.0;
};

/// Right-hand side of the population dynamics,
///   xdot = x*(1-x) * (drift(x; T, gamma) + eps(x)),
/// with eps omitted when pert is null. For T = 0 the field is polynomial
/// and defined on the closed interval [0,1] (the boundary states are fixed
/// points); for T > 0 the state must be interior.
double vector_field(double x, double temp, const GameParams& p,
                    const PerturbationSpec* pert = nullptr);

struct IntegrateOptions {
  double step = 1e-3;        // fixed RK4 step
  double min_step = 1e-9;    // halving floor before a numerical error
  double conv_tol = 1e-10;   // |xdot| threshold of the convergence detector
  int conv_window = 100;     // consecutive sub-threshold steps required
  std::size_t max_samples = 100000;  // recording is strided to stay below this
  double stop_below = -1.0;  // early exit once x < stop_below (terminal Escaped)
};

/// Classical fixed-step 4th-order integration of the population dynamics,
/// stopping early once |xdot| stays below conv_tol for conv_window
/// consecutive steps. A step that leaves the admissible interval is retried
/// with halved step size down to min_step, then reported as NumericalError.
Trajectory integrate(double x0, double temp, const GameParams& p, double t_max,
                     const PerturbationSpec* pert = nullptr,
                     const IntegrateOptions& opts = {});

struct ConvergenceCertificate {
  double exit_speed = 0.0;              // |xdot| at exit
  std::optional<int> matched_point;     // index into find_qre(temp, p).points
  double matched_x = 0.0;
  double matched_dist = 0.0;
  // Perturbed runs: envelope intervals [x(gamma+eps0), x(gamma-eps0)] around
  // each stable unperturbed root, and whether the terminal state lies in one.
  std::vector<std::pair<double, double>> envelope;
  bool in_envelope = false;
};

struct ConvergenceResult {
  double terminal_x = 0.0;
  TerminalReason reason = TerminalReason::MaxTime;
  double time_spent = 0.0;
  ConvergenceCertificate certificate;
};

/// Runs integrate under an escalating time budget (doubling from 1e2 up to
/// 1e6) until the convergence detector fires. Unperturbed runs certify the
/// matched QRE; perturbed runs certify only membership in the envelope root
/// interval. Budget exhaustion is reported, never silent.
ConvergenceResult converge_to_qre(double x0, double temp, const GameParams& p,
                                  const PerturbationSpec* pert = nullptr,
                                  const IntegrateOptions& opts = {},
                                  double budget_cap = 1e6);

struct QLearningConfig {
  double delta = 0.1;       // learning rate, in (0,1]
  long steps = 10000;       // iteration budget, >= 1
  // Optional explicit initial Q-values (Q_W, Q_S); when absent they are
  // seeded from x0 via Q0(W) - Q0(S) = T*ln(x0/(1-x0)).
  std::optional<std::pair<double, double>> q_init;
};

/// Discrete Boltzmann Q-learning iteration: exponential-average Q update
/// followed by the Boltzmann choice map. Emits x_t per step (t = step
/// index). Stationary points coincide with the QRE. Requires T > 0.
Trajectory discrete_q_learning(double x0, double temp, const GameParams& p,
                               const QLearningConfig& cfg);

}  // namespace catlab

#endif  // CATLAB_DYNAMICS_HPP

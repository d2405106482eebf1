#ifndef CATLAB_QRE_HPP
#define CATLAB_QRE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "catlab/game.hpp"

namespace catlab {

/// Drift term of the Q-learning dynamics,
///   f(x; T, gamma) = x^(alpha-1) - gamma - (1-x)^(alpha-1) - T*ln(x/(1-x)),
/// which for alpha = 2 reduces to 2x - (1+gamma) - T*ln(x/(1-x)).
/// Roots of f in (0,1) are the QRE; its sign gives the flow direction.
/// Requires x strictly inside (0,1).
double drift(double x, double temp, const GameParams& p);

/// Analytic d/dx of drift:
///   (alpha-1)*x^(alpha-2) + (alpha-1)*(1-x)^(alpha-2) - T/(x*(1-x)).
double drift_derivative(double x, double temp, const GameParams& p);

/// Stationary points of f in x, x_{l,u}(T) = (1 -+ sqrt(1-2T))/2.
/// They exist iff T <= 1/2 and split (0,1) into the analytic root brackets
/// used for alpha = 2.
struct TurningPoints {
  double x_l = 0.0;
  double x_u = 1.0;
  bool defined = false;  // false for T > 1/2
};

TurningPoints turning_points(double temp);

enum class Stability { Stable, Unstable };

struct QrePoint {
  double x = 0.0;
  Stability stability = Stability::Stable;
  double bracket_lo = 0.0;  // interval in which the root was isolated
  double bracket_hi = 0.0;
  double residual = 0.0;    // |f| at the returned point
};

struct QreSet {
  double temp = 0.0;
  std::vector<QrePoint> points;  // ascending in x
  double min_root = 0.0;
  bool at_fold = false;  // alpha = 2 and |T - T_c(gamma)| <= fold_band
};

struct QreOptions {
  double root_tol = 1e-9;     // residual bound |f(x)| at a reported root
  int scan_points = 10000;    // uniform sign scan for alpha != 2
  int max_iter = 2000;        // bisection budget per bracket
  double fold_band = 1e-9;    // |T - T_c| window reported as "at fold"
};

/// All QRE at control level T: roots of drift isolated by sign-change
/// bisection (analytic turning-point partition for alpha = 2, uniform scan
/// otherwise) and refined until the bracket is below 1e-12 and the residual
/// below root_tol. T = 0 is answered in closed form without touching the
/// log term. Stability follows the sign of f on both sides of each root.
QreSet find_qre(double temp, const GameParams& p, const QreOptions& opts = {});

/// Fold point of the alpha = 2 QRE correspondence: the control level at
/// which the two upper QRE merge at x_u(T_c).
struct CriticalPoint {
  double gamma = 0.0;
  double t_c = 0.0;    // in (0, 1/2)
  double x_fold = 0.0;  // x_u(T_c), strictly above (1+gamma)/2
};

/// Solves  u - gamma - (1-u^2)*atanh(u) = 0  for u = sqrt(1-2T) in (0,1)
/// (strictly increasing, so the root is unique) and maps back to
/// T_c = (1-u^2)/2, x_fold = (1+u)/2.
CriticalPoint critical_temperature(double gamma);

/// The unique T >= 0 making x a QRE of the alpha = 2 game,
/// T(x; gamma) = (2x-1-gamma)/ln(x/(1-x)), or nullopt on the exclusion
/// zone [1/2, (1+gamma)/2) where that expression is negative (x = 1/2
/// included: the numerator is negative at the log singularity).
std::optional<double> t_of_x(double x, double gamma);

/// Self-consistency residual of the Boltzmann choice map,
///   x - sigma((u_W(x) - u_S(x))/T),
/// evaluated overflow-free for |u_W-u_S|/T up to 1e4 and beyond.
/// Vanishes exactly at the QRE. Requires T > 0.
double boltzmann_residual(double x, double temp, const GameParams& p);

struct SweepPoint {
  double temp = 0.0;
  QreSet set;
  std::vector<int> branch_ids;  // one id per set.points entry
};

struct SweepOptions {
  QreOptions qre;
  double branch_jump_threshold = 0.1;  // larger x-jumps start a new branch
  int max_threads = 0;                 // 0: CATLAB_THREADS env or hardware
};

/// Bifurcation diagram of the QRE correspondence over an ascending T grid.
/// Branches are labeled by nearest-neighbor continuity in x. Grid points
/// may be solved concurrently; results are emitted in grid order and are
/// bit-identical to a serial run.
std::vector<SweepPoint> sweep_correspondence(double gamma, double alpha,
                                             const std::vector<double>& t_grid,
                                             const SweepOptions& opts = {});

/// Robustness bounds for a bounded state-dependent perturbation
/// |eps(x)| <= eps0 of the alpha = 2 drift.
struct PerturbationBounds {
  double eps0 = 0.0;
  double f_low = 0.0;    // drift at gamma + eps0 (lower envelope at x_query)
  double f_high = 0.0;   // drift at gamma - eps0 (upper envelope at x_query)
  double root_lo = 0.0;  // min QRE at gamma + eps0
  double root_hi = 0.0;  // min QRE at gamma - eps0
  double displacement_bound = 0.0;  // min(eps0/|1-2T|, 1/2)
  double tc_upper_bound = 0.0;      // T_c(gamma - eps0)
  double t_shift_bound = 0.0;       // eps0/|ln(1/x_query - 1)|
};

/// Envelope f(.;gamma+eps0) <= f_eps <= f(.;gamma-eps0) evaluated at
/// x_query, the interval guaranteed to contain the perturbed minimum QRE,
/// the root-displacement bound and the shifted critical level.
/// Requires eps0 in (0, min(gamma, 1-gamma)), T != 1/2, x_query != 1/2.
PerturbationBounds perturbation_bounds(double x_query, double temp, double gamma, double eps0);

}  // namespace catlab

#endif  // CATLAB_QRE_HPP

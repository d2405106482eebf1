#ifndef CATLAB_GAME_HPP
#define CATLAB_GAME_HPP

#include <utility>
#include <vector>

namespace catlab {

/// Two-technology population game in normalized units.
///
/// Payoffs of the costly technology W and the free technology S at
/// population state x (the fraction of capital on W):
///
///   u_W(x) = x^(alpha-1) - gamma,    u_S(x) = (1-x)^(alpha-1)
///
/// where gamma is the per-unit cost of W divided by the raw value scale
/// V*K^(alpha-1), and alpha >= 1 is the network-effect exponent (alpha = 2
/// is the bilinear evolutionary-game case).
struct GameParams {
  double gamma = 0.2;        // normalized cost, in (0,1)
  double alpha = 2.0;        // network-effect exponent, >= 1
  double value_scale = 1.0;  // raw V*K^(alpha-1), kept for unit bookkeeping
  bool normalized = true;    // gamma (and any T fed downstream) already divided by value_scale
};

/// Throws DomainError unless p satisfies gamma in (0,1), alpha >= 1,
/// value_scale > 0.
void validate_params(const GameParams& p);

/// Builds normalized GameParams from raw quantities. Control levels T
/// passed to the solver and simulator must be divided by the returned
/// value_scale as well.
GameParams normalize_params(double raw_gamma, double raw_v, double raw_k, double alpha);

/// Payoff pair (u_W, u_S) at state x in [0,1]. Total on the domain.
std::pair<double, double> payoffs(double x, const GameParams& p);

/// Population-average payoff  x*u_W(x) + (1-x)*u_S(x).
double average_payoff(double x, const GameParams& p);

/// Aggregate payoff of the whole population in raw units,
/// u_A(x) = K * value_scale * average_payoff(x). Needs the capital mass K
/// because GameParams only retains the product V*K^(alpha-1).
double aggregate_payoff(double x, const GameParams& p, double capital);

enum class EssStatus { Ess, NotEss, Unclassified };

struct NashEquilibrium {
  double x = 0.0;
  double avg_payoff = 0.0;
  EssStatus ess = EssStatus::Unclassified;
};

struct NashProfile {
  std::vector<NashEquilibrium> equilibria;  // ascending in x
  bool degenerate = false;                  // alpha == 1: S strictly dominant
};

/// Nash equilibria of the T=0 game. For alpha = 2 the closed-form triple
/// {0, (1+gamma)/2, 1} with ESS labels; for alpha = 1 the single dominant
/// equilibrium x = 0 (degenerate flag set); otherwise {0, x2, 1} with the
/// mixed root located numerically in (1/2, 1) and ESS left unclassified.
NashProfile nash_equilibria(const GameParams& p);

/// Closed-form ESS margin of the mixed equilibrium for alpha = 2:
/// u(x2, x) - u(x, x) = -0.5*(2x - (1+gamma))^2 at probe state x.
/// Strictly negative away from x2, which is why the mixed point is not ESS.
double mixed_ess_margin(double probe_x, const GameParams& p);

}  // namespace catlab

#endif  // CATLAB_GAME_HPP

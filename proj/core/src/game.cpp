#include "catlab/game.hpp"

#include <cmath>
#include <string>

#include "catlab/errors.hpp"

namespace catlab {
namespace {

double pow_or_linear(double base, double expo) {
  // pow(x, 1) is exact, but keep the fast path explicit for alpha = 2.
  return expo == 1.0 ? base : std::pow(base, expo);
}

// T=0 drift x^(alpha-1) - (1-x)^(alpha-1) - gamma, monotone increasing on
// [0,1] for alpha > 1; the interior Nash root lives in (1/2, 1).
double mixed_nash_root(double gamma, double alpha) {
  double lo = 0.5;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = pow_or_linear(mid, alpha - 1.0) - pow_or_linear(1.0 - mid, alpha - 1.0) - gamma;
    if (f == 0.0) return mid;
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate_params(const GameParams& p) {
  if (!(p.alpha >= 1.0)) {
    throw DomainError("alpha: subadditive regime (alpha < 1) unsupported");
  }
  if (!(p.value_scale > 0.0)) {
    throw DomainError("value_scale: must be positive");
  }
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
    throw DomainError("gamma: normalized cost must lie in (0,1), got " + std::to_string(p.gamma));
  }
}

GameParams normalize_params(double raw_gamma, double raw_v, double raw_k, double alpha) {
  if (!(raw_v > 0.0)) throw DomainError("V: must be positive");
  if (!(raw_k > 0.0)) throw DomainError("K: must be positive");
  if (!(raw_gamma > 0.0)) throw DomainError("gamma: must be positive");
  if (!(alpha >= 1.0)) throw DomainError("alpha: subadditive regime (alpha < 1) unsupported");

  GameParams p;
  p.alpha = alpha;
  p.value_scale = raw_v * std::pow(raw_k, alpha - 1.0);
  p.gamma = raw_gamma / p.value_scale;
  p.normalized = true;
  validate_params(p);
  return p;
}

std::pair<double, double> payoffs(double x, const GameParams& p) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x: population state must lie in [0,1]");
  const double a1 = p.alpha - 1.0;
  return {pow_or_linear(x, a1) - p.gamma, pow_or_linear(1.0 - x, a1)};
}

double average_payoff(double x, const GameParams& p) {
  const auto [u_w, u_s] = payoffs(x, p);
  return x * u_w + (1.0 - x) * u_s;
}

double aggregate_payoff(double x, const GameParams& p, double capital) {
  if (!(capital > 0.0)) throw DomainError("K: must be positive");
  return capital * p.value_scale * average_payoff(x, p);
}

NashProfile nash_equilibria(const GameParams& p) {
  validate_params(p);
  NashProfile profile;
  if (p.alpha == 1.0) {
    // u_S(x) = 1 > 1 - gamma = u_W(x) for every x: S strictly dominant.
    profile.degenerate = true;
    profile.equilibria.push_back({0.0, average_payoff(0.0, p), EssStatus::Unclassified});
    return profile;
  }
  if (p.alpha == 2.0) {
    const double x2 = 0.5 * (1.0 + p.gamma);
    profile.equilibria.push_back({0.0, 1.0, EssStatus::Ess});
    profile.equilibria.push_back({x2, 0.5 * (1.0 - p.gamma), EssStatus::NotEss});
    profile.equilibria.push_back({1.0, 1.0 - p.gamma, EssStatus::Ess});
    return profile;
  }
  const double x2 = mixed_nash_root(p.gamma, p.alpha);
  profile.equilibria.push_back({0.0, average_payoff(0.0, p), EssStatus::Unclassified});
  profile.equilibria.push_back({x2, average_payoff(x2, p), EssStatus::Unclassified});
  profile.equilibria.push_back({1.0, average_payoff(1.0, p), EssStatus::Unclassified});
  return profile;
}

double mixed_ess_margin(double probe_x, const GameParams& p) {
  if (p.alpha != 2.0) {
    throw DomainError("alpha: ESS margin is only classified for alpha = 2");
  }
  if (!(probe_x >= 0.0 && probe_x <= 1.0)) {
    throw DomainError("x: population state must lie in [0,1]");
  }
  const double d = 2.0 * probe_x - (1.0 + p.gamma);
  return -0.5 * d * d;
}

}  // namespace catlab

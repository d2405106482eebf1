// Internal numerics shared by the solver and the simulator. Root isolation
// runs in log-odds coordinates z = ln(x/(1-x)): the drift becomes
//   g(z) = sigma(z)^(alpha-1) - sigma(-z)^(alpha-1) - gamma - T*z,
// which stays evaluable even where x = sigma(z) underflows (the extreme QRE
// satisfy |z| ~ (1 +- gamma)/T and leave the representable x range for
// small T).
#ifndef CATLAB_SRC_LOGIT_HPP
#define CATLAB_SRC_LOGIT_HPP

#include <cmath>
#include <limits>

namespace catlab::detail {

inline double logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double logit(double x) { return std::log(x / (1.0 - x)); }

// Drift in z coordinates. alpha == 2 short-circuits to tanh(z/2) - gamma - T*z,
// since sigma(z) - sigma(-z) = tanh(z/2).
inline double drift_z(double z, double temp, double gamma, double alpha) {
  if (alpha == 2.0) {
    return std::tanh(0.5 * z) - gamma - temp * z;
  }
  const double p = logistic(z);
  const double q = logistic(-z);
  return std::pow(p, alpha - 1.0) - std::pow(q, alpha - 1.0) - gamma - temp * z;
}

// Drift in x coordinates, no domain checks. For T = 0 the log term is
// absent, so the expression extends to the closed interval [0,1].
inline double drift_x(double x, double temp, double gamma, double alpha) {
  const double base = alpha == 2.0
                          ? 2.0 * x - (1.0 + gamma)
                          : std::pow(x, alpha - 1.0) - gamma - std::pow(1.0 - x, alpha - 1.0);
  if (temp == 0.0) return base;
  return base - temp * std::log(x / (1.0 - x));
}

struct ZRoot {
  double z = 0.0;
  double residual = 0.0;
  bool stable = false;  // sign of g flips + -> - across the root
};

// Bisection on a strict sign-change bracket [lo, hi] with g(lo) = flo,
// g(hi) = fhi, flo*fhi < 0. Halves until the bracket is tighter than
// 1e-13*(1 + |z|) and the midpoint residual is below root_tol. Returns
// false when max_iter is exhausted before the residual target is met.
template <class G>
bool bisect_z(const G& g, double lo, double hi, double flo, double root_tol, int max_iter,
              ZRoot* out) {
  double mid = 0.5 * (lo + hi);
  double fmid = g(mid);
  for (int it = 0; it < max_iter; ++it) {
    if (fmid == 0.0) break;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) {
      // Bracket narrowed to adjacent doubles.
      mid = next;
      fmid = g(mid);
      break;
    }
    mid = next;
    fmid = g(mid);
    if (hi - lo <= 1e-13 * (1.0 + std::abs(mid)) && std::abs(fmid) <= root_tol) break;
  }
  out->z = mid;
  out->residual = std::abs(fmid);
  out->stable = flo > 0.0;
  return out->residual <= root_tol;
}

}  // namespace catlab::detail

#endif  // CATLAB_SRC_LOGIT_HPP

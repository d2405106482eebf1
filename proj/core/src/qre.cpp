#include "catlab/qre.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "catlab/errors.hpp"
#include "logit.hpp"

namespace catlab {
namespace {

using detail::drift_z;
using detail::logistic;
using detail::logit;
using detail::ZRoot;

void check_interior(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("x: log term requires a state strictly inside (0,1), got " +
                      std::to_string(x));
  }
}

void check_temp(double temp) {
  if (!(temp >= 0.0)) throw DomainError("T: control level must be nonnegative");
}

// Outside [-(1+gamma)/T - slack, (1-gamma)/T + slack] the sign of the
// z-space drift is pinned by |x^(a-1) - (1-x)^(a-1)| < 1, for every alpha.
double cap_lo_z(double temp, double gamma) {
  return -std::min((1.0 + gamma) / temp + 16.0, 1e308);
}
double cap_hi_z(double temp, double gamma) {
  return std::min((1.0 - gamma) / temp + 16.0, 1e308);
}

struct Isolated {
  ZRoot root;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

[[noreturn]] void bisect_failure(double temp, double z_lo, double z_hi) {
  std::ostringstream os;
  os << "find_qre: residual tolerance not reached in bracket ["
     << logistic(z_lo) << ", " << logistic(z_hi) << "] at T=" << temp;
  throw NumericalError(os.str());
}

void bisect_into(double temp, const GameParams& p, const QreOptions& opts, double z_lo,
                 double z_hi, double f_lo, std::vector<Isolated>* out) {
  const auto g = [&](double z) { return drift_z(z, temp, p.gamma, p.alpha); };
  ZRoot r;
  if (!detail::bisect_z(g, z_lo, z_hi, f_lo, opts.root_tol, opts.max_iter, &r)) {
    bisect_failure(temp, z_lo, z_hi);
  }
  out->push_back({r, z_lo, z_hi});
}

QreSet closed_form_nash(const GameParams& p) {
  QreSet set;
  set.temp = 0.0;
  if (p.alpha == 1.0) {
    // f = -gamma everywhere: flow points down, only the boundary states rest.
    set.points.push_back({0.0, Stability::Stable, 0.0, 0.0, 0.0});
    set.points.push_back({1.0, Stability::Unstable, 1.0, 1.0, 0.0});
  } else {
    const double x2 = p.alpha == 2.0 ? 0.5 * (1.0 + p.gamma)
                                     : nash_equilibria(p).equilibria[1].x;
    set.points.push_back({0.0, Stability::Stable, 0.0, 0.0, 0.0});
    set.points.push_back({x2, Stability::Unstable, x2, x2,
                          std::abs(std::pow(x2, p.alpha - 1.0) -
                                   std::pow(1.0 - x2, p.alpha - 1.0) - p.gamma)});
    set.points.push_back({1.0, Stability::Stable, 1.0, 1.0, 0.0});
  }
  set.min_root = set.points.front().x;
  return set;
}

// Analytic partition (0, x_l), (x_l, x_u), (x_u, 1) mapped to z. The sign of
// f at x_u decides whether the two upper roots exist.
void isolate_bilinear(double temp, const GameParams& p, const QreOptions& opts,
                      std::vector<Isolated>* out) {
  const auto g = [&](double z) { return drift_z(z, temp, p.gamma, p.alpha); };
  const double zc_lo = cap_lo_z(temp, p.gamma);
  const double zc_hi = cap_hi_z(temp, p.gamma);
  const double f_cap_lo = g(zc_lo);

  if (temp >= 0.5) {
    // f strictly decreasing: the single root.
    bisect_into(temp, p, opts, zc_lo, zc_hi, f_cap_lo, out);
    return;
  }
  const double u = std::sqrt(1.0 - 2.0 * temp);
  const double z_u = 2.0 * std::atanh(u);  // logit(x_u); logit(x_l) = -z_u
  const double f_at_zl = g(-z_u);
  const double s = g(z_u);

  if ((f_cap_lo > 0.0) != (f_at_zl > 0.0)) {
    bisect_into(temp, p, opts, zc_lo, -z_u, f_cap_lo, out);
  }
  if (s > 0.0) {
    bisect_into(temp, p, opts, -z_u, z_u, f_at_zl, out);
    bisect_into(temp, p, opts, z_u, zc_hi, s, out);
  } else if (s == 0.0) {
    // Exact tangency: the merged upper pair, non-attracting from either side.
    out->push_back({{z_u, 0.0, false}, -z_u, zc_hi});
  }
}

// Uniform sign scan for alpha != 2: logit image of a uniform x grid plus the
// analytic caps (the drift is monotone in the boundary slivers, so a single
// sign check there suffices).
void isolate_scan(double temp, const GameParams& p, const QreOptions& opts,
                  std::vector<Isolated>* out) {
  const auto g = [&](double z) { return drift_z(z, temp, p.gamma, p.alpha); };
  const int n = std::max(opts.scan_points, 16);
  std::vector<double> zs;
  zs.reserve(static_cast<std::size_t>(n) + 2);
  zs.push_back(cap_lo_z(temp, p.gamma));
  for (int i = 1; i <= n; ++i) {
    zs.push_back(logit(static_cast<double>(i) / (n + 1)));
  }
  zs.push_back(cap_hi_z(temp, p.gamma));

  double prev_z = zs[0];
  double prev_f = g(prev_z);
  for (std::size_t i = 1; i < zs.size(); ++i) {
    const double z = zs[i];
    const double f = g(z);
    if (f == 0.0) {
      // Scan point is an exact root; stability from the neighbor signs.
      double right = 0.0;
      for (std::size_t j = i + 1; j < zs.size() && right == 0.0; ++j) right = g(zs[j]);
      const bool stable = prev_f > 0.0 && right < 0.0;
      out->push_back({{z, 0.0, stable}, prev_z, z});
      // Restart the sweep after the zero with the right-side sign.
      prev_z = z;
      prev_f = right != 0.0 ? right : prev_f;
      continue;
    }
    if ((prev_f > 0.0) != (f > 0.0)) {
      bisect_into(temp, p, opts, prev_z, z, prev_f, out);
    }
    prev_z = z;
    prev_f = f;
  }
}

int env_thread_cap() {
  if (const char* env = std::getenv("CATLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

double drift(double x, double temp, const GameParams& p) {
  check_interior(x);
  check_temp(temp);
  return detail::drift_x(x, temp, p.gamma, p.alpha);
}

double drift_derivative(double x, double temp, const GameParams& p) {
  check_interior(x);
  check_temp(temp);
  const double ent = temp / (x * (1.0 - x));
  if (p.alpha == 2.0) return 2.0 - ent;
  const double a1 = p.alpha - 1.0;
  return a1 * std::pow(x, p.alpha - 2.0) + a1 * std::pow(1.0 - x, p.alpha - 2.0) - ent;
}

TurningPoints turning_points(double temp) {
  check_temp(temp);
  if (temp > 0.5) return {0.0, 1.0, false};
  const double s = std::sqrt(1.0 - 2.0 * temp);
  return {0.5 * (1.0 - s), 0.5 * (1.0 + s), true};
}

QreSet find_qre(double temp, const GameParams& p, const QreOptions& opts) {
  validate_params(p);
  check_temp(temp);
  if (temp == 0.0) return closed_form_nash(p);

  std::vector<Isolated> isolated;
  if (p.alpha == 2.0) {
    isolate_bilinear(temp, p, opts, &isolated);
  } else {
    isolate_scan(temp, p, opts, &isolated);
  }
  std::sort(isolated.begin(), isolated.end(),
            [](const Isolated& a, const Isolated& b) { return a.root.z < b.root.z; });

  QreSet set;
  set.temp = temp;
  double prev_z = -std::numeric_limits<double>::infinity();
  for (const Isolated& iso : isolated) {
    if (iso.root.z - prev_z <= 1e-12 * (1.0 + std::abs(iso.root.z))) {
      continue;  // same root reached from two adjacent scan cells
    }
    prev_z = iso.root.z;
    QrePoint pt;
    pt.x = logistic(iso.root.z);
    pt.stability = iso.root.stable ? Stability::Stable : Stability::Unstable;
    pt.bracket_lo = logistic(iso.z_lo);
    pt.bracket_hi = logistic(iso.z_hi);
    pt.residual = iso.root.residual;
    set.points.push_back(pt);
  }
  set.min_root = set.points.empty() ? 0.0 : set.points.front().x;
  if (p.alpha == 2.0) {
    set.at_fold = std::abs(temp - critical_temperature(p.gamma).t_c) <= opts.fold_band;
  }
  return set;
}

CriticalPoint critical_temperature(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("gamma: critical temperature requires gamma in (0,1)");
  }
  // h(u) = u - gamma - (1-u^2)*atanh(u) is strictly increasing on (0,1) with
  // h(0) = -gamma < 0 and h(1-) = 1 - gamma > 0.
  const auto h = [gamma](double u) {
    return u - gamma - (1.0 - u * u) * std::atanh(u);
  };
  double lo = 0.0;
  double hi = 1.0 - 1e-16;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = h(mid);
    if (v == 0.0) {
      lo = hi = mid;
      break;
    }
    (v < 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-17) break;
  }
  const double u = 0.5 * (lo + hi);
  return {gamma, 0.5 * (1.0 - u) * (1.0 + u), 0.5 * (1.0 + u)};
}

std::optional<double> t_of_x(double x, double gamma) {
  check_interior(x);
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("gamma: must lie in (0,1)");
  }
  if (x == 0.5) return std::nullopt;  // log singularity with negative numerator
  const double num = 2.0 * x - 1.0 - gamma;
  if (num == 0.0) return 0.0;  // x = (1+gamma)/2, the Nash boundary of the zone
  const double t = num / logit(x);
  if (t < 0.0) return std::nullopt;
  return t;
}

double boltzmann_residual(double x, double temp, const GameParams& p) {
  if (temp == 0.0) {
    throw DomainError("T: Boltzmann choice map undefined at T = 0");
  }
  check_temp(temp);
  check_interior(x);
  const auto [u_w, u_s] = payoffs(x, p);
  return x - logistic((u_w - u_s) / temp);
}

std::vector<SweepPoint> sweep_correspondence(double gamma, double alpha,
                                             const std::vector<double>& t_grid,
                                             const SweepOptions& opts) {
  GameParams p;
  p.gamma = gamma;
  p.alpha = alpha;
  validate_params(p);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0) {
      throw DomainError("T-grid: levels must be finite and nonnegative");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw DomainError("T-grid: levels must be strictly ascending");
    }
  }

  std::vector<SweepPoint> result(t_grid.size());
  const int threads =
      std::min<int>(opts.max_threads > 0 ? opts.max_threads : env_thread_cap(),
                    std::max<std::size_t>(t_grid.size(), 1));

  std::vector<std::string> failures(t_grid.size());
  std::vector<std::exception_ptr> fatal(threads);
  auto worker = [&](int tid) {
    try {
      for (std::size_t i = tid; i < t_grid.size(); i += threads) {
        result[i].temp = t_grid[i];
        try {
          result[i].set = find_qre(t_grid[i], p, opts.qre);
        } catch (const NumericalError& e) {
          failures[i] = e.what();
        }
      }
    } catch (...) {
      fatal[tid] = std::current_exception();
    }
  };
  if (threads <= 1 || t_grid.size() < 8) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : fatal) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!failures[i].empty()) {
      throw NumericalError("sweep at T=" + std::to_string(t_grid[i]) + ": " + failures[i]);
    }
  }

  // Continuity labels: nearest active branch within the jump threshold,
  // otherwise a fresh id. 1-D branches cannot cross, so greedy matching on
  // the ascending point lists is exact.
  int next_id = 0;
  std::vector<std::pair<double, int>> active;
  for (auto& pt : result) {
    std::vector<bool> used(active.size(), false);
    pt.branch_ids.resize(pt.set.points.size(), -1);
    for (std::size_t k = 0; k < pt.set.points.size(); ++k) {
      const double x = pt.set.points[k].x;
      double best = opts.branch_jump_threshold;
      int best_j = -1;
      for (std::size_t j = 0; j < active.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(active[j].first - x);
        if (d <= best) {
          best = d;
          best_j = static_cast<int>(j);
        }
      }
      if (best_j >= 0) {
        pt.branch_ids[k] = active[best_j].second;
        used[best_j] = true;
      } else {
        pt.branch_ids[k] = next_id++;
      }
    }
    active.clear();
    for (std::size_t k = 0; k < pt.set.points.size(); ++k) {
      active.emplace_back(pt.set.points[k].x, pt.branch_ids[k]);
    }
  }
  return result;
}

PerturbationBounds perturbation_bounds(double x_query, double temp, double gamma, double eps0) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma: must lie in (0,1)");
  const double eps_cap = std::min(gamma, 1.0 - gamma);
  if (!(eps0 > 0.0 && eps0 < eps_cap)) {
    throw DomainError("eps0: admissible amplitudes lie in (0, min(gamma, 1-gamma))");
  }
  check_temp(temp);
  if (temp == 0.5) {
    throw DomainError("T: root displacement bound is singular at T = 1/2");
  }
  check_interior(x_query);
  if (x_query == 0.5) {
    throw DomainError("x: control shift bound diverges at x = 1/2");
  }

  GameParams plus;   // gamma + eps0: lower envelope
  plus.gamma = gamma + eps0;
  GameParams minus;  // gamma - eps0: upper envelope
  minus.gamma = gamma - eps0;

  PerturbationBounds b;
  b.eps0 = eps0;
  b.f_low = drift(x_query, temp, plus);
  b.f_high = drift(x_query, temp, minus);
  b.root_lo = find_qre(temp, plus).min_root;
  b.root_hi = find_qre(temp, minus).min_root;
  b.displacement_bound = std::min(eps0 / std::abs(1.0 - 2.0 * temp), 0.5);
  b.tc_upper_bound = critical_temperature(minus.gamma).t_c;
  b.t_shift_bound = eps0 / std::abs(logit(x_query));
  return b;
}

}  // namespace catlab

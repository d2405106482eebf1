#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "catlab/dynamics.hpp"
#include "catlab/errors.hpp"
#include "catlab/qre.hpp"
#include "frozen.hpp"

using namespace catlab;

namespace {

GameParams params(double gamma, double alpha = 2.0) {
  GameParams p;
  p.gamma = gamma;
  p.alpha = alpha;
  return p;
}

}  // namespace

TEST_CASE("vector field reference values") {
  CHECK(vector_field(0.0, 0.0, params(0.1)) == doctest::Approx(0.0));
  CHECK(vector_field(1.0, 0.0, params(0.1)) == doctest::Approx(0.0));
  CHECK(vector_field(0.5, 0.8, params(0.2)) == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(vector_field(0.9, 0.0, params(0.1)) == doctest::Approx(0.063).epsilon(1e-14));
  CHECK_THROWS_AS(vector_field(0.0, 0.5, params(0.1)), DomainError);
  CHECK_THROWS_AS(vector_field(1.0, 0.5, params(0.1)), DomainError);
  CHECK_THROWS_AS(vector_field(-0.1, 0.0, params(0.1)), DomainError);
}

TEST_CASE("perturbation sampling is deterministic and clamped") {
  const auto constant = PerturbationSpec::constant_bias(0.05);
  CHECK(sample_perturbation(constant, 0.1) == doctest::Approx(0.05));
  CHECK(sample_perturbation(constant, 0.9) == doctest::Approx(0.05));

  const auto a = PerturbationSpec::smooth_random(0.1, 7);
  const auto b = PerturbationSpec::smooth_random(0.1, 7);
  const auto c = PerturbationSpec::smooth_random(0.1, 8);
  bool differs = false;
  for (int i = 1; i < 200; ++i) {
    const double x = static_cast<double>(i) / 200;
    const double va = sample_perturbation(a, x);
    CHECK(va == sample_perturbation(b, x));
    CHECK(std::abs(va) <= 0.1);
    if (va != sample_perturbation(c, x)) differs = true;
  }
  CHECK(differs);

  const auto table = PerturbationSpec::user_table(0.05, {{0.0, -0.2}, {0.5, 0.01}, {1.0, 0.02}});
  CHECK(sample_perturbation(table, 0.0) == doctest::Approx(-0.05));  // clamped
  CHECK(sample_perturbation(table, 0.75) == doctest::Approx(0.015));
  CHECK(sample_perturbation(table, 0.5) == doctest::Approx(0.01));
  CHECK_THROWS_AS(PerturbationSpec::user_table(0.05, {}), DomainError);
  CHECK_THROWS_AS(PerturbationSpec::user_table(0.05, {{0.5, 0.0}, {0.5, 0.1}}), DomainError);
}

TEST_CASE("replicator limit converges to the T = 0 equilibria") {
  const GameParams p = params(0.1);
  const Trajectory up = integrate(0.9, 0.0, p, 1000.0);
  CHECK(up.terminal == TerminalReason::Converged);
  CHECK(std::abs(up.terminal_x - 1.0) <= 1e-6);

  const Trajectory down = integrate(0.3, 0.0, p, 1000.0);
  CHECK(std::abs(down.terminal_x - 0.0) <= 1e-6);

  // The separatrix is a fixed point: a trajectory started there stays.
  const Trajectory pin = integrate(0.55, 0.0, p, 50.0);
  CHECK(pin.terminal_x == doctest::Approx(0.55));
  for (const auto& [t, x] : pin.samples) CHECK(x == doctest::Approx(0.55));
}

TEST_CASE("trajectories are forward invariant and time-ordered for T > 0") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(1e-3, 1.0 - 1e-3);
  for (double temp : {0.05, 0.3, 0.9}) {
    for (int i = 0; i < 5; ++i) {
      const Trajectory tr = integrate(ux(rng), temp, params(0.185), 200.0);
      double prev_t = -1.0;
      for (const auto& [t, x] : tr.samples) {
        CHECK(t > prev_t);
        prev_t = t;
        CHECK(x > 0.0);
        CHECK(x < 1.0);
      }
    }
  }
}

TEST_CASE("unperturbed trajectories are monotone between roots") {
  const Trajectory tr = integrate(0.9, 0.25, params(0.185), 500.0);
  const double dir = tr.samples.back().second - tr.samples.front().second;
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    const double step = tr.samples[i].second - tr.samples[i - 1].second;
    if (dir >= 0.0) {
      CHECK(step >= -1e-15);
    } else {
      CHECK(step <= 1e-15);
    }
  }
}

TEST_CASE("stability agreement around every QRE") {
  const double temp = 0.25;
  const GameParams p = params(0.185);
  const QreSet set = find_qre(temp, p);
  REQUIRE(set.points.size() == 3);
  const double x1 = set.points[0].x;
  const double x2 = set.points[1].x;
  const double x3 = set.points[2].x;

  for (double x0 : {x1 - 1e-3, x1 + 1e-3}) {
    if (x0 <= 0.0) continue;
    CHECK(std::abs(integrate(x0, temp, p, 5000.0).terminal_x - x1) <= 1e-6);
  }
  for (double x0 : {x3 - 1e-3, x3 + 1e-3}) {
    if (x0 >= 1.0) continue;
    CHECK(std::abs(integrate(x0, temp, p, 5000.0).terminal_x - x3) <= 1e-6);
  }
  // The middle root repels to the adjacent stable points.
  CHECK(std::abs(integrate(x2 - 1e-3, temp, p, 5000.0).terminal_x - x1) <= 1e-6);
  CHECK(std::abs(integrate(x2 + 1e-3, temp, p, 5000.0).terminal_x - x3) <= 1e-6);
}

TEST_CASE("integrator shows fourth-order step convergence") {
  const GameParams p = params(0.2);
  const double temp = 0.2;
  const double t_end = 5.0;
  IntegrateOptions opts;
  opts.conv_tol = 0.0;  // disable the detector: fixed-horizon comparison
  opts.max_samples = 8;

  auto terminal = [&](double h) {
    IntegrateOptions o = opts;
    o.step = h;
    return integrate(0.3, temp, p, t_end, nullptr, o).terminal_x;
  };
  const double ref = terminal(1e-4);
  const double e1 = std::abs(terminal(0.05) - ref);
  const double e2 = std::abs(terminal(0.025) - ref);
  const double e3 = std::abs(terminal(0.0125) - ref);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 / e3 >= 8.0);
}

TEST_CASE("integration rejects bad inputs and impossible steps") {
  CHECK_THROWS_AS(integrate(0.5, 0.2, params(0.2), 0.0), DomainError);
  CHECK_THROWS_AS(integrate(0.0, 0.2, params(0.2), 10.0), DomainError);
  CHECK_NOTHROW(integrate(0.0, 0.0, params(0.2), 10.0));

  IntegrateOptions opts;
  opts.step = 1e3;
  opts.min_step = 900.0;  // first halving already violates the floor
  CHECK_THROWS_AS(integrate(0.9, 0.0, params(0.1), 1e4, nullptr, opts), NumericalError);
}

TEST_CASE("stop_below terminates a descent early") {
  IntegrateOptions opts;
  opts.stop_below = 0.3;
  const Trajectory tr = integrate(0.9, 0.4, params(0.185), 1000.0, nullptr, opts);
  CHECK(tr.terminal == TerminalReason::Escaped);
  CHECK(tr.terminal_x < 0.3);
  CHECK(tr.terminal_x > 0.2);
}

TEST_CASE("converge_to_qre certifies the matched equilibrium") {
  const GameParams p = params(0.185);

  const ConvergenceResult high = converge_to_qre(0.999, 0.4, p);
  CHECK(high.reason == TerminalReason::Converged);
  CHECK(high.terminal_x < 0.5);
  CHECK(std::abs(high.terminal_x - frozen::kRootT04) <= 1e-6);
  REQUIRE(high.certificate.matched_point.has_value());
  CHECK(high.certificate.matched_dist <= 1e-6);
  CHECK(high.certificate.exit_speed <= 1e-9);

  // x0 = 0.75 lies above the unstable root x2 = 0.696 at T = 0.25, so the
  // flow climbs to the upper root; x0 = 0.6 sits below x2 and descends.
  const ConvergenceResult up = converge_to_qre(0.75, 0.25, p);
  CHECK(std::abs(up.terminal_x - frozen::kRootsT025[2]) <= 1e-6);
  const ConvergenceResult down = converge_to_qre(0.6, 0.25, p);
  CHECK(std::abs(down.terminal_x - frozen::kRootsT025[0]) <= 1e-6);
}

TEST_CASE("perturbed convergence lands inside the envelope interval") {
  const GameParams p = params(0.3);
  for (std::uint64_t seed : {1ULL, 9ULL, 77ULL}) {
    const auto pert = PerturbationSpec::smooth_random(0.02, seed);
    const ConvergenceResult res = converge_to_qre(0.999, 0.35, p, &pert);
    CHECK(res.reason == TerminalReason::Converged);
    CHECK(!res.certificate.envelope.empty());
    CHECK(res.certificate.in_envelope);
  }
}

TEST_CASE("budget exhaustion is reported, never silent") {
  IntegrateOptions opts;
  opts.conv_tol = 0.0;  // detector cannot fire
  const ConvergenceResult res = converge_to_qre(0.9, 0.25, params(0.185), nullptr, opts, 200.0);
  CHECK(res.reason == TerminalReason::MaxTime);
  CHECK(res.time_spent >= 200.0);
}

TEST_CASE("discrete Q-learning randomizes at high control") {
  const Trajectory tr = discrete_q_learning(0.9, 1e3, params(0.2), {0.5, 200, std::nullopt});
  CHECK(std::abs(tr.terminal_x - 0.5) <= 1e-2);
}

TEST_CASE("discrete Q-learning is stationary at a QRE") {
  const double temp = 0.2;
  const GameParams p = params(0.185);
  const QreSet set = find_qre(temp, p);
  const double x_star = set.points.back().x;
  const auto [u_w, u_s] = payoffs(x_star, p);
  QLearningConfig cfg;
  cfg.delta = 0.1;
  cfg.steps = 1000;
  cfg.q_init = std::make_pair(u_w, u_s);
  const Trajectory tr = discrete_q_learning(x_star, temp, p, cfg);
  for (const auto& [t, x] : tr.samples) {
    CHECK(std::abs(x - x_star) <= 1e-6);
  }
}

TEST_CASE("discrete Q-learning settles on the frozen upper root") {
  QLearningConfig cfg;
  cfg.delta = 0.1;
  cfg.steps = 100000;
  const Trajectory tr = discrete_q_learning(0.9, 0.05, params(0.185), cfg);
  CHECK(std::abs(tr.terminal_x - frozen::kRootsT005[2]) <= 1e-3);
}

TEST_CASE("discrete and continuous dynamics agree on terminal states") {
  const GameParams p = params(0.185);
  QLearningConfig cfg;
  cfg.delta = 0.05;
  cfg.steps = 200000;
  for (double temp : {0.05, 0.2, 0.5}) {
    for (double x0 : {0.9, 0.3}) {
      const double discrete = discrete_q_learning(x0, temp, p, cfg).terminal_x;
      const double continuous = converge_to_qre(x0, temp, p).terminal_x;
      CHECK(std::abs(discrete - continuous) <= 1e-2);
    }
  }
}

TEST_CASE("discrete Q-learning validates its inputs") {
  CHECK_THROWS_AS(discrete_q_learning(0.9, 0.0, params(0.2), {}), DomainError);
  QLearningConfig bad_delta;
  bad_delta.delta = 0.0;
  CHECK_THROWS_AS(discrete_q_learning(0.9, 0.1, params(0.2), bad_delta), DomainError);
  bad_delta.delta = 1.5;
  CHECK_THROWS_AS(discrete_q_learning(0.9, 0.1, params(0.2), bad_delta), DomainError);
  QLearningConfig bad_steps;
  bad_steps.steps = 0;
  CHECK_THROWS_AS(discrete_q_learning(0.9, 0.1, params(0.2), bad_steps), DomainError);
  CHECK_THROWS_AS(discrete_q_learning(0.0, 0.1, params(0.2), {}), DomainError);
}

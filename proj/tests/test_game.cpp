#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catlab/errors.hpp"
#include "catlab/game.hpp"

using namespace catlab;

namespace {

GameParams params(double gamma, double alpha = 2.0) {
  GameParams p;
  p.gamma = gamma;
  p.alpha = alpha;
  return p;
}

// Payoff of mixed strategy p against population mix q in the normalized
// bilinear game: rows (W,S) vs columns (W,S) with entries
// [[1-gamma, -gamma], [0, 1]].
double game_payoff(double p, double q, double gamma) {
  return p * (q * (1.0 - gamma) + (1.0 - q) * (-gamma)) + (1.0 - p) * (1.0 - q);
}

}  // namespace

TEST_CASE("normalize_params divides by the raw value scale") {
  const GameParams p = normalize_params(1.0, 10.0, 4.0, 2.0);
  CHECK(p.gamma == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(p.value_scale == doctest::Approx(40.0));
  CHECK(p.normalized);

  const GameParams q = normalize_params(0.2, 1.0, 1.0, 2.0);
  CHECK(q.gamma == doctest::Approx(0.2));
  CHECK(q.value_scale == doctest::Approx(1.0));
}

TEST_CASE("normalize_params rejects the boundary and bad regimes") {
  // gamma/(V*K^(alpha-1)) = 4/4 = 1 sits outside the open admissible region.
  CHECK_THROWS_AS(normalize_params(4.0, 1.0, 2.0, 3.0), DomainError);
  CHECK_THROWS_AS(normalize_params(0.2, 1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(normalize_params(-0.1, 1.0, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(normalize_params(0.2, 0.0, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(normalize_params(0.2, 1.0, -2.0, 2.0), DomainError);
}

TEST_CASE("payoffs at reference points") {
  auto [w1, s1] = payoffs(1.0, params(0.2));
  CHECK(w1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s1 == doctest::Approx(0.0));

  auto [w2, s2] = payoffs(0.5, params(0.5));
  CHECK(w2 == doctest::Approx(0.0));
  CHECK(s2 == doctest::Approx(0.5));

  auto [w3, s3] = payoffs(0.5, params(0.1, 3.0));
  CHECK(w3 == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(s3 == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(payoffs(-0.1, params(0.2)), DomainError);
  CHECK_THROWS_AS(payoffs(1.1, params(0.2)), DomainError);
}

TEST_CASE("average payoff matches the Nash reference values") {
  CHECK(average_payoff(0.0, params(0.37)) == doctest::Approx(1.0));
  CHECK(average_payoff(0.6, params(0.2)) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(average_payoff(1.0, params(0.3)) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("average payoff equals the bilinear closed form on a grid") {
  const GameParams p = params(0.3);
  for (int i = 0; i <= 1000; ++i) {
    const double x = static_cast<double>(i) / 1000;
    const double closed = 2.0 * x * x - (2.0 + p.gamma) * x + 1.0;
    CHECK(std::abs(average_payoff(x, p) - closed) <= 1e-12);
  }
}

TEST_CASE("aggregate payoff carries the raw units") {
  const GameParams p = normalize_params(1.0, 10.0, 4.0, 2.0);
  // u_A(x) = V*K^alpha * (x^2 - gamma_n*x + (1-x)^2) with V=10, K=4.
  CHECK(aggregate_payoff(0.0, p, 4.0) == doctest::Approx(160.0));
  CHECK(aggregate_payoff(1.0, p, 4.0) == doctest::Approx(160.0 * (1.0 - 0.025)));
  CHECK_THROWS_AS(aggregate_payoff(0.5, p, 0.0), DomainError);
}

TEST_CASE("nash equilibria for the bilinear game") {
  const NashProfile profile = nash_equilibria(params(0.2));
  REQUIRE(profile.equilibria.size() == 3);
  CHECK(!profile.degenerate);
  CHECK(profile.equilibria[0].x == doctest::Approx(0.0));
  CHECK(profile.equilibria[1].x == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(profile.equilibria[2].x == doctest::Approx(1.0));
  CHECK(profile.equilibria[0].avg_payoff == doctest::Approx(1.0));
  CHECK(profile.equilibria[1].avg_payoff == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(profile.equilibria[2].avg_payoff == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(profile.equilibria[0].ess == EssStatus::Ess);
  CHECK(profile.equilibria[1].ess == EssStatus::NotEss);
  CHECK(profile.equilibria[2].ess == EssStatus::Ess);
}

TEST_CASE("mixed equilibrium approaches 1/2 as the cost vanishes") {
  const NashProfile profile = nash_equilibria(params(1e-12));
  CHECK(profile.equilibria[1].x == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("nash equilibria for cubic network effects") {
  // x^2 - (1-x)^2 - gamma = 2x - 1 - gamma: the mixed root is exactly 0.6.
  const NashProfile profile = nash_equilibria(params(0.2, 3.0));
  REQUIRE(profile.equilibria.size() == 3);
  CHECK(std::abs(profile.equilibria[1].x - 0.6) <= 1e-12);
  for (const auto& eq : profile.equilibria) {
    CHECK(eq.ess == EssStatus::Unclassified);
  }
}

TEST_CASE("alpha = 1 degenerates to the dominant technology") {
  const NashProfile profile = nash_equilibria(params(0.2, 1.0));
  CHECK(profile.degenerate);
  REQUIRE(profile.equilibria.size() == 1);
  CHECK(profile.equilibria[0].x == doctest::Approx(0.0));
}

TEST_CASE("ESS margin equals the direct strategy-vs-strategy payoff gap") {
  const double gamma = 0.2;
  const GameParams p = params(gamma);
  const double x2 = 0.5 * (1.0 + gamma);
  for (int i = 1; i < 100; ++i) {
    const double x = static_cast<double>(i) / 100;
    const double direct = game_payoff(x2, x, gamma) - game_payoff(x, x, gamma);
    CHECK(std::abs(mixed_ess_margin(x, p) - direct) <= 1e-12);
    if (std::abs(x - x2) > 1e-9) CHECK(mixed_ess_margin(x, p) < 0.0);
  }
  CHECK(mixed_ess_margin(x2, p) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mixed_ess_margin(0.5, params(0.2, 3.0)), DomainError);
}

TEST_CASE("aggregate welfare shape across network regimes") {
  // alpha = 2: the maximum over [0,1] sits at x = 0.
  const GameParams p2 = params(0.25);
  double best_x = -1.0;
  double best = -1e9;
  for (int i = 0; i <= 1000; ++i) {
    const double x = static_cast<double>(i) / 1000;
    const double u = average_payoff(x, p2);
    if (u > best) {
      best = u;
      best_x = x;
    }
  }
  CHECK(best_x == doctest::Approx(0.0));

  // alpha = 1: affine and strictly decreasing for gamma > 0.
  const GameParams p1 = params(0.25, 1.0);
  double prev = average_payoff(0.0, p1);
  for (int i = 1; i <= 100; ++i) {
    const double x = static_cast<double>(i) / 100;
    const double u = average_payoff(x, p1);
    CHECK(std::abs(u - (1.0 - p1.gamma * x)) <= 1e-12);
    CHECK(u < prev);
    prev = u;
  }
}

TEST_CASE("validate_params guards the admissible region") {
  CHECK_THROWS_AS(validate_params(params(0.0)), DomainError);
  CHECK_THROWS_AS(validate_params(params(1.0)), DomainError);
  CHECK_THROWS_AS(validate_params(params(0.5, 0.99)), DomainError);
  GameParams bad = params(0.5);
  bad.value_scale = 0.0;
  CHECK_THROWS_AS(validate_params(bad), DomainError);
  CHECK_NOTHROW(validate_params(params(0.5, 7.25)));
}

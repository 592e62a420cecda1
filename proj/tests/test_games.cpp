#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/games.hpp"
#include "parrondo/patterns.hpp"

using namespace parrondo;
using oracle::q;

namespace {

ParamPoint<Rational> capital_point(const Rational& rho, const Rational& gamma = 0,
                                   const Rational& eps = 0) {
  ParamPoint<Rational> p;
  p.family = Family::capital;
  p.rho = rho;
  p.gamma = gamma;
  p.eps = eps;
  return p;
}

ParamPoint<Rational> history_point(const Rational& k, const Rational& l,
                                   const Rational& gamma = 0, const Rational& eps = 0) {
  ParamPoint<Rational> p;
  p.family = Family::history;
  p.kappa = k;
  p.lambda = l;
  p.gamma = gamma;
  p.eps = eps;
  return p;
}

}  // namespace

TEST_CASE("family names") {
  CHECK(parse_family("capital") == Family::capital);
  CHECK(parse_family("history") == Family::history);
  CHECK_THROWS_AS(parse_family("profit"), ParseError);
}

TEST_CASE("game B probabilities") {
  const GameChain<Rational> b = capital_game_B<Rational>(q(1, 3), q(0));
  CHECK(b.transition(0, 1) == q(1, 10));
  CHECK(b.transition(1, 2) == q(3, 4));
  CHECK(b.transition(2, 0) == q(3, 4));
  CHECK(b.payoff(0, 2) == -1);
  const GameChain<Rational> h = history_game_B<Rational>(q(1, 9), q(1, 3), q(0));
  CHECK(h.transition(0, 1) == q(9, 10));
  CHECK(h.transition(1, 3) == q(1, 4));
  CHECK(h.transition(2, 1) == q(1, 4));
  CHECK(h.transition(3, 3) == q(7, 10));
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(capital_game_B<Rational>(q(0), q(0)), DomainError);
  CHECK_THROWS_AS(history_game_B<Rational>(q(1), q(2), q(0)), DomainError);
  CHECK_THROWS_AS(history_game_B<Rational>(q(-1), q(1, 2), q(0)), DomainError);
  CHECK_THROWS_AS(capital_game_A<Rational>(q(-1, 10)), DomainError);
  CHECK_THROWS_AS(capital_game_B<Rational>(q(1, 3), q(1, 10)), DomainError);
  CHECK_THROWS_AS(make_mixture(capital_point(q(1, 3), q(3, 2))), DomainError);
}

TEST_CASE("game A: mu = -2 eps and sigma2 = 1 - 4 eps^2 exactly") {
  for (const Rational& eps : {q(0), q(1, 100), q(1, 7), q(3, 10), q(49, 100)}) {
    for (const GameChain<Rational>& a : {capital_game_A(eps), history_game_A(eps)}) {
      const LimitParams<Rational> lp = limit_params(a);
      CHECK(lp.mu == -2 * eps);
      CHECK(lp.sigma2 == 1 - 4 * eps * eps);
    }
  }
}

TEST_CASE("reference constants for B and the mixtures") {
  const auto cb = limit_params(make_games(capital_point(q(1, 3))).b);
  CHECK(cb.mu == 0);
  CHECK(cb.sigma2 == q(81, 169));
  const auto cc = limit_params(make_mixture(capital_point(q(1, 3), q(1, 2))));
  CHECK(cc.mu == q(18, 709));
  CHECK(cc.sigma2 == Rational(311313105) / Rational(356400829));
  const auto hb = limit_params(make_games(history_point(q(1, 9), q(1, 3))).b);
  CHECK(hb.mu == 0);
  CHECK(hb.sigma2 == q(235, 198));
  const auto hc = limit_params(make_mixture(history_point(q(1, 9), q(1, 3), q(1, 2))));
  CHECK(hc.mu == q(5, 429));
  CHECK(hc.sigma2 == Rational(25324040) / Rational(26317863));
}

TEST_CASE("mixtures match the oracle at random points") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 15; ++i) {
    const Rational rho = oracle::random_positive(rng);
    const Rational gamma = oracle::random_probability(rng);
    const Rational eps = q(1, 1000) * (i % 3);
    oracle::Mat pa, wa, pb, wb;
    oracle::capital({q(1, 2) - eps, q(1, 2) - eps, q(1, 2) - eps}, pa, wa);
    oracle::capital(oracle::capital_B(rho, eps), pb, wb);
    oracle::Mat pc = oracle::zeros(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) pc[r][c] = gamma * pa[r][c] + (1 - gamma) * pb[r][c];
    if (oracle::capital_B(rho, eps)[0] <= 0) continue;
    const oracle::Limits ref = oracle::limits(pc, wa);
    const auto got = limit_params(make_mixture(capital_point(rho, gamma, eps)));
    CHECK(got.mu == ref.mu);
    CHECK(got.sigma2 == ref.sigma2);
  }
  for (int i = 0; i < 15; ++i) {
    const Rational k = oracle::random_positive(rng);
    Rational l = oracle::random_positive(rng);
    if (l >= 1 + k) l = (1 + k) / 2;
    const Rational gamma = oracle::random_probability(rng);
    oracle::Mat pa, wa, pb, wb;
    oracle::history({q(1, 2), q(1, 2), q(1, 2), q(1, 2)}, pa, wa);
    oracle::history(oracle::history_B(k, l, 0), pb, wb);
    oracle::Mat pc = oracle::zeros(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) pc[r][c] = gamma * pa[r][c] + (1 - gamma) * pb[r][c];
    const oracle::Limits ref = oracle::limits(pc, wa);
    const auto got = limit_params(make_mixture(history_point(k, l, gamma)));
    CHECK(got.mu == ref.mu);
    CHECK(got.sigma2 == ref.sigma2);
  }
}

TEST_CASE("property: rho -> 1/rho negates mu and keeps sigma2") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10; ++i) {
    const Rational rho = oracle::random_positive(rng);
    const Rational gamma = oracle::random_probability(rng);
    const auto b1 = limit_params(make_games(capital_point(rho)).b);
    const auto b2 = limit_params(make_games(capital_point(1 / rho)).b);
    CHECK(b2.mu == -b1.mu);
    CHECK(b2.sigma2 == b1.sigma2);
    const auto c1 = limit_params(make_mixture(capital_point(rho, gamma)));
    const auto c2 = limit_params(make_mixture(capital_point(1 / rho, gamma)));
    CHECK(c2.mu == -c1.mu);
    CHECK(c2.sigma2 == c1.sigma2);
    for (int r = 1; r <= 3; ++r)
      for (int s = 1; s <= 3; ++s) {
        const GamePair<Rational> g1 = make_games(capital_point(rho));
        const GamePair<Rational> g2 = make_games(capital_point(1 / rho));
        CHECK(pattern_mean_direct(g2.a, g2.b, r, s) == -pattern_mean_direct(g1.a, g1.b, r, s));
      }
  }
}

TEST_CASE("first-order coefficients in eps by Richardson extrapolation") {
  // Raw builders accept p(0) -/+ h, so the difference can straddle eps = 0.
  const double rho = 1.0 / 3.0;
  auto capital_mu_B = [&](double e) {
    return limit_params(capital_chain<double>(rho * rho / (1 + rho * rho) - e, 1 / (1 + rho) - e,
                                              1 / (1 + rho) - e))
        .mu;
  };
  CHECK(oracle::derivative(capital_mu_B, 0.0, 1e-4) ==
        doctest::Approx(-294.0 / 169.0).epsilon(1e-6));

  const double k = 1.0 / 9.0, l = 1.0 / 3.0;
  auto history_mu_B = [&](double e) {
    return limit_params(history_chain<double>(1 / (1 + k) - e, l / (1 + l) - e, l / (1 + l) - e,
                                              1 - l / (1 + k) - e))
        .mu;
  };
  CHECK(oracle::derivative(history_mu_B, 0.0, 1e-4) == doctest::Approx(-20.0 / 9.0).epsilon(1e-6));

  auto capital_mu_11 = [&](double e) {
    const GameChain<double> a = capital_chain<double>(0.5 - e, 0.5 - e, 0.5 - e);
    const GameChain<double> b = capital_chain<double>(rho * rho / (1 + rho * rho) - e,
                                                      1 / (1 + rho) - e, 1 / (1 + rho) - e);
    return pattern_mean_direct(a, b, 1, 1);
  };
  const double r2 = rho * rho;
  const double expected = -3 * (1 + 2 * rho + 18 * r2 + 2 * r2 * rho + r2 * r2) /
                          (4 * (1 + rho + r2) * (1 + rho + r2));
  CHECK(expected == doctest::Approx(-228.0 / 169.0).epsilon(1e-12));
  CHECK(oracle::derivative(capital_mu_11, 0.0, 1e-4) == doctest::Approx(expected).epsilon(1e-6));
}

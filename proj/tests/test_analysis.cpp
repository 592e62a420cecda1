#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "parrondo/analysis.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/spectral.hpp"

using namespace parrondo;
using oracle::q;

namespace {

ParamPoint<Rational> capital_point(const Rational& rho, const Rational& gamma = 0) {
  ParamPoint<Rational> p;
  p.family = Family::capital;
  p.rho = rho;
  p.gamma = gamma;
  return p;
}

ParamPoint<Rational> history_point(const Rational& k, const Rational& l, const Rational& gamma = 0) {
  ParamPoint<Rational> p;
  p.family = Family::history;
  p.kappa = k;
  p.lambda = l;
  p.gamma = gamma;
  return p;
}

Rational pow_int(const Rational& x, int n) {
  Rational out(1);
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

}  // namespace

TEST_CASE("mixture signs") {
  const MixtureSign c = mixture_sign_capital(q(1, 3), q(1, 2));
  CHECK(c.mu == q(18, 709));
  CHECK(c.outcome == Outcome::winning);
  CHECK(mixture_sign_capital(q(1), q(1, 2)).outcome == Outcome::fair);
  const MixtureSign c3 = mixture_sign_capital(q(3), q(1, 2));
  CHECK(c3.mu == q(-18, 709));
  CHECK(c3.outcome == Outcome::losing);

  const MixtureSign h = mixture_sign_history(q(1, 9), q(1, 3), q(1, 2));
  CHECK(h.mu == q(5, 429));
  CHECK(h.outcome == Outcome::winning);
  CHECK(mixture_sign_history(q(1, 2), q(1, 2), q(1, 2)).outcome == Outcome::fair);
  CHECK(mixture_sign_history(q(1), q(3, 2), q(1, 2)).outcome == Outcome::losing);
  CHECK_THROWS_AS(mixture_sign_capital(q(1, 3), q(1)), DomainError);
  CHECK_THROWS_AS(mixture_sign_history(q(1), q(3), q(1, 2)), DomainError);
}

TEST_CASE("mixture sign grids") {
  for (const char* rho : {"1/5", "1/3", "1/2", "2/3", "1", "3/2", "2", "5"})
    for (const char* gamma : {"1/10", "1/2", "9/10"}) {
      const Rational x = parse_rational(rho);
      const Outcome want = x < 1 ? Outcome::winning : x == 1 ? Outcome::fair : Outcome::losing;
      CHECK(mixture_sign_capital(x, parse_rational(gamma)).outcome == want);
    }
  for (const char* k : {"1/9", "1/3", "1/2", "1", "2", "5"})
    for (const char* l : {"1/8", "1/3", "1/2", "1", "3/2", "3"}) {
      const Rational kk = parse_rational(k), ll = parse_rational(l);
      if (ll >= 1 + kk) continue;
      Outcome want = Outcome::losing;
      if (kk == ll || ll == 1) want = Outcome::fair;
      else if ((kk < ll && ll < 1) || (kk > ll && ll > 1)) want = Outcome::winning;
      CAPTURE(k);
      CAPTURE(l);
      CHECK(mixture_sign_history(kk, ll, q(1, 2)).outcome == want);
    }
}

TEST_CASE("pattern sign grid for the capital family") {
  for (const char* rho : {"1/5", "1/3", "1/2", "2/3", "3/2", "2", "5"}) {
    const Rational x = parse_rational(rho);
    const GamePair<Rational> g = make_games(capital_point(x));
    for (int r = 1; r <= 4; ++r)
      for (int s = 1; s <= 4; ++s) {
        const Rational mu = pattern_mean_direct(g.a, g.b, r, s);
        CAPTURE(rho);
        CAPTURE(r);
        CAPTURE(s);
        if (r == 1 && s == 1) CHECK(mu == 0);
        else CHECK(sign(mu) == (x < 1 ? 1 : -1));
      }
  }
}

TEST_CASE("simple pattern closed forms") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    const Rational rho = oracle::random_positive(rng);
    const GamePair<Rational> g = make_games(capital_point(rho));
    const Rational one(1);
    const Rational base = pow_int(one - rho, 3) * (one + rho);
    const Rational m12 = base * (1 + 2 * rho + pow_int(rho, 2) + 2 * pow_int(rho, 3) + pow_int(rho, 4)) /
                         (3 + 12 * rho + 20 * pow_int(rho, 2) + 28 * pow_int(rho, 3) +
                          36 * pow_int(rho, 4) + 28 * pow_int(rho, 5) + 20 * pow_int(rho, 6) +
                          12 * pow_int(rho, 7) + 3 * pow_int(rho, 8));
    const Rational m21 = base / (10 + 20 * rho + 21 * pow_int(rho, 2) + 20 * pow_int(rho, 3) +
                                 10 * pow_int(rho, 4));
    const Rational m22 = 3 * base / (8 * (3 + 6 * rho + 7 * pow_int(rho, 2) + 6 * pow_int(rho, 3) +
                                          3 * pow_int(rho, 4)));
    CHECK(pattern_mean_direct(g.a, g.b, 1, 2) == m12);
    CHECK(pattern_mean_direct(g.a, g.b, 2, 1) == m21);
    CHECK(pattern_mean_direct(g.a, g.b, 2, 2) == m22);
  }
  for (int i = 0; i < 10; ++i) {
    const Rational k = oracle::random_positive(rng);
    Rational l = oracle::random_positive(rng);
    if (l >= 1 + k) l = k / 2;
    const GamePair<Rational> g = make_games(history_point(k, l));
    const Rational one(1);
    CHECK(pattern_mean_direct(g.a, g.b, 1, 1) ==
          (l - k) * (one - l) / (2 * (2 + k + l) * (one + l)));
    for (int r = 2; r <= 3; ++r) {
      CHECK(pattern_mean_direct(g.a, g.b, r, 1) ==
            (l - k) * (one - l) / (2 * (r + 1) * (one + k) * (one + l)));
      CHECK(pattern_mean_direct(g.a, g.b, r, 2) ==
            (l - k) * (one - l) * (1 + 2 * k - l) / (2 * (r + 2) * (one + k) * (one + k) * (one + l)));
    }
  }
}

TEST_CASE("fairness epsilon") {
  const ParamPoint<Rational> c = capital_point(q(1, 3), q(1, 2));
  const EpsilonResult res = fairness_epsilon(c, PlayTarget::mixture());
  CHECK_FALSE(res.saturated);
  CHECK(res.upper - res.lower <= q(1, 1000000000000LL));
  CHECK(res.eps0 > 0);
  const Rational e0 = to_rational(res.eps0);
  const Rational delta(1, 1000000000);
  CHECK(target_mean(c, PlayTarget::mixture(), e0 - delta) > 0);
  CHECK(target_mean(c, PlayTarget::mixture(), e0 + delta) < 0);

  CHECK_THROWS_AS(fairness_epsilon(capital_point(q(3), q(1, 2)), PlayTarget::mixture()), DomainError);

  const EpsilonResult h = fairness_epsilon(history_point(q(1, 9), q(1, 3)), PlayTarget::ab(2, 2));
  CHECK(h.eps0 > 0);
  CHECK(target_mean(history_point(q(1, 9), q(1, 3)), PlayTarget::ab(2, 2), h.lower) > 0);

  CHECK(epsilon_max(c) == q(1, 10) - q(1, 1000000000));
}

TEST_CASE("large-s limits") {
  CHECK(capital_limit_closed(q(1, 3), 1) == q(24, 169));
  CHECK(history_limit_closed(q(1, 9), q(1, 3)) == q(5, 99));
  for (const char* rho : {"1/5", "1/3", "1/2", "2", "7/3"}) {
    const Rational x = parse_rational(rho);
    const GamePair<Rational> g = make_games(capital_point(x));
    for (int r = 1; r <= 5; ++r) CHECK(pattern_limit(g.a, g.b, r) == capital_limit_closed(x, r));
  }
  for (const auto& [k, l] : {std::pair{q(1, 9), q(1, 3)}, std::pair{q(1, 3), q(1, 9)},
                             std::pair{q(3), q(3, 2)}, std::pair{q(1), q(3, 2)}, std::pair{q(4), q(9, 2)}}) {
    const GamePair<Rational> g = make_games(history_point(k, l));
    for (int r = 1; r <= 5; ++r) CHECK(pattern_limit(g.a, g.b, r) == history_limit_closed(k, l));
  }
}

TEST_CASE("(r+s) mu_[r,s] approaches the limit") {
  const GamePair<double> g = make_games(cast_point<double>(capital_point(q(1, 3))));
  const double e2 = std::abs(capital_spectrum(1.0 / 3.0).e2);
  for (int r = 1; r <= 3; ++r) {
    CAPTURE(r);
    const double lim = to_float(capital_limit_closed(q(1, 3), r));
    double prev = 0;
    for (int s = 1; s <= 40; ++s) {
      const double gap = (r + s) * pattern_mean_direct(g.a, g.b, r, s) - lim;
      if (s > 1) CHECK(gap * prev < 0);
      if (s == 40) {
        CHECK(std::abs(gap / prev) == doctest::Approx(e2).epsilon(1e-2));
        CHECK(std::abs(gap) < 1e-3);
      }
      prev = gap;
    }
  }
}

TEST_CASE("fair-surface convexity") {
  const ConvexityReport c = capital_fair_convexity(q(1, 10));
  CHECK(c.convex_along_segment);
  CHECK(c.second_derivative > 0);
  CHECK(capital_fair_convexity(q(9, 10)).second_derivative < 0);
  CHECK(std::abs(capital_fair_convexity(q(1, 2)).second_derivative) < 1e-12);
  // g'' against a central second difference.
  auto g = [](double p) { return 1 / (1 + std::sqrt(p / (1 - p))); };
  for (double p : {0.05, 0.2, 0.35, 0.7}) {
    const double h = 1e-4;
    const double fd = (g(p + h) - 2 * g(p) + g(p - h)) / (h * h);
    CHECK(capital_fair_convexity(to_rational(p)).second_derivative == doctest::Approx(fd).epsilon(1e-4));
  }

  const ConvexityReport h = history_fair_convexity(q(9, 10), q(1, 4));
  CHECK(h.convex_along_segment);
  CHECK(h.sign > 0);
  const ConvexityReport flat = history_fair_convexity(q(1, 2), q(1, 2));
  CHECK(flat.sign == 0);
  CHECK(flat.second_derivative == 0);
  CHECK_FALSE(history_fair_convexity(q(1, 2), q(3, 5)).convex_along_segment);
  CHECK_THROWS_AS(history_fair_convexity(q(9, 10), q(9, 10)), DomainError);
}

TEST_CASE("region grids") {
  const RegionGrid h = region_grid(Family::history, {{"kappa", q(0), q(5), 50}, {"lambda", q(0), q(5), 50}},
                                   PlayTarget::mixture(), q(1, 2), 2);
  CHECK(h.cells.size() == 2500);
  std::size_t valid = 0;
  for (const GridCell& c : h.cells) {
    const Rational& k = c.params[0];
    const Rational& l = c.params[1];
    CHECK(c.valid == (l < 1 + k));
    if (!c.valid) continue;
    ++valid;
    REQUIRE(c.mu);
    Outcome want = Outcome::losing;
    if (k == l || l == 1) want = Outcome::fair;
    else if ((k < l && l < 1) || (k > l && l > 1)) want = Outcome::winning;
    CHECK(c.outcome == want);
    CHECK(c.outcome == classify(*c.mu));
    CHECK(c.region >= 0);
  }
  CHECK(valid > 1000);

  const RegionGrid c = region_grid(Family::capital, {{"rho", q(0), q(3), 30}}, PlayTarget::ab(3, 2), q(1, 2));
  for (const GridCell& cell : c.cells) {
    const Rational& rho = cell.params[0];
    CHECK(sign(*cell.mu) == (rho < 1 ? 1 : rho == 1 ? 0 : -1));
  }

  const RegionGrid one = region_grid(Family::capital, {{"rho", q(1, 2), q(1), 1}}, PlayTarget::mixture(), q(1, 2));
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].params[0] == q(3, 4));
  const std::string csv = grid_csv(one);
  CHECK(csv.rfind("rho,mu_float,mu_exact,classification,region\n", 0) == 0);
  CHECK(csv.find("3/4,") != std::string::npos);
  CHECK(grid_json(one).find("\"schema\": \"parrondo/1\"") != std::string::npos);
  CHECK_THROWS_AS(region_grid(Family::history, {{"kappa", q(0), q(1), 2}}, PlayTarget::mixture(), q(1, 2)),
                  DomainError);
}

TEST_CASE("grid output does not depend on the thread count") {
  const std::vector<GridAxis> axes{{"kappa", q(0), q(3), 12}, {"lambda", q(0), q(3), 12}};
  const RegionGrid a = region_grid(Family::history, axes, PlayTarget::ab(2, 1), q(1, 2), 1);
  const RegionGrid b = region_grid(Family::history, axes, PlayTarget::ab(2, 1), q(1, 2), 3);
  CHECK(grid_csv(a) == grid_csv(b));
}

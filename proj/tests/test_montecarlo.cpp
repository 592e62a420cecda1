#include <cmath>

#include "doctest.h"
#include "parrondo/errors.hpp"
#include "parrondo/games.hpp"
#include "parrondo/montecarlo.hpp"
#include "parrondo/patterns.hpp"

using namespace parrondo;

namespace {

SimConfig config_for(std::vector<GameChain<double>> phases, std::int64_t n, int reps,
                     std::uint64_t seed) {
  SimConfig c;
  c.phases = std::move(phases);
  c.n_games = n;
  c.replications = reps;
  c.master_seed = seed;
  return c;
}

std::vector<GameChain<double>> capital_22(double rho) {
  const GameChain<double> a = capital_game_A(0.0);
  const GameChain<double> b = capital_game_B(rho, 0.0);
  return {a, a, b, b};
}

}  // namespace

TEST_CASE("SplitMix64 reference outputs") {
  // First outputs of the standard SplitMix64 sequence seeded with 0.
  SplitMix64 g(0);
  CHECK(g.next() == 0xE220A8397B1DCDAFULL);
  CHECK(g.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(g.next() == 0x06C45D188009454FULL);
  SplitMix64 u(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("results are deterministic across thread counts") {
  SimConfig c = config_for(capital_22(1.0 / 3), 20000, 8, 99);
  c.threads = 1;
  const SimResult a = simulate(c);
  c.threads = 4;
  const SimResult b = simulate(c);
  CHECK(a.finals == b.finals);
  CHECK(a.mean_per_game == b.mean_per_game);
  c.master_seed = 100;
  CHECK(simulate(c).finals != a.finals);

  SimConfig two = config_for({capital_game_A(0.0)}, 1000, 2, 5);
  CHECK(simulate(two).finals == simulate(two).finals);
}

TEST_CASE("fair coin stays near zero and paths are bounded") {
  const std::int64_t n = 1000000;
  const SimResult r = simulate(config_for({capital_game_A(0.0)}, n, 1, 1));
  CHECK(std::abs(r.mean_per_game) < 5 / std::sqrt(static_cast<double>(n)));
  const SimResult s = simulate(config_for(capital_22(1.0 / 3), 5000, 50, 2));
  for (std::int64_t v : s.finals) CHECK(std::abs(v) <= 5000);
}

TEST_CASE("slln check") {
  const double mu = 4.0 / 163, sigma2 = 1923037543.0 / 2195688729.0;
  const SimResult r = simulate(config_for(capital_22(1.0 / 3), 1000000, 1, 2024));
  const SllnReport ok = slln_check(r, mu, sigma2);
  CHECK(ok.pass);
  const double shift = 10 * std::sqrt(sigma2 / 1e6);
  CHECK_FALSE(slln_check(r, mu + shift, sigma2).pass);

  // Telescoping payoff: S_n = f(X_n) - f(X_0) stays bounded.
  GameChain<double> tele = capital_game_B(1.0 / 3, 0.0);
  const double f[3] = {0, 2, -1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tele.payoff(i, j) = f[j] - f[i];
  const SimResult t = simulate(config_for({tele}, 100000, 3, 3));
  CHECK(slln_check(t, 0.0, 0.0).pass);
  CHECK_THROWS_AS(slln_check(t, 1.0, 0.0), DomainError);
}

TEST_CASE("clt check") {
  const SimResult coin = simulate(config_for({capital_game_A(0.0)}, 2000, 400, 77));
  const CltReport rep = clt_check(coin, 0.0, 1.0);
  CHECK(rep.pass);
  CHECK(rep.standardized.size() == 400);
  CHECK_THROWS_AS(clt_check(coin, 0.0, 0.0), DomainError);
  const SimResult few = simulate(config_for({capital_game_A(0.0)}, 100, 20, 1));
  CHECK_THROWS_AS(clt_check(few, 0.0, 1.0), DomainError);
  // Wrong variance is caught.
  CHECK_FALSE(clt_check(coin, 0.0, 2.0).pass);
}

TEST_CASE("initial state does not matter in the long run") {
  const double sigma2 = 1923037543.0 / 2195688729.0;
  SimConfig c = config_for(capital_22(1.0 / 3), 200000, 5, 314);
  c.initial_state = 0;
  const SimResult a = simulate(c);
  c.initial_state.reset();
  c.master_seed = 315;
  const SimResult b = simulate(c);
  const double se = std::sqrt(2 * sigma2 / (200000.0 * 5));
  CHECK(std::abs(a.mean_per_game - b.mean_per_game) < 3 * se);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(simulate(config_for({}, 10, 1, 0)), DomainError);
  CHECK_THROWS_AS(simulate(config_for({capital_game_A(0.0)}, 0, 1, 0)), DomainError);
  SimConfig c = config_for({capital_game_A(0.0)}, 10, 1, 0);
  c.initial_state = 3;
  CHECK_THROWS_AS(simulate(c), DomainError);
  CHECK_THROWS_AS(simulate(config_for({capital_game_A(0.0), history_game_A(0.0)}, 10, 1, 0)),
                  DomainError);
}

TEST_CASE("json output") {
  const SimResult r = simulate(config_for({capital_game_A(0.0)}, 100, 2, 9));
  const std::string j = sim_json(r, slln_check(r, 0.0, 1.0), std::nullopt, 0.0, 1.0);
  CHECK(j.find("\"schema\": \"parrondo/1\"") != std::string::npos);
  CHECK(j.find("splitmix64-counter/1") != std::string::npos);
  CHECK(j.find("\"initial_state\": \"stationary\"") != std::string::npos);
}

#include "parrondo/games.hpp"

#include <algorithm>
#include <string>

#include "parrondo/errors.hpp"

namespace parrondo {

std::string_view to_string(Family family) {
  return family == Family::capital ? "capital" : "history";
}

Family parse_family(std::string_view text) {
  if (text == "capital") return Family::capital;
  if (text == "history") return Family::history;
  throw ParseError("unknown family '" + std::string(text) + "' (expected capital or history)");
}

namespace {

template <Scalar S>
void require_probability(const S& p, const char* what) {
  if (!(p > 0 && p < 1)) {
    throw DomainError(std::string(what) + " must lie in (0,1), got " +
                      (ScalarTraits<S>::exact ? to_string(Rational(p)) : format_double(as_double(p))));
  }
}

template <Scalar S>
void require_bias(const S& eps) {
  if (eps < 0) throw DomainError("bias eps must be nonnegative");
}

}  // namespace

template <Scalar S>
Matrix<S> capital_payoff() {
  Matrix<S> w(3, 3);
  w << 0, 1, -1,
      -1, 0, 1,
      1, -1, 0;
  return w;
}

template <Scalar S>
Matrix<S> history_payoff() {
  Matrix<S> w(4, 4);
  w << -1, 1, 0, 0,
      0, 0, -1, 1,
      -1, 1, 0, 0,
      0, 0, -1, 1;
  return w;
}

template <Scalar S>
GameChain<S> capital_chain(const S& p0, const S& p1, const S& p2) {
  require_probability(p0, "p0");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  Matrix<S> p(3, 3);
  p << 0, p0, 1 - p0,
      1 - p1, 0, p1,
      p2, 1 - p2, 0;
  return {p, capital_payoff<S>()};
}

template <Scalar S>
GameChain<S> history_chain(const S& p0, const S& p1, const S& p2, const S& p3) {
  require_probability(p0, "p0");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  require_probability(p3, "p3");
  Matrix<S> p(4, 4);
  p << 1 - p0, p0, 0, 0,
      0, 0, 1 - p1, p1,
      1 - p2, p2, 0, 0,
      0, 0, 1 - p3, p3;
  return {p, history_payoff<S>()};
}

template <Scalar S>
GameChain<S> capital_game_A(const S& eps) {
  require_bias(eps);
  const S p = S(1) / 2 - eps;
  return capital_chain<S>(p, p, p);
}

template <Scalar S>
GameChain<S> history_game_A(const S& eps) {
  require_bias(eps);
  const S p = S(1) / 2 - eps;
  return history_chain<S>(p, p, p, p);
}

template <Scalar S>
GameChain<S> capital_game_B(const S& rho, const S& eps) {
  if (!(rho > 0)) throw DomainError("rho must be positive");
  require_bias(eps);
  const S p0 = rho * rho / (1 + rho * rho) - eps;
  const S p1 = S(1) / (1 + rho) - eps;
  return capital_chain<S>(p0, p1, p1);
}

template <Scalar S>
GameChain<S> history_game_B(const S& kappa, const S& lambda, const S& eps) {
  check_family_parameters(ParamPoint<S>{Family::history, S(1), kappa, lambda, S(0), S(0)});
  require_bias(eps);
  const S p0 = S(1) / (1 + kappa) - eps;
  const S p1 = lambda / (1 + lambda) - eps;
  const S p3 = 1 - lambda / (1 + kappa) - eps;
  return history_chain<S>(p0, p1, p1, p3);
}

template <Scalar S>
GameChain<S> mixture(const GameChain<S>& a, const GameChain<S>& b, const S& gamma) {
  if (a.size() != b.size()) throw DomainError("mixture: games have different state spaces");
  if (gamma < 0 || gamma > 1) throw DomainError("mixture weight gamma must lie in [0,1]");
  return {(gamma * a.transition + (1 - gamma) * b.transition).eval(), a.payoff};
}

template <Scalar S>
void check_family_parameters(const ParamPoint<S>& point) {
  if (point.family == Family::capital) {
    if (!(point.rho > 0)) throw DomainError("rho must be positive");
    return;
  }
  if (!(point.kappa > 0)) throw DomainError("kappa must be positive");
  if (!(point.lambda > 0)) throw DomainError("lambda must be positive");
  if (!(point.lambda < 1 + point.kappa)) throw DomainError("lambda must be less than 1 + kappa");
}

template <Scalar S>
GamePair<S> make_games(const ParamPoint<S>& point) {
  check_family_parameters(point);
  if (point.family == Family::capital) {
    return {capital_game_A(point.eps), capital_game_B(point.rho, point.eps)};
  }
  return {history_game_A(point.eps), history_game_B(point.kappa, point.lambda, point.eps)};
}

template <Scalar S>
GameChain<S> make_mixture(const ParamPoint<S>& point) {
  const GamePair<S> games = make_games(point);
  return mixture(games.a, games.b, point.gamma);
}

template <Scalar S>
std::vector<S> unbiased_probabilities(const ParamPoint<S>& point) {
  check_family_parameters(point);
  const S half = S(1) / 2;
  if (point.family == Family::capital) {
    const S& rho = point.rho;
    return {half, rho * rho / (1 + rho * rho), S(1) / (1 + rho)};
  }
  const S& k = point.kappa;
  const S& l = point.lambda;
  return {half, S(1) / (1 + k), l / (1 + l), 1 - l / (1 + k)};
}

#define PARRONDO_INSTANTIATE(S)                                                        \
  template Matrix<S> capital_payoff<S>();                                              \
  template Matrix<S> history_payoff<S>();                                              \
  template GameChain<S> capital_chain<S>(const S&, const S&, const S&);                \
  template GameChain<S> history_chain<S>(const S&, const S&, const S&, const S&);      \
  template GameChain<S> capital_game_A<S>(const S&);                                   \
  template GameChain<S> history_game_A<S>(const S&);                                   \
  template GameChain<S> capital_game_B<S>(const S&, const S&);                         \
  template GameChain<S> history_game_B<S>(const S&, const S&, const S&);               \
  template GameChain<S> mixture<S>(const GameChain<S>&, const GameChain<S>&, const S&); \
  template void check_family_parameters<S>(const ParamPoint<S>&);                      \
  template GamePair<S> make_games<S>(const ParamPoint<S>&);                            \
  template GameChain<S> make_mixture<S>(const ParamPoint<S>&);                         \
  template std::vector<S> unbiased_probabilities<S>(const ParamPoint<S>&);

PARRONDO_INSTANTIATE(Rational)
PARRONDO_INSTANTIATE(double)

#undef PARRONDO_INSTANTIATE

}  // namespace parrondo

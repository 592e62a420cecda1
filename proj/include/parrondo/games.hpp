#pragma once

#include <string_view>
#include <vector>

#include "parrondo/markov.hpp"

namespace parrondo {

/// capital: states {0,1,2} are capital mod 3.
/// history: states {0,1,2,3} are the last two results in binary
/// (00 loss-loss, 01 loss-win, 10 win-loss, 11 win-win; the later result last).
enum class Family { capital, history };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

template <Scalar S>
struct ParamPoint {
  Family family = Family::capital;
  S rho = 1;     // capital only
  S kappa = 1;   // history only
  S lambda = 1;  // history only
  S gamma = 0;   // mixture weight on game A
  S eps = 0;     // bias subtracted from every win probability
};

template <Scalar To, Scalar From>
ParamPoint<To> cast_point(const ParamPoint<From>& p) {
  if constexpr (std::same_as<To, From>) {
    return p;
  } else {
    return {p.family, to_float(p.rho), to_float(p.kappa), to_float(p.lambda),
            to_float(p.gamma), to_float(p.eps)};
  }
}

template <Scalar S>
Matrix<S> capital_payoff();
template <Scalar S>
Matrix<S> history_payoff();

/// Capital chain from win probabilities in states 0, 1, 2. Each must lie in (0,1).
template <Scalar S>
GameChain<S> capital_chain(const S& p0, const S& p1, const S& p2);

/// History chain from win probabilities after 00, 01, 10, 11. Each must lie in (0,1).
template <Scalar S>
GameChain<S> history_chain(const S& p0, const S& p1, const S& p2, const S& p3);

/// Fair-coin game biased by eps, 0 <= eps < 1/2.
template <Scalar S>
GameChain<S> capital_game_A(const S& eps);
template <Scalar S>
GameChain<S> history_game_A(const S& eps);

/// p0 = rho^2/(1+rho^2) - eps, p1 = p2 = 1/(1+rho) - eps.
template <Scalar S>
GameChain<S> capital_game_B(const S& rho, const S& eps);

/// p0 = 1/(1+kappa) - eps, p1 = p2 = lambda/(1+lambda) - eps,
/// p3 = 1 - lambda/(1+kappa) - eps; needs kappa, lambda > 0 and lambda < 1 + kappa.
template <Scalar S>
GameChain<S> history_game_B(const S& kappa, const S& lambda, const S& eps);

/// gamma P_A + (1 - gamma) P_B with A's payoff matrix.
template <Scalar S>
GameChain<S> mixture(const GameChain<S>& a, const GameChain<S>& b, const S& gamma);

template <Scalar S>
struct GamePair {
  GameChain<S> a;
  GameChain<S> b;
};

/// Games A and B of the point's family at the point's bias.
template <Scalar S>
GamePair<S> make_games(const ParamPoint<S>& point);

/// Game C = gamma A + (1 - gamma) B at the point's bias.
template <Scalar S>
GameChain<S> make_mixture(const ParamPoint<S>& point);

/// Unbiased win probabilities of A and B; the bias must stay below all of them.
template <Scalar S>
std::vector<S> unbiased_probabilities(const ParamPoint<S>& point);

/// Throws DomainError when rho (capital) or (kappa, lambda) (history) is invalid.
template <Scalar S>
void check_family_parameters(const ParamPoint<S>& point);

}  // namespace parrondo

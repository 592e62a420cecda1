#pragma once

#include <string_view>

#include "parrondo/linalg.hpp"

namespace parrondo {

/// A row-stochastic transition matrix (P_ij = P(X_n = j | X_{n-1} = i))
/// paired with the payoff w(i, j) collected on each transition.
template <Scalar S>
struct GameChain {
  Matrix<S> transition;
  Matrix<S> payoff;

  Eigen::Index size() const { return transition.rows(); }
};

struct ChainDiagnosis {
  bool irreducible = false;
  bool aperiodic = false;
  /// gcd of cycle lengths through state 0; 0 when the chain is reducible.
  int period = 0;
};

enum class Outcome { losing, fair, winning };

std::string_view to_string(Outcome outcome);

template <Scalar S>
struct ChainAnalysis {
  RowVector<S> pi;
  Matrix<S> fundamental;
  S mu;
  S sigma2;
};

template <Scalar S>
struct LimitParams {
  S mu;
  S sigma2;
  Outcome outcome = Outcome::fair;
};

/// Throws NotStochasticError unless p is square with nonnegative entries and
/// unit row sums (exactly, or within 1e-12 for doubles).
template <Scalar S>
void check_stochastic(const Matrix<S>& p);

template <Scalar S>
void check_chain(const GameChain<S>& chain);

/// Irreducibility from strong connectivity of the positive-entry digraph;
/// period from BFS levels through state 0.
ChainDiagnosis diagnose_support(const Support& support);

template <Scalar S>
ChainDiagnosis validate_chain(const Matrix<S>& p);

/// Unique pi with pi P = pi and sum(pi) = 1. Throws ReducibleChainError.
template <Scalar S>
RowVector<S> stationary_distribution(const Matrix<S>& p);

/// Z = (I - (P - Pi))^{-1}, Pi the matrix whose rows all equal pi. Periodic
/// chains are accepted.
template <Scalar S>
Matrix<S> fundamental_matrix(const Matrix<S>& p, const RowVector<S>& pi);

/// Rank-one matrix whose rows are all pi.
template <Scalar S>
Matrix<S> stack_rows(const RowVector<S>& pi);

/// mu = pi P' 1.
template <Scalar S>
S mean_parameter(const GameChain<S>& chain, const RowVector<S>& pi);

/// sigma^2 = pi P'' 1 - (pi P' 1)^2 + 2 pi P' (Z - Pi) P' 1.
template <Scalar S>
S variance_parameter(const GameChain<S>& chain, const RowVector<S>& pi,
                     const Matrix<S>& fundamental);

template <Scalar S>
ChainAnalysis<S> analyze(const GameChain<S>& chain);

/// Sign of mu. Doubles within 1e-12 of zero are fair.
template <Scalar S>
Outcome classify(const S& mu);

template <Scalar S>
LimitParams<S> limit_params(const GameChain<S>& chain);

template <Scalar To, Scalar From>
GameChain<To> cast_chain(const GameChain<From>& chain) {
  return {cast_matrix<To>(chain.transition), cast_matrix<To>(chain.payoff)};
}

}  // namespace parrondo

#include "parrondo/markov.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <vector>

#include "parrondo/errors.hpp"

namespace parrondo {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::losing:
      return "losing";
    case Outcome::fair:
      return "fair";
    case Outcome::winning:
      return "winning";
  }
  return "fair";
}

template <Scalar S>
void check_stochastic(const Matrix<S>& p) {
  if (p.rows() == 0 || p.rows() != p.cols()) {
    throw NotStochasticError("transition matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    S row_sum = 0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) < 0) throw NotStochasticError("transition matrix has a negative entry");
      row_sum += p(i, j);
    }
    bool ok;
    if constexpr (ScalarTraits<S>::exact) {
      ok = row_sum == 1;
    } else {
      ok = std::abs(row_sum - 1.0) <= ScalarTraits<double>::row_sum_tolerance;
    }
    if (!ok) {
      throw NotStochasticError("row " + std::to_string(i) + " of the transition matrix does not sum to 1");
    }
  }
}

template <Scalar S>
void check_chain(const GameChain<S>& chain) {
  check_stochastic(chain.transition);
  if (chain.payoff.rows() != chain.size() || chain.payoff.cols() != chain.size()) {
    throw DomainError("payoff matrix size does not match the transition matrix");
  }
}

ChainDiagnosis diagnose_support(const Support& support) {
  const Eigen::Index n = support.rows();
  ChainDiagnosis out;

  // Forward BFS from 0 records levels; backward reachability closes strong connectivity.
  std::vector<long> level(n, -1);
  std::queue<Eigen::Index> queue;
  level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const Eigen::Index u = queue.front();
    queue.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (support(u, v) && level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push(v);
      }
    }
  }
  std::vector<bool> reaches_zero(n, false);
  reaches_zero[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    const Eigen::Index v = queue.front();
    queue.pop();
    for (Eigen::Index u = 0; u < n; ++u) {
      if (support(u, v) && !reaches_zero[u]) {
        reaches_zero[u] = true;
        queue.push(u);
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (level[i] < 0 || !reaches_zero[i]) return out;
  }
  out.irreducible = true;

  long g = 0;
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (support(u, v)) g = std::gcd(g, std::labs(level[u] + 1 - level[v]));
    }
  }
  out.period = static_cast<int>(g);
  out.aperiodic = g == 1;
  return out;
}

template <Scalar S>
ChainDiagnosis validate_chain(const Matrix<S>& p) {
  check_stochastic(p);
  return diagnose_support(support(p));
}

template <Scalar S>
RowVector<S> stationary_distribution(const Matrix<S>& p) {
  if (!validate_chain(p).irreducible) {
    throw ReducibleChainError("chain is reducible; stationary distribution is not unique");
  }
  const Eigen::Index n = p.rows();
  Matrix<S> a = (Matrix<S>::Identity(n, n) - p).transpose();
  a.row(n - 1).setConstant(S(1));
  Matrix<S> b = Matrix<S>::Zero(n, 1);
  b(n - 1, 0) = S(1);
  Matrix<S> x;
  try {
    x = solve<S>(a, b);
  } catch (const SingularMatrixError&) {
    throw ReducibleChainError("stationary system is singular");
  }
  return x.transpose();
}

template <Scalar S>
Matrix<S> stack_rows(const RowVector<S>& pi) {
  return pi.replicate(pi.cols(), 1);
}

template <Scalar S>
Matrix<S> fundamental_matrix(const Matrix<S>& p, const RowVector<S>& pi) {
  const Eigen::Index n = p.rows();
  if (pi.cols() != n) throw DomainError("fundamental_matrix: size mismatch");
  const Matrix<S> system = Matrix<S>::Identity(n, n) - p + stack_rows(pi);
  return inverse<S>(system);
}

template <Scalar S>
S mean_parameter(const GameChain<S>& chain, const RowVector<S>& pi) {
  const Vector<S> ones = Vector<S>::Ones(chain.size());
  return (pi * weighted(chain.transition, chain.payoff, 1) * ones)(0, 0);
}

template <Scalar S>
S variance_parameter(const GameChain<S>& chain, const RowVector<S>& pi,
                     const Matrix<S>& fundamental) {
  const Vector<S> ones = Vector<S>::Ones(chain.size());
  const Matrix<S> p1 = weighted(chain.transition, chain.payoff, 1);
  const Matrix<S> p2 = weighted(chain.transition, chain.payoff, 2);
  const Vector<S> zeta = p1 * ones;
  const S mu = (pi * zeta)(0, 0);
  const S second = (pi * p2 * ones)(0, 0);
  const S cov_sum = (pi * p1 * (fundamental - stack_rows(pi)) * zeta)(0, 0);
  return second - mu * mu + 2 * cov_sum;
}

template <Scalar S>
ChainAnalysis<S> analyze(const GameChain<S>& chain) {
  check_chain(chain);
  ChainAnalysis<S> out;
  out.pi = stationary_distribution(chain.transition);
  out.fundamental = fundamental_matrix(chain.transition, out.pi);
  out.mu = mean_parameter(chain, out.pi);
  out.sigma2 = variance_parameter(chain, out.pi, out.fundamental);
  return out;
}

template <Scalar S>
Outcome classify(const S& mu) {
  int s;
  if constexpr (ScalarTraits<S>::exact) {
    s = sign(mu);
  } else {
    s = sign(mu, ScalarTraits<double>::fair_tolerance);
  }
  if (s > 0) return Outcome::winning;
  if (s < 0) return Outcome::losing;
  return Outcome::fair;
}

template <Scalar S>
LimitParams<S> limit_params(const GameChain<S>& chain) {
  const ChainAnalysis<S> a = analyze(chain);
  return {a.mu, a.sigma2, classify(a.mu)};
}

#define PARRONDO_INSTANTIATE(S)                                                          \
  template void check_stochastic<S>(const Matrix<S>&);                                   \
  template void check_chain<S>(const GameChain<S>&);                                     \
  template ChainDiagnosis validate_chain<S>(const Matrix<S>&);                           \
  template RowVector<S> stationary_distribution<S>(const Matrix<S>&);                    \
  template Matrix<S> stack_rows<S>(const RowVector<S>&);                                 \
  template Matrix<S> fundamental_matrix<S>(const Matrix<S>&, const RowVector<S>&);       \
  template S mean_parameter<S>(const GameChain<S>&, const RowVector<S>&);                \
  template S variance_parameter<S>(const GameChain<S>&, const RowVector<S>&,             \
                                   const Matrix<S>&);                                    \
  template ChainAnalysis<S> analyze<S>(const GameChain<S>&);                             \
  template Outcome classify<S>(const S&);                                                \
  template LimitParams<S> limit_params<S>(const GameChain<S>&);

PARRONDO_INSTANTIATE(Rational)
PARRONDO_INSTANTIATE(double)

#undef PARRONDO_INSTANTIATE

}  // namespace parrondo

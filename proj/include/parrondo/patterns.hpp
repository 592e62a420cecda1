#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parrondo/markov.hpp"

namespace parrondo {

/// A nonempty finite word over {A, B}, played cyclically.
class PatternSpec {
 public:
  /// Throws ParseError on an empty word or a letter other than A/B.
  explicit PatternSpec(std::string word);

  /// A^r B^s.
  static PatternSpec ab(int r, int s);

  const std::string& word() const { return word_; }
  std::size_t length() const { return word_.size(); }

  /// (r, s) when the word is A^r B^s with r, s >= 1.
  std::optional<std::pair<int, int>> as_rs() const;

  /// Cyclic left rotation by k letters.
  PatternSpec rotated(std::size_t k) const;

  bool operator==(const PatternSpec&) const = default;

 private:
  std::string word_;
};

/// Throws ReducibleChainError unless every cyclic rotation of the product
/// of the given one-step supports is irreducible and aperiodic.
void check_cyclic_products(const std::vector<Support>& phases);

/// True when P_A' has zero row sums and |w| = 1 wherever P_A or P_B is
/// positive; the compact [r,s] variance formulas need both.
template <Scalar S>
bool compact_forms_apply(const GameChain<S>& a, const GameChain<S>& b);

/// mu of A^r B^s:
///   (r+s)^{-1} [ pi (I + ... + P_A^{r-1}) P_A' 1 + pi_{s,r} (I + ... + P_B^{s-1}) zeta ]
/// with pi stationary for P_A^r P_B^s, pi_{s,r} = pi P_A^r, zeta = P_B' 1.
/// The first term vanishes for the built-in families at eps = 0.
template <Scalar S>
S pattern_mean_direct(const GameChain<S>& a, const GameChain<S>& b, int r, int s);

/// sigma^2 of A^r B^s from Var(eta_1) + 2 sum_m Cov(eta_1, eta_{m+1}), with
/// the spectral sums replaced by geometric sums of P_B. Falls back to the
/// per-step covariance expansion when compact_forms_apply() is false.
template <Scalar S>
S pattern_variance_direct(const GameChain<S>& a, const GameChain<S>& b, int r, int s);

template <Scalar S>
LimitParams<S> pattern_limits_direct(const GameChain<S>& a, const GameChain<S>& b, int r, int s);

/// Per-step covariance expansion of the periodic schedule for any word.
template <Scalar S>
LimitParams<S> word_limits_direct(const GameChain<S>& a, const GameChain<S>& b,
                                  const PatternSpec& word);

/// Time-homogeneous lift onto {0..L-1} x states, lexicographic order:
/// (i, j) -> (i+1 mod L, k) with probability (P_{word[i]})_{jk}.
template <Scalar S>
struct ProductChain {
  GameChain<S> chain;
  PatternSpec word{"A"};
  Eigen::Index base_size = 0;
  ChainDiagnosis diagnosis;

  Eigen::Index index(std::size_t phase, Eigen::Index state) const {
    return static_cast<Eigen::Index>(phase) * base_size + state;
  }
};

template <Scalar S>
ProductChain<S> build_product_chain(const GameChain<S>& a, const GameChain<S>& b,
                                    const PatternSpec& word);

/// mu and sigma^2 of the product chain with its stationary distribution.
/// Throws ReducibleChainError.
template <Scalar S>
LimitParams<S> pattern_limits_product(const ProductChain<S>& pc);

template <Scalar S>
LimitParams<S> general_word_limits(const GameChain<S>& a, const GameChain<S>& b,
                                   const PatternSpec& word);

}  // namespace parrondo

#include "parrondo/patterns.hpp"

#include <cmath>

#include "parrondo/errors.hpp"

namespace parrondo {

PatternSpec::PatternSpec(std::string word) : word_(std::move(word)) {
  if (word_.empty()) throw ParseError("pattern word must be nonempty");
  for (char c : word_) {
    if (c != 'A' && c != 'B') {
      throw ParseError("pattern word may contain only 'A' and 'B': '" + word_ + "'");
    }
  }
}

PatternSpec PatternSpec::ab(int r, int s) {
  if (r < 0 || s < 0 || r + s == 0) throw DomainError("pattern needs r, s >= 0 with r + s >= 1");
  return PatternSpec(std::string(static_cast<std::size_t>(r), 'A') +
                     std::string(static_cast<std::size_t>(s), 'B'));
}

std::optional<std::pair<int, int>> PatternSpec::as_rs() const {
  const auto first_b = word_.find('B');
  if (first_b == 0 || first_b == std::string::npos) return std::nullopt;
  if (word_.find('A', first_b) != std::string::npos) return std::nullopt;
  return std::pair<int, int>{static_cast<int>(first_b),
                             static_cast<int>(word_.size() - first_b)};
}

PatternSpec PatternSpec::rotated(std::size_t k) const {
  k %= word_.size();
  return PatternSpec(word_.substr(k) + word_.substr(0, k));
}

void check_cyclic_products(const std::vector<Support>& phases) {
  const std::size_t n = phases.size();
  for (std::size_t start = 0; start < n; ++start) {
    Support product = phases[start];
    for (std::size_t k = 1; k < n; ++k) {
      product = support_product(product, phases[(start + k) % n]);
    }
    const ChainDiagnosis d = diagnose_support(product);
    if (!d.irreducible || !d.aperiodic) {
      throw ReducibleChainError("cyclic product starting at phase " + std::to_string(start) +
                                " is not irreducible and aperiodic");
    }
  }
}

namespace {

template <Scalar S>
bool is_zero(const S& x) {
  if constexpr (ScalarTraits<S>::exact) {
    return x == 0;
  } else {
    return std::abs(x) <= 1e-12;
  }
}

template <Scalar S>
S dot(const RowVector<S>& x, const Vector<S>& y) {
  return (x * y)(0, 0);
}

template <Scalar S>
void check_pattern_inputs(const GameChain<S>& a, const GameChain<S>& b, int r, int s) {
  if (r < 1 || s < 1) throw DomainError("pattern [r,s] needs r >= 1 and s >= 1");
  check_chain(a);
  check_chain(b);
  if (a.size() != b.size()) throw DomainError("games A and B have different state spaces");
}

template <Scalar S>
std::vector<const GameChain<S>*> phases_of(const GameChain<S>& a, const GameChain<S>& b,
                                           const PatternSpec& word) {
  std::vector<const GameChain<S>*> phases;
  phases.reserve(word.length());
  for (char c : word.word()) phases.push_back(c == 'A' ? &a : &b);
  return phases;
}

template <Scalar S>
void check_phases(const std::vector<const GameChain<S>*>& phases) {
  std::vector<Support> supports;
  supports.reserve(phases.size());
  for (const auto* g : phases) supports.push_back(support(g->transition));
  check_cyclic_products(supports);
}

}  // namespace

template <Scalar S>
bool compact_forms_apply(const GameChain<S>& a, const GameChain<S>& b) {
  const Vector<S> row_sums = weighted(a.transition, a.payoff, 1).rowwise().sum();
  for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
    if (!is_zero(row_sums(i))) return false;
  }
  for (const GameChain<S>* g : {&a, &b}) {
    for (Eigen::Index i = 0; i < g->size(); ++i) {
      for (Eigen::Index j = 0; j < g->size(); ++j) {
        if (g->transition(i, j) > 0 && !is_zero(S(g->payoff(i, j) * g->payoff(i, j) - 1))) {
          return false;
        }
      }
    }
  }
  return true;
}

template <Scalar S>
S pattern_mean_direct(const GameChain<S>& a, const GameChain<S>& b, int r, int s) {
  check_pattern_inputs(a, b, r, s);
  const PatternSpec word = PatternSpec::ab(r, s);
  check_phases(phases_of(a, b, word));

  const Matrix<S> pa_r = power(a.transition, r);
  const Matrix<S> cycle = pa_r * power(b.transition, s);
  const RowVector<S> pi = stationary_distribution(cycle);
  const RowVector<S> pi_sr = pi * pa_r;
  const Vector<S> ones = Vector<S>::Ones(a.size());
  const Vector<S> zeta_a = weighted(a.transition, a.payoff, 1) * ones;
  const Vector<S> zeta_b = weighted(b.transition, b.payoff, 1) * ones;

  const S total = dot<S>(pi * geometric_sum(a.transition, r), zeta_a) +
                  dot<S>(pi_sr * geometric_sum(b.transition, s), zeta_b);
  return total / S(r + s);
}

namespace {

// Variance of A^r B^s under the compact forms (P_A' 1 = 0, w = +-1 on the support).
template <Scalar S>
S compact_variance(const GameChain<S>& a, const GameChain<S>& b, int r, int s) {
  const Eigen::Index t = a.size();
  const Matrix<S>& pa = a.transition;
  const Matrix<S>& pb = b.transition;
  const Matrix<S> pa_w = weighted(pa, a.payoff, 1);
  const Matrix<S> pb_w = weighted(pb, b.payoff, 1);
  const Vector<S> zeta = pb_w * Vector<S>::Ones(t);

  std::vector<Matrix<S>> pb_pow{Matrix<S>::Identity(t, t)};
  for (int v = 1; v <= s; ++v) pb_pow.push_back(pb_pow.back() * pb);
  std::vector<Matrix<S>> pa_pow{Matrix<S>::Identity(t, t)};
  for (int u = 1; u <= r; ++u) pa_pow.push_back(pa_pow.back() * pa);

  const Matrix<S> cycle = pa_pow[r] * pb_pow[s];
  const RowVector<S> pi = stationary_distribution(cycle);
  const Matrix<S> deviation = fundamental_matrix(cycle, pi) - stack_rows(pi);
  const RowVector<S> pi_sr = pi * pa_pow[r];

  // g[v] = (I + P_B + ... + P_B^{v-1}) zeta, b_zeta[v] = P_B^v zeta.
  std::vector<Vector<S>> b_zeta;
  std::vector<Vector<S>> g{Vector<S>::Zero(t)};
  for (int v = 0; v <= s; ++v) {
    b_zeta.push_back(pb_pow[v] * zeta);
    if (v < s) g.push_back(g.back() + b_zeta.back());
  }
  const Vector<S>& gs_zeta = g[s];

  S var = S(r + s);
  for (int v = 0; v < s; ++v) {
    const S m = dot<S>(pi_sr, b_zeta[v]);
    var -= m * m;
  }
  // A-step u against the whole B block.
  RowVector<S> a_rows = RowVector<S>::Zero(t);
  for (int u = 0; u < r; ++u) {
    a_rows += pi * pa_pow[u] * pa_w * pa_pow[r - u - 1];
  }
  var += 2 * dot<S>(a_rows, gs_zeta);
  // B-step u against B-step v > u.
  for (int v = 1; v < s; ++v) {
    for (int u = 0; u < v; ++u) {
      var += 2 * dot<S>(pi_sr * pb_pow[u] * pb_w, b_zeta[v - u - 1]);
    }
    var -= 2 * dot<S>(pi_sr, g[v]) * dot<S>(pi_sr, b_zeta[v]);
  }

  const Vector<S> tail = deviation * pa_pow[r] * gs_zeta;
  S cov_sum = dot<S>(a_rows * pb_pow[s], tail);
  for (int u = 0; u < s; ++u) {
    cov_sum += dot<S>(pi_sr * pb_pow[u] * pb_w * pb_pow[s - u - 1], tail);
  }
  return (var + 2 * cov_sum) / S(r + s);
}

// mu and sigma^2 of a periodic schedule by expanding Var(eta_1) and
// sum_m Cov(eta_1, eta_{m+1}) over individual steps.
template <Scalar S>
LimitParams<S> expanded_limits(const std::vector<const GameChain<S>*>& phases) {
  const std::size_t n = phases.size();
  const Eigen::Index t = phases.front()->size();
  const Vector<S> ones = Vector<S>::Ones(t);

  Matrix<S> cycle = Matrix<S>::Identity(t, t);
  for (const auto* g : phases) cycle = (cycle * g->transition).eval();
  const RowVector<S> pi = stationary_distribution(cycle);
  const Matrix<S> deviation = fundamental_matrix(cycle, pi) - stack_rows(pi);

  std::vector<Matrix<S>> p1;
  std::vector<Vector<S>> zeta;
  std::vector<Vector<S>> zeta2;
  for (const auto* g : phases) {
    p1.push_back(weighted(g->transition, g->payoff, 1));
    zeta.push_back(p1.back() * ones);
    zeta2.push_back(weighted(g->transition, g->payoff, 2) * ones);
  }

  // d[k]: distribution before step k; left[k] = d[k] P_k'.
  std::vector<RowVector<S>> d{pi};
  for (std::size_t k = 0; k + 1 < n; ++k) d.push_back(d.back() * phases[k]->transition);
  std::vector<RowVector<S>> left;
  std::vector<S> m;
  for (std::size_t k = 0; k < n; ++k) {
    left.push_back(d[k] * p1[k]);
    m.push_back(dot<S>(d[k], zeta[k]));
  }

  S mean = 0;
  for (const S& mk : m) mean += mk;

  S var = 0;
  for (std::size_t k = 0; k < n; ++k) var += dot<S>(d[k], zeta2[k]) - m[k] * m[k];
  for (std::size_t u = 0; u < n; ++u) {
    RowVector<S> x = left[u];
    for (std::size_t v = u + 1; v < n; ++v) {
      var += 2 * (dot<S>(x, zeta[v]) - m[u] * m[v]);
      if (v + 1 < n) x = (x * phases[v]->transition).eval();
    }
  }

  // sum_u left[u] T(u+1, n) and sum_v T(0, v) zeta[v].
  RowVector<S> head = RowVector<S>::Zero(t);
  for (std::size_t u = 0; u < n; ++u) {
    head = (head * phases[u]->transition).eval();
    head += left[u];
  }
  Vector<S> tail = Vector<S>::Zero(t);
  for (std::size_t v = n; v-- > 0;) {
    tail = (phases[v]->transition * tail).eval();
    tail += zeta[v];
  }
  const S cov_sum = dot<S>(head, deviation * tail);

  const S length = S(static_cast<long>(n));
  LimitParams<S> out;
  out.mu = mean / length;
  out.sigma2 = (var + 2 * cov_sum) / length;
  out.outcome = classify(out.mu);
  return out;
}

}  // namespace

template <Scalar S>
S pattern_variance_direct(const GameChain<S>& a, const GameChain<S>& b, int r, int s) {
  check_pattern_inputs(a, b, r, s);
  const PatternSpec word = PatternSpec::ab(r, s);
  const auto phases = phases_of(a, b, word);
  check_phases(phases);
  if (compact_forms_apply(a, b)) return compact_variance(a, b, r, s);
  return expanded_limits(phases).sigma2;
}

template <Scalar S>
LimitParams<S> pattern_limits_direct(const GameChain<S>& a, const GameChain<S>& b, int r, int s) {
  LimitParams<S> out;
  out.mu = pattern_mean_direct(a, b, r, s);
  out.sigma2 = pattern_variance_direct(a, b, r, s);
  out.outcome = classify(out.mu);
  return out;
}

template <Scalar S>
LimitParams<S> word_limits_direct(const GameChain<S>& a, const GameChain<S>& b,
                                  const PatternSpec& word) {
  check_chain(a);
  check_chain(b);
  if (a.size() != b.size()) throw DomainError("games A and B have different state spaces");
  const auto phases = phases_of(a, b, word);
  check_phases(phases);
  return expanded_limits(phases);
}

template <Scalar S>
ProductChain<S> build_product_chain(const GameChain<S>& a, const GameChain<S>& b,
                                    const PatternSpec& word) {
  check_chain(a);
  check_chain(b);
  if (a.size() != b.size()) throw DomainError("games A and B have different state spaces");
  const Eigen::Index t = a.size();
  const Eigen::Index phases = static_cast<Eigen::Index>(word.length());
  const Eigen::Index n = phases * t;

  ProductChain<S> pc;
  pc.word = word;
  pc.base_size = t;
  pc.chain.transition = Matrix<S>::Zero(n, n);
  pc.chain.payoff = Matrix<S>::Zero(n, n);
  for (Eigen::Index i = 0; i < phases; ++i) {
    const GameChain<S>& g = word.word()[static_cast<std::size_t>(i)] == 'A' ? a : b;
    const Eigen::Index next = (i + 1) % phases;
    pc.chain.transition.block(i * t, next * t, t, t) = g.transition;
    for (Eigen::Index j = 0; j < phases; ++j) pc.chain.payoff.block(i * t, j * t, t, t) = g.payoff;
  }
  pc.diagnosis = validate_chain(pc.chain.transition);
  return pc;
}

template <Scalar S>
LimitParams<S> pattern_limits_product(const ProductChain<S>& pc) {
  if (!pc.diagnosis.irreducible) throw ReducibleChainError("product chain is reducible");
  return limit_params(pc.chain);
}

template <Scalar S>
LimitParams<S> general_word_limits(const GameChain<S>& a, const GameChain<S>& b,
                                   const PatternSpec& word) {
  return pattern_limits_product(build_product_chain(a, b, word));
}

#define PARRONDO_INSTANTIATE(S)                                                               \
  template bool compact_forms_apply<S>(const GameChain<S>&, const GameChain<S>&);             \
  template S pattern_mean_direct<S>(const GameChain<S>&, const GameChain<S>&, int, int);      \
  template S pattern_variance_direct<S>(const GameChain<S>&, const GameChain<S>&, int, int);  \
  template LimitParams<S> pattern_limits_direct<S>(const GameChain<S>&, const GameChain<S>&,  \
                                                   int, int);                                 \
  template LimitParams<S> word_limits_direct<S>(const GameChain<S>&, const GameChain<S>&,     \
                                                const PatternSpec&);                          \
  template ProductChain<S> build_product_chain<S>(const GameChain<S>&, const GameChain<S>&,   \
                                                  const PatternSpec&);                        \
  template LimitParams<S> pattern_limits_product<S>(const ProductChain<S>&);                  \
  template LimitParams<S> general_word_limits<S>(const GameChain<S>&, const GameChain<S>&,    \
                                                 const PatternSpec&);

PARRONDO_INSTANTIATE(Rational)
PARRONDO_INSTANTIATE(double)

#undef PARRONDO_INSTANTIATE

}  // namespace parrondo

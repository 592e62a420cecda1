#pragma once

// Independent reference computations. Nothing here calls the library's
// linear algebra or chain analysis; matrices are plain nested vectors.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "parrondo/scalar.hpp"

namespace oracle {

using Q = parrondo::Rational;
using Mat = std::vector<std::vector<Q>>;
using Vec = std::vector<Q>;

inline Q q(long p, long d = 1) { return Q(p) / Q(d); }

inline Mat zeros(std::size_t n, std::size_t m) { return Mat(n, Vec(m, Q(0))); }

inline Mat mul(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Solves a x = b by Gauss-Jordan with the first nonzero pivot.
inline Vec solve(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::runtime_error("oracle: singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Q f = a[row][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// pi P = pi, sum pi = 1.
inline Vec stationary(const Mat& p) {
  const std::size_t n = p.size();
  Mat a = zeros(n, n);
  Vec b(n, Q(0));
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? Q(1) : Q(0)) - p[j][i];
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1;
  b[n - 1] = 1;
  return solve(a, b);
}

struct Limits {
  Q mu;
  Q sigma2;
};

/// mu = sum pi_i P_ij w_ij. sigma^2 from the Poisson equation
/// (I - P) h = zeta - mu with pi h = 0 and the martingale increments
/// w_ij - mu + h_j - h_i.
inline Limits limits(const Mat& p, const Mat& w) {
  const std::size_t n = p.size();
  const Vec pi = stationary(p);
  Vec zeta(n, Q(0));
  Q mu(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) zeta[i] += p[i][j] * w[i][j];
    mu += pi[i] * zeta[i];
  }
  // Replace one equation of the singular system by the normalisation pi h = 0.
  Mat a = zeros(n, n);
  Vec b(n, Q(0));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? Q(1) : Q(0)) - p[i][j];
    b[i] = zeta[i] - mu;
  }
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = pi[j];
  const Vec h = solve(a, b);
  Q s2(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (p[i][j] == 0) continue;
      const Q d = w[i][j] - mu + h[j] - h[i];
      s2 += pi[i] * p[i][j] * d * d;
    }
  return {mu, s2};
}

/// Capital game: win probability p_i in state i = capital mod 3.
inline void capital(const Vec& probs, Mat& p, Mat& w) {
  p = zeros(3, 3);
  w = zeros(3, 3);
  for (int i = 0; i < 3; ++i) {
    const int up = (i + 1) % 3, down = (i + 2) % 3;
    p[i][up] = probs[i];
    p[i][down] = 1 - probs[i];
    w[i][up] = 1;
    w[i][down] = -1;
  }
}

/// History game: state 2*previous + last (1 = win); win probability p_i.
inline void history(const Vec& probs, Mat& p, Mat& w) {
  p = zeros(4, 4);
  w = zeros(4, 4);
  for (int i = 0; i < 4; ++i) {
    const int last = i & 1;
    const int win = 2 * last + 1, lose = 2 * last;
    p[i][win] = probs[i];
    p[i][lose] = 1 - probs[i];
    w[i][win] = 1;
    w[i][lose] = -1;
  }
}

inline Vec capital_B(const Q& rho, const Q& eps) {
  return {rho * rho / (1 + rho * rho) - eps, 1 / (1 + rho) - eps, 1 / (1 + rho) - eps};
}

inline Vec history_B(const Q& k, const Q& l, const Q& eps) {
  return {1 / (1 + k) - eps, l / (1 + l) - eps, l / (1 + l) - eps, 1 - l / (1 + k) - eps};
}

/// Product chain of a periodic word, each step one game, built state by state.
inline Limits word_limits(const std::vector<Mat>& ps, const std::vector<Mat>& ws,
                          const std::string& word) {
  const std::size_t len = word.size(), n = ps[0].size();
  Mat p = zeros(len * n, len * n), w = zeros(len * n, len * n);
  for (std::size_t ph = 0; ph < len; ++ph) {
    const std::size_t g = word[ph] == 'A' ? 0 : 1;
    const std::size_t nx = (ph + 1) % len;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        p[ph * n + i][nx * n + j] = ps[g][i][j];
        w[ph * n + i][nx * n + j] = ws[g][i][j];
      }
  }
  return limits(p, w);
}

/// Random rational in (0,1) with denominator at most `den`.
inline Q random_probability(std::mt19937_64& rng, long den = 20) {
  std::uniform_int_distribution<long> d(2, den);
  const long b = d(rng);
  std::uniform_int_distribution<long> num(1, b - 1);
  return Q(num(rng)) / Q(b);
}

inline Q random_positive(std::mt19937_64& rng, long maxnum = 9, long maxden = 9) {
  std::uniform_int_distribution<long> a(1, maxnum), b(1, maxden);
  return Q(a(rng)) / Q(b(rng));
}

/// Richardson extrapolation of central differences at h and h/2.
template <class F>
double derivative(F f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

}  // namespace oracle

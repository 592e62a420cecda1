#include "parrondo/linalg.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "parrondo/errors.hpp"

namespace parrondo {

namespace {

// Relative pivot threshold for the float backend.
constexpr double kFloatSingularTolerance = 1e-13;

}  // namespace

template <Scalar S>
Matrix<S> solve(const Matrix<S>& a, const Matrix<S>& b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw DomainError("solve: dimension mismatch");
  }
  Matrix<S> m = a;
  Matrix<S> rhs = b;
  std::vector<Eigen::Index> column_of(n);
  for (Eigen::Index j = 0; j < n; ++j) column_of[j] = j;

  double scale = 0.0;
  if constexpr (!ScalarTraits<S>::exact) scale = m.cwiseAbs().maxCoeff();

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = -1;
    Eigen::Index pivot_col = k;
    if constexpr (ScalarTraits<S>::exact) {
      for (Eigen::Index j = k; j < n && pivot_row < 0; ++j) {
        for (Eigen::Index i = k; i < n; ++i) {
          if (m(i, j) != 0) {
            pivot_row = i;
            pivot_col = j;
            break;
          }
        }
      }
    } else {
      double best = 0.0;
      for (Eigen::Index i = k; i < n; ++i) {
        if (std::abs(m(i, k)) > best) {
          best = std::abs(m(i, k));
          pivot_row = i;
        }
      }
      if (best <= kFloatSingularTolerance * scale) pivot_row = -1;
    }
    if (pivot_row < 0) throw SingularMatrixError("solve: matrix is singular");

    if (pivot_row != k) {
      m.row(k).swap(m.row(pivot_row));
      rhs.row(k).swap(rhs.row(pivot_row));
    }
    if (pivot_col != k) {
      m.col(k).swap(m.col(pivot_col));
      std::swap(column_of[k], column_of[pivot_col]);
    }

    const S pivot = m(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      const S factor = m(i, k) / pivot;
      m.row(i).tail(n - k) -= factor * m.row(k).tail(n - k);
      rhs.row(i) -= factor * rhs.row(k);
    }
  }

  Matrix<S> y(n, rhs.cols());
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    RowVector<S> acc = rhs.row(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (m(i, j) != 0) acc -= m(i, j) * y.row(j);
    }
    y.row(i) = acc / m(i, i);
  }
  // Undo the column permutation: y holds unknowns in pivot order.
  Matrix<S> x(n, rhs.cols());
  for (Eigen::Index j = 0; j < n; ++j) x.row(column_of[j]) = y.row(j);
  return x;
}

template <Scalar S>
Matrix<S> inverse(const Matrix<S>& a) {
  return solve<S>(a, Matrix<S>::Identity(a.rows(), a.cols()));
}

template <Scalar S>
Matrix<S> power(const Matrix<S>& m, int k) {
  if (k < 0) throw DomainError("power: negative exponent");
  Matrix<S> result = Matrix<S>::Identity(m.rows(), m.cols());
  Matrix<S> base = m;
  while (k > 0) {
    if (k & 1) result = (result * base).eval();
    k >>= 1;
    if (k > 0) base = (base * base).eval();
  }
  return result;
}

template <Scalar S>
Matrix<S> geometric_sum(const Matrix<S>& m, int k) {
  if (k < 0) throw DomainError("geometric_sum: negative length");
  Matrix<S> sum = Matrix<S>::Zero(m.rows(), m.cols());
  Matrix<S> term = Matrix<S>::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) {
    sum += term;
    if (i + 1 < k) term = (term * m).eval();
  }
  return sum;
}

template <Scalar S>
Matrix<S> weighted(const Matrix<S>& p, const Matrix<S>& w, int order) {
  Matrix<S> out = p;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      S factor = 1;
      for (int o = 0; o < order; ++o) factor *= w(i, j);
      out(i, j) = p(i, j) * factor;
    }
  }
  return out;
}

template <Scalar S>
Support support(const Matrix<S>& m) {
  return m.unaryExpr([](const S& x) { return x > 0; });
}

Support support_product(const Support& a, const Support& b) {
  Support out = Support::Constant(a.rows(), b.cols(), false);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (!a(i, k)) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        if (b(k, j)) out(i, j) = true;
      }
    }
  }
  return out;
}

#define PARRONDO_INSTANTIATE(S)                                         \
  template Matrix<S> solve<S>(const Matrix<S>&, const Matrix<S>&);      \
  template Matrix<S> inverse<S>(const Matrix<S>&);                      \
  template Matrix<S> power<S>(const Matrix<S>&, int);                   \
  template Matrix<S> geometric_sum<S>(const Matrix<S>&, int);           \
  template Matrix<S> weighted<S>(const Matrix<S>&, const Matrix<S>&, int); \
  template Support support<S>(const Matrix<S>&);

PARRONDO_INSTANTIATE(Rational)
PARRONDO_INSTANTIATE(double)

#undef PARRONDO_INSTANTIATE

}  // namespace parrondo

#pragma once

#include <Eigen/Dense>

#include "parrondo/scalar.hpp"

namespace parrondo {

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic>;

/// Solves A X = B by Gaussian elimination. Exact scalars use full pivoting on
/// the first nonzero entry; doubles use partial pivoting on magnitude.
/// Throws SingularMatrixError.
template <Scalar S>
Matrix<S> solve(const Matrix<S>& a, const Matrix<S>& b);

template <Scalar S>
Matrix<S> inverse(const Matrix<S>& a);

/// m^k for k >= 0 by repeated squaring.
template <Scalar S>
Matrix<S> power(const Matrix<S>& m, int k);

/// I + m + ... + m^(k-1); the zero matrix for k == 0.
template <Scalar S>
Matrix<S> geometric_sum(const Matrix<S>& m, int k);

/// Entrywise p(i,j) * w(i,j)^order, i.e. P' (order 1) and P'' (order 2).
template <Scalar S>
Matrix<S> weighted(const Matrix<S>& p, const Matrix<S>& w, int order);

template <Scalar To, Scalar From>
Matrix<To> cast_matrix(const Matrix<From>& m) {
  if constexpr (std::same_as<To, From>) {
    return m;
  } else {
    static_assert(std::same_as<From, Rational> && std::same_as<To, double>);
    return m.unaryExpr([](const Rational& x) { return to_float(x); });
  }
}

/// Boolean product of supports (positive-entry patterns).
using Support = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

template <Scalar S>
Support support(const Matrix<S>& m);

Support support_product(const Support& a, const Support& b);

}  // namespace parrondo

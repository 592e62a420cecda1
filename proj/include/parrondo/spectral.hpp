#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "parrondo/scalar.hpp"

namespace parrondo {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Capital-dependent family

/// a_r = (1 - (-1/2)^r) / 3; P_A^r has diagonal 1 - 2 a_r and off-diagonal a_r.
double capital_a(int r);

struct CapitalSpectrum {
  double S = 0.0;  // sqrt((1+rho^2)(1+4rho+rho^2))
  double e1 = 0.0;
  double e2 = 0.0;
  Eigen::Matrix3d R;  // columns: right eigenvectors for 1, e1, e2
  Eigen::Matrix3d L;  // R^{-1}
  bool degenerate = false;  // rho == 1: e1 == e2 == -1/2
};

CapitalSpectrum capital_spectrum(double rho);

/// mu_[r,s](0) = E_{r,s} / D_{r,s}. Throws DegenerateParametersError at rho == 1.
double capital_pattern_mean_closed(double rho, int r, int s);

/// (r+s)^{-1} pi_{s,r} R D_s L zeta evaluated with the spectral matrices.
double capital_pattern_mean_spectral(double rho, int r, int s);

// ---------------------------------------------------------------------------
// History-dependent family

/// Cubic and Cardano intermediates, computed in the requested backend so the
/// discriminant sign can be decided exactly.
template <Scalar S>
struct HistoryCubic {
  S a2, a1, a0;
  S alpha, beta;
  S discriminant;  // beta^2 + 4 alpha^3
};

template <Scalar S>
HistoryCubic<S> history_cubic(const S& kappa, const S& lambda);

/// Region of the (kappa, lambda) parameter map: 1..6, or 0 on the fair lines
/// kappa == lambda, lambda == 1 and on the curve discriminant == 0.
/// Regions 1, 3, 4 lie where mixtures win, 2, 5, 6 where they lose;
/// the discriminant is negative in 4 and 5 and positive elsewhere.
int history_region(int mixture_sign, int discriminant_sign, bool kappa_below_lambda);
int history_region(const Rational& kappa, const Rational& lambda);

struct HistorySpectrum {
  double kappa = 0.0;
  double lambda = 0.0;
  HistoryCubic<double> cubic;
  std::array<Complex, 3> e{};  // nonunit eigenvalues e1, e2, e3
  int region = 0;
  bool degenerate = false;  // repeated eigenvalue (discriminant == 0)
  Eigen::Matrix4cd R;       // columns r0 = 1, r(e1), r(e2), r(e3)
  Eigen::Matrix4cd L;       // R^{-1}; unset when degenerate
};

/// Eigenvalues by Cardano (discriminant > 0) or the trigonometric form
/// (discriminant < 0). The real cube root is taken for negative radicands.
HistorySpectrum history_spectrum(double kappa, double lambda);

/// Right eigenvector r(x) of P_B for a nonunit eigenvalue x.
Eigen::Vector4cd history_eigenvector(double kappa, double lambda, Complex x);

struct HistoryCoefficients {
  double c0 = 0.0;
  std::array<Complex, 3> c{};
  double b0 = 0.0;
  std::array<Complex, 3> b{};
  std::array<Complex, 3> f0{};
  std::array<Complex, 3> f1{};
  std::array<Complex, 3> f2{};
};

/// Throws DegenerateParametersError when kappa * lambda == 1 or the
/// eigenvalues repeat.
HistoryCoefficients history_coefficients(const HistorySpectrum& spectrum);

/// E_s = c0 - sum c_i e_i^s; (r+s) mu_[r,s](0) for r >= 2.
double history_Es(double kappa, double lambda, int s);
/// G_s, H_s and F_s = E_s + G_s H_s; (1+s) mu_[1,s](0) = F_s.
double history_Gs(double kappa, double lambda, int s);
double history_Hs(double kappa, double lambda, int s);
double history_Fs(double kappa, double lambda, int s);

/// Matrix forms u R D_s L zeta, v R D_s L zeta, with u = (1,1,1,1)/4 and
/// v = (1,1,-1,-1)/4.
double history_Es_matrix(double kappa, double lambda, int s);
double history_Hs_matrix(double kappa, double lambda, int s);

/// |c0| - sum |c_i| |e_i|^s.
double es_bound(const HistorySpectrum& sp, const HistoryCoefficients& co, int s);

/// Lower bound certifying sign(F_s) = sign(c0). `denominator_positive`
/// reports whether 4 - sum |f2_i| |e_i|^s > 0.
double fs_bound(const HistorySpectrum& sp, const HistoryCoefficients& co, int s,
                bool* denominator_positive = nullptr);

inline constexpr int kBoundSearchCap = 100000;

/// Smallest s >= 1 with es_bound > 0 (resp. fs_bound > 0). Throws
/// DegenerateParametersError when c0 == 0, kappa*lambda == 1 or the
/// discriminant vanishes (decided exactly), DomainError past the search cap.
int bound_search_s0(const Rational& kappa, const Rational& lambda);
int bound_search_s1(const Rational& kappa, const Rational& lambda);

/// Throws unless the closed forms and bounds apply at (kappa, lambda).
void check_closed_form_domain(const Rational& kappa, const Rational& lambda,
                              bool require_nonzero_c0);

enum class SignMode { pattern_r_ge_2, pattern_r_eq_1 };

struct SignReport {
  SignMode mode = SignMode::pattern_r_ge_2;
  int bound = 0;          // s0 or s1
  int expected_sign = 0;  // sign(c0)
  bool checked_prefix_ok = false;
  std::vector<int> exceptions;  // s < bound where the exact mean had another sign
};

/// Computes the bound index, then checks for every s below it that the exact
/// mu_[r,s](0) (r = 2, or r = 1) has the sign of c0.
SignReport verify_sign_at_point(const Rational& kappa, const Rational& lambda, SignMode mode);

/// The 55 distinct fractions k/l with k, l in 1..9, ascending.
std::vector<Rational> digit_fractions();

/// Pairs (kappa, lambda) over digit_fractions() with lambda < 1 + kappa,
/// kappa != lambda, lambda != 1, kappa*lambda != 1, nonzero discriminant.
std::vector<std::pair<Rational, Rational>> sweep_cases();

}  // namespace parrondo

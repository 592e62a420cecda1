#include "parrondo/spectral.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "parrondo/errors.hpp"
#include "parrondo/games.hpp"
#include "parrondo/linalg.hpp"
#include "parrondo/markov.hpp"

namespace parrondo {

namespace {

double real_part(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real()))) {
    throw std::logic_error(std::string(what) + ": imaginary residue " +
                           format_double(z.imag()));
  }
  return z.real();
}

Complex cpow(Complex z, int s) {
  Complex out{1.0, 0.0};
  Complex base = z;
  for (unsigned k = static_cast<unsigned>(s); k != 0; k >>= 1) {
    if (k & 1U) out *= base;
    base *= base;
  }
  return out;
}

Eigen::VectorXd zeta_of(const GameChain<double>& chain) {
  return weighted(chain.transition, chain.payoff, 1).rowwise().sum();
}

Eigen::Matrix3d capital_power_A(int r) {
  const double a = capital_a(r);
  Eigen::Matrix3d m = Eigen::Matrix3d::Constant(a);
  m.diagonal().setConstant(1.0 - 2.0 * a);
  return m;
}

}  // namespace

double capital_a(int r) { return (1.0 - std::pow(-0.5, r)) / 3.0; }

CapitalSpectrum capital_spectrum(double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  CapitalSpectrum sp;
  const double r2 = rho * rho;
  const double S = std::sqrt((1 + r2) * (1 + 4 * rho + r2));
  sp.S = S;
  const double half_gap = (1 - rho) * S / (2 * (1 + rho) * (1 + r2));
  sp.e1 = -0.5 + half_gap;
  sp.e2 = -0.5 - half_gap;
  sp.degenerate = (rho == 1.0);
  const double r3 = r2 * rho;
  sp.R << 1, (1 + rho) * (1 - r2 - S), (1 + rho) * (1 - r2 + S),
      1, 2 + rho + 2 * r2 + r3 + rho * S, 2 + rho + 2 * r2 + r3 - rho * S,
      1, -(1 + 2 * rho + r2 + 2 * r3 - S), -(1 + 2 * rho + r2 + 2 * r3 + S);
  sp.L = sp.R.inverse();
  return sp;
}

double capital_pattern_mean_closed(double rho, int r, int s) {
  if (r < 1 || s < 1) throw DomainError("r and s must be at least 1");
  const CapitalSpectrum sp = capital_spectrum(rho);
  if (sp.degenerate) {
    throw DegenerateParametersError("rho = 1: use the direct method");
  }
  const double a = capital_a(r);
  const double x = std::pow(sp.e1, s);
  const double y = std::pow(sp.e2, s);
  const double r2 = rho * rho;
  const double E =
      3 * a *
      ((2 + (3 * a - 1) * (x + y - 2 * x * y) - (x + y)) * (1 - rho) * (1 + rho) * sp.S +
       a * (y - x) * (5 * (1 + rho) * (1 + rho) * (1 + r2) - 4 * r2)) *
      (1 - rho) * (1 - rho);
  const double q = 1 + rho + r2;
  const double D = 4.0 * (r + s) * (1 + (3 * a - 1) * x) * (1 + (3 * a - 1) * y) * q * q * sp.S;
  return E / D;
}

double capital_pattern_mean_spectral(double rho, int r, int s) {
  if (r < 1 || s < 1) throw DomainError("r and s must be at least 1");
  const CapitalSpectrum sp = capital_spectrum(rho);
  const GameChain<double> b = capital_game_B<double>(rho, 0.0);
  const Eigen::Vector3d ds{1.0, std::pow(sp.e1, s), std::pow(sp.e2, s)};
  const Eigen::Matrix3d pbs = sp.R * ds.asDiagonal() * sp.L;
  const Matrix<double> cycle = pbs * capital_power_A(r);
  const RowVector<double> pi = stationary_distribution<double>(cycle);
  Eigen::Vector3d d;
  d << s, (1 - std::pow(sp.e1, s)) / (1 - sp.e1), (1 - std::pow(sp.e2, s)) / (1 - sp.e2);
  const double total = pi * sp.R * d.asDiagonal() * sp.L * zeta_of(b);
  return total / (r + s);
}

template <Scalar S>
HistoryCubic<S> history_cubic(const S& k, const S& l) {
  HistoryCubic<S> c;
  const S one(1);
  const S k2 = k * k, k3 = k2 * k;
  const S l2 = l * l, l3 = l2 * l, l4 = l3 * l, l5 = l4 * l;
  const S den = (one + k) * (one + k) * (one + l) * (one + l);
  c.a2 = (l - k) / (one + k);
  c.a1 = (l - k) * l * (S(2) + k + l) / den;
  c.a0 = -(one - k * l) * (one + k - l - l2) / den;
  c.alpha = (l - k) * (k + S(5) * l + S(5) * k * l + l2 + k * l2 - l3);
  c.beta = (one + l) *
           (S(27) + S(54) * k - S(27) * l + S(27) * k2 - S(54) * k * l - S(27) * l2 + S(2) * k3 -
            S(42) * k2 * l - S(30) * k * l2 + S(16) * l3 - S(14) * k3 * l + S(6) * k2 * l2 +
            S(30) * k * l3 + S(5) * l4 + S(2) * k3 * l2 + S(21) * k2 * l3 + S(6) * k * l4 -
            S(2) * l5);
  c.discriminant = c.beta * c.beta + S(4) * c.alpha * c.alpha * c.alpha;
  return c;
}

template HistoryCubic<Rational> history_cubic(const Rational&, const Rational&);
template HistoryCubic<double> history_cubic(const double&, const double&);

int history_region(int mixture_sign, int discriminant_sign, bool kappa_below_lambda) {
  if (mixture_sign == 0 || discriminant_sign == 0) return 0;
  if (mixture_sign > 0) {
    if (discriminant_sign < 0) return 4;
    return kappa_below_lambda ? 1 : 3;
  }
  if (discriminant_sign < 0) return 5;
  return kappa_below_lambda ? 2 : 6;
}

int history_region(const Rational& kappa, const Rational& lambda) {
  const int c0_sign = sign(Rational((lambda - kappa) * (Rational(1) - lambda)));
  const HistoryCubic<Rational> c = history_cubic(kappa, lambda);
  return history_region(c0_sign, sign(c.discriminant), kappa < lambda);
}

Eigen::Vector4cd history_eigenvector(double k, double l, Complex x) {
  const double m = 1 + k - l - l * l;
  Eigen::Vector4cd v;
  v(0) = -l * m - (1 + l) * m * x + (1 + k) * (1 + l) * (1 + l) * x * x;
  v(1) = m - (1 + k) * (1 + l) * (l - k) * x - (1 + k) * (1 + k) * (1 + l) * x * x;
  v(2) = -(1 + k - l) * (1 - k * l) + (1 + k) * (1 - k * l) * x;
  v(3) = l * (1 - k * l);
  return v;
}

HistorySpectrum history_spectrum(double k, double l) {
  if (!(k > 0.0) || !(l > 0.0) || !(l < 1.0 + k)) {
    throw DomainError("history parameters need kappa > 0, lambda > 0, lambda < 1 + kappa");
  }
  HistorySpectrum sp;
  sp.kappa = k;
  sp.lambda = l;
  sp.cubic = history_cubic(k, l);
  const double alpha = sp.cubic.alpha;
  const double beta = sp.cubic.beta;
  const double disc = sp.cubic.discriminant;
  const double den = 3 * (1 + k) * (1 + l);
  const double shift = (l - k) / (3 * (1 + k));
  const Complex omega{-0.5, std::sqrt(3.0) / 2};

  if (disc > 0.0) {
    const double P = std::cbrt((beta + std::sqrt(disc)) / 2);
    const double Q = P != 0.0 ? -alpha / P : std::cbrt((beta - std::sqrt(disc)) / 2);
    sp.e[0] = (P + Q) / den - shift;
    sp.e[1] = (omega * P + omega * omega * Q) / den - shift;
    sp.e[2] = (omega * omega * P + omega * Q) / den - shift;
    sp.e[0].imag(0.0);
  } else if (disc < 0.0) {
    const double root = std::sqrt(-alpha);
    const double theta = std::acos(std::clamp(beta / (2 * std::sqrt(-alpha * alpha * alpha)), -1.0, 1.0));
    for (int i = 0; i < 3; ++i) {
      sp.e[i] = 2 * root * std::cos((theta + 2 * std::numbers::pi * i) / 3) / den - shift;
    }
  } else {
    const double P = std::cbrt(beta / 2);
    sp.e[0] = 2 * P / den - shift;
    sp.e[1] = sp.e[2] = -P / den - shift;
    sp.degenerate = true;
  }

  const int c0_sign = sign((l - k) * (1 - l));
  sp.region = history_region(c0_sign, sign(disc), k < l);

  sp.R.col(0).setOnes();
  for (int i = 0; i < 3; ++i) sp.R.col(i + 1) = history_eigenvector(k, l, sp.e[i]);
  if (!sp.degenerate) sp.L = sp.R.inverse();
  return sp;
}

HistoryCoefficients history_coefficients(const HistorySpectrum& sp) {
  const double k = sp.kappa, l = sp.lambda;
  if (sp.degenerate) throw DegenerateParametersError("repeated eigenvalue");
  if (1 - k * l == 0.0) throw DegenerateParametersError("kappa * lambda = 1");
  const double k2 = k * k, k3 = k2 * k;
  const double l2 = l * l, l3 = l2 * l, l4 = l3 * l, l5 = l4 * l;
  const double K1 = 1 + 3 * k - 2 * l + 3 * k2 - 4 * k * l - l2 + k3 - 9 * k * l2 + 6 * l3 +
                    2 * k3 * l - 7 * k2 * l2 + 6 * k * l3 + k3 * l2 - 2 * k2 * l3 +
                    4 * k * l4 - 2 * l5;
  const double K2 = 1 + 2 * k - 3 * l + k2 - 2 * k * l + k2 * l - 2 * k * l2 + 2 * l3;
  const double ok = 1 + k, ol = 1 + l, kl = 1 - k * l;
  const double m = 1 + k - l - l2;

  auto tail = [&](Complex y, Complex z) {
    return K1 - ok * ol * K2 * (y + z) + ok * ok * ol * ol * (1 + k - 2 * l) * y * z;
  };
  auto g = [&](Complex y, Complex z) {
    return K2 - ok * ol * (1 + k - 2 * l) * (y + z) + ok * ok * ol * y * z;
  };
  auto quad2 = [&](Complex x) {
    return 2 + 2 * k - 4 * l - 2 * k * l - k2 * l + 2 * k * l2 + l3 -
           (2 + k - k2 + l - 2 * k2 * l - l2 + k * l2 - l3) * x + ok * ol * (l - k) * x * x;
  };
  auto f = [&](Complex x, Complex y, Complex z) {
    return (l - k) * (l * (l - k) - m * x + ok * ol * x * x) * tail(y, z) /
           (4 * ok * ok * ok * l * ol * ol * kl * (1.0 - x) * (x - y) * (x - z));
  };
  auto f0 = [&](Complex x, Complex y, Complex z) {
    return (1 + k - 2 * l - ok * x) * g(y, z) / (2 * ok * ok * l * ol * (x - y) * (x - z));
  };
  auto f1 = [&](Complex x, Complex y, Complex z) {
    return ((1 - l) * m - ol * (1 - k2 + k * l - l2) * x + ok * ol * (l - k) * x * x) * g(y, z) /
           (2 * ok * ok * l * ol * kl * (x - y) * (x - z));
  };
  auto f2 = [&](Complex x, Complex y, Complex z) {
    return quad2(x) * g(y, z) / (ok * ok * l * ol * kl * (x - y) * (x - z));
  };
  auto h = [&](Complex x, Complex y, Complex z) {
    return quad2(x) * tail(y, z) /
           (4 * ok * ok * ok * l * ol * ol * kl * (1.0 - x) * (x - y) * (x - z));
  };

  HistoryCoefficients co;
  co.c0 = ok * (l - k) * (1 - l) / (4 * l * (2 + k + l));
  co.b0 = -(1 + k - 2 * l - l2 + k * l2) / (4 * l * ol);
  for (int i = 0; i < 3; ++i) {
    const Complex x = sp.e[i], y = sp.e[(i + 1) % 3], z = sp.e[(i + 2) % 3];
    co.c[i] = f(x, y, z);
    co.b[i] = h(x, y, z);
    co.f0[i] = f0(x, y, z);
    co.f1[i] = f1(x, y, z);
    co.f2[i] = f2(x, y, z);
  }
  return co;
}

namespace {

struct Evaluated {
  HistorySpectrum sp;
  HistoryCoefficients co;
};

Evaluated evaluate(double k, double l) {
  Evaluated ev{history_spectrum(k, l), {}};
  ev.co = history_coefficients(ev.sp);
  return ev;
}

Complex series(double constant, const std::array<Complex, 3>& c, const std::array<Complex, 3>& e,
               int s) {
  Complex out = constant;
  for (int i = 0; i < 3; ++i) out -= c[i] * cpow(e[i], s);
  return out;
}

double gs_of(const Evaluated& ev, int s) {
  Complex num = 0.0, den = 4.0;
  for (int i = 0; i < 3; ++i) {
    const Complex p = cpow(ev.sp.e[i], s);
    num += (ev.co.f0[i] - ev.co.f1[i]) * p;
    den += ev.co.f2[i] * p;
  }
  return real_part(2.0 * num / den, "G_s");
}

Complex matrix_form(const HistorySpectrum& sp, const Eigen::RowVector4cd& left, int s) {
  const GameChain<double> b = history_game_B<double>(sp.kappa, sp.lambda, 0.0);
  const Eigen::VectorXd z = zeta_of(b);
  Eigen::Vector4cd d;
  d(0) = static_cast<double>(s);
  for (int i = 0; i < 3; ++i) d(i + 1) = (1.0 - cpow(sp.e[i], s)) / (1.0 - sp.e[i]);
  const Eigen::Vector4cd zc = z.cast<Complex>();
  return (left * sp.R * d.asDiagonal() * sp.L * zc)(0);
}

}  // namespace

double history_Es(double k, double l, int s) {
  const Evaluated ev = evaluate(k, l);
  return real_part(series(ev.co.c0, ev.co.c, ev.sp.e, s), "E_s");
}

double history_Hs(double k, double l, int s) {
  const Evaluated ev = evaluate(k, l);
  return real_part(series(ev.co.b0, ev.co.b, ev.sp.e, s), "H_s");
}

double history_Gs(double k, double l, int s) { return gs_of(evaluate(k, l), s); }

double history_Fs(double k, double l, int s) {
  const Evaluated ev = evaluate(k, l);
  const double E = real_part(series(ev.co.c0, ev.co.c, ev.sp.e, s), "E_s");
  const double H = real_part(series(ev.co.b0, ev.co.b, ev.sp.e, s), "H_s");
  return E + gs_of(ev, s) * H;
}

double history_Es_matrix(double k, double l, int s) {
  const HistorySpectrum sp = history_spectrum(k, l);
  if (sp.degenerate) throw DegenerateParametersError("repeated eigenvalue");
  return real_part(matrix_form(sp, Eigen::RowVector4cd::Constant(0.25), s), "E_s");
}

double history_Hs_matrix(double k, double l, int s) {
  const HistorySpectrum sp = history_spectrum(k, l);
  if (sp.degenerate) throw DegenerateParametersError("repeated eigenvalue");
  Eigen::RowVector4cd v;
  v << 0.25, 0.25, -0.25, -0.25;
  return real_part(matrix_form(sp, v, s), "H_s");
}

double es_bound(const HistorySpectrum& sp, const HistoryCoefficients& co, int s) {
  double tail = 0.0;
  for (int i = 0; i < 3; ++i) tail += std::abs(co.c[i]) * std::pow(std::abs(sp.e[i]), s);
  return std::abs(co.c0) - tail;
}

double fs_bound(const HistorySpectrum& sp, const HistoryCoefficients& co, int s,
                bool* denominator_positive) {
  double c_tail = 0.0, g_num = 0.0, g_den = 4.0, b_sum = std::abs(co.b0);
  for (int i = 0; i < 3; ++i) {
    const double p = std::pow(std::abs(sp.e[i]), s);
    c_tail += std::abs(co.c[i]) * p;
    g_num += std::abs(co.f0[i] - co.f1[i]) * p;
    g_den -= std::abs(co.f2[i]) * p;
    b_sum += std::abs(co.b[i]) * p;
  }
  if (denominator_positive) *denominator_positive = g_den > 0.0;
  return std::abs(co.c0) - (c_tail + 2 * g_num / g_den * b_sum);
}

void check_closed_form_domain(const Rational& k, const Rational& l, bool require_nonzero_c0) {
  const Rational one(1);
  if (k <= 0 || l <= 0 || l >= one + k) {
    throw DomainError("history parameters need kappa > 0, lambda > 0, lambda < 1 + kappa");
  }
  if (k * l == one) throw DegenerateParametersError("kappa * lambda = 1");
  if (history_cubic(k, l).discriminant == 0) {
    throw DegenerateParametersError("repeated eigenvalue (beta^2 + 4 alpha^3 = 0)");
  }
  if (require_nonzero_c0 && (k == l || l == one)) {
    throw DegenerateParametersError("c0 = 0 (kappa = lambda or lambda = 1)");
  }
}

namespace {

template <class Accept>
int search(const Rational& kappa, const Rational& lambda, Accept accept) {
  check_closed_form_domain(kappa, lambda, true);
  const Evaluated ev = evaluate(to_float(kappa), to_float(lambda));
  for (int s = 1; s <= kBoundSearchCap; ++s) {
    if (accept(ev, s)) return s;
  }
  throw DomainError("bound search cap exceeded");
}

}  // namespace

int bound_search_s0(const Rational& kappa, const Rational& lambda) {
  return search(kappa, lambda,
                [](const Evaluated& ev, int s) { return es_bound(ev.sp, ev.co, s) > 0.0; });
}

int bound_search_s1(const Rational& kappa, const Rational& lambda) {
  return search(kappa, lambda, [](const Evaluated& ev, int s) {
    bool den_ok = false;
    const double v = fs_bound(ev.sp, ev.co, s, &den_ok);
    return den_ok && v > 0.0;
  });
}

SignReport verify_sign_at_point(const Rational& kappa, const Rational& lambda, SignMode mode) {
  SignReport rep;
  rep.mode = mode;
  rep.bound = mode == SignMode::pattern_r_ge_2 ? bound_search_s0(kappa, lambda)
                                                : bound_search_s1(kappa, lambda);
  rep.expected_sign = sign(Rational((lambda - kappa) * (Rational(1) - lambda)));

  // Exact direct method, carrying P_B^s and I + ... + P_B^{s-1} forward in s.
  const int r = mode == SignMode::pattern_r_ge_2 ? 2 : 1;
  const GameChain<Rational> a = history_game_A<Rational>(Rational(0));
  const GameChain<Rational> b = history_game_B<Rational>(kappa, lambda, Rational(0));
  const Matrix<Rational> par = power(a.transition, r);
  const Vector<Rational> zeta = weighted(b.transition, b.payoff, 1).rowwise().sum();
  Matrix<Rational> pbs = Matrix<Rational>::Identity(4, 4);
  Matrix<Rational> sum = Matrix<Rational>::Zero(4, 4);
  for (int s = 1; s < rep.bound; ++s) {
    sum += pbs;
    pbs = (pbs * b.transition).eval();
    const RowVector<Rational> pi = stationary_distribution<Rational>(pbs * par);
    const Rational total = (pi * sum * zeta)(0);
    if (sign(total) != rep.expected_sign) rep.exceptions.push_back(s);
  }
  rep.checked_prefix_ok = rep.exceptions.empty();
  return rep;
}

std::vector<Rational> digit_fractions() {
  std::set<Rational> seen;
  for (int k = 1; k <= 9; ++k) {
    for (int l = 1; l <= 9; ++l) seen.insert(Rational(k) / Rational(l));
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::pair<Rational, Rational>> sweep_cases() {
  const std::vector<Rational> values = digit_fractions();
  const Rational one(1);
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& k : values) {
    for (const Rational& l : values) {
      if (l >= one + k || k == l || l == one || k * l == one) continue;
      if (history_cubic(k, l).discriminant == 0) continue;
      out.emplace_back(k, l);
    }
  }
  return out;
}

}  // namespace parrondo

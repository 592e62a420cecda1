#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parrondo/games.hpp"
#include "parrondo/markov.hpp"
#include "parrondo/patterns.hpp"

namespace parrondo {

struct MixtureSign {
  Rational mu;
  Outcome outcome = Outcome::fair;
};

/// Exact mu_C(0) of the gamma-mixture and its sign.
MixtureSign mixture_sign_capital(const Rational& rho, const Rational& gamma);
MixtureSign mixture_sign_history(const Rational& kappa, const Rational& lambda,
                                 const Rational& gamma);

/// What is being played: the gamma-mixture of the point, or the pattern [r,s].
struct PlayTarget {
  bool pattern = false;
  int r = 1;
  int s = 1;

  static PlayTarget mixture() { return {}; }
  static PlayTarget ab(int r, int s) { return {true, r, s}; }
};

/// Exact mu(eps) of the target at the point (point.eps is ignored).
Rational target_mean(const ParamPoint<Rational>& point, const PlayTarget& target,
                     const Rational& eps);

/// Largest eps keeping every probability in (0,1), less a 1e-9 guard.
Rational epsilon_max(const ParamPoint<Rational>& point);

struct EpsilonResult {
  Rational lower;  // mu(lower) > 0
  Rational upper;  // mu(upper) <= 0, or epsilon_max when saturated
  double eps0 = 0.0;
  bool saturated = false;  // mu stays positive up to epsilon_max
  int evaluations = 0;
};

/// Bisection on eps -> mu(eps) over (0, epsilon_max) until upper - lower
/// <= 1e-12. Midpoints are the double nearest the interval center, signs are
/// exact. Throws DomainError when mu(0) <= 0.
EpsilonResult fairness_epsilon(const ParamPoint<Rational>& point, const PlayTarget& target);

/// pi_B P_A^r Z_B zeta_B, the limit of (r+s) mu_[r,s] as s grows.
template <Scalar S>
S pattern_limit(const GameChain<S>& a, const GameChain<S>& b, int r);

/// a_r = (1 - (-1/2)^r) / 3, exactly.
Rational capital_a_exact(int r);
/// 3 a_r (1-rho)^3 (1+rho) / (2 (1+rho+rho^2)^2)
Rational capital_limit_closed(const Rational& rho, int r);
/// (1+kappa)(lambda-kappa)(1-lambda) / (4 lambda (2+kappa+lambda))
Rational history_limit_closed(const Rational& kappa, const Rational& lambda);

struct ConvexityReport {
  bool convex_along_segment = false;
  double second_derivative = 0.0;  // g''(p0), or h''(1) for history
  int sign = 0;                    // sign of the second derivative at the point
};

/// g(p) = 1 / (1 + sqrt(p / (1-p))), checked on the segment between p0 and 1/2.
ConvexityReport capital_fair_convexity(const Rational& p0);

/// h''(t) = -4 (p0+p1-1)(2p1-1) / [1 - (2p1-1) t]^3 on t in [0,1].
ConvexityReport history_fair_convexity(const Rational& p0, const Rational& p1);

struct GridAxis {
  std::string name;
  Rational lo;
  Rational hi;
  int resolution = 2;

  /// Center of cell i: lo + (i + 1/2)(hi - lo) / resolution.
  Rational center(int i) const;
};

struct GridCell {
  std::vector<Rational> params;
  bool valid = true;  // false: outside the parameter domain
  std::optional<Rational> mu;
  Outcome outcome = Outcome::fair;
  int region = -1;  // history only
  std::string error;
};

struct RegionGrid {
  Family family = Family::capital;
  std::vector<GridAxis> axes;
  PlayTarget target;
  Rational gamma{1, 2};
  std::vector<GridCell> cells;  // row-major, first axis slowest
};

/// Capital takes one axis (rho), history two (kappa, lambda). Cells outside
/// the domain are kept and marked invalid; other failures land in
/// GridCell::error.
RegionGrid region_grid(Family family, std::vector<GridAxis> axes, const PlayTarget& target,
                       const Rational& gamma, unsigned threads = 0);

std::string grid_csv(const RegionGrid& grid);
std::string grid_json(const RegionGrid& grid);

}  // namespace parrondo

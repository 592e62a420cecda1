#include "parrondo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/linalg.hpp"
#include "parrondo/parallel.hpp"
#include "parrondo/spectral.hpp"

namespace parrondo {

namespace {

void require_open_unit(const Rational& gamma) {
  if (gamma <= 0 || gamma >= 1) throw DomainError("gamma must lie in (0,1)");
}

MixtureSign sign_of_mixture(const ParamPoint<Rational>& point) {
  const Rational mu = analyze(make_mixture(point)).mu;
  return {mu, classify(mu)};
}

}  // namespace

MixtureSign mixture_sign_capital(const Rational& rho, const Rational& gamma) {
  require_open_unit(gamma);
  ParamPoint<Rational> p;
  p.family = Family::capital;
  p.rho = rho;
  p.gamma = gamma;
  return sign_of_mixture(p);
}

MixtureSign mixture_sign_history(const Rational& kappa, const Rational& lambda,
                                 const Rational& gamma) {
  require_open_unit(gamma);
  ParamPoint<Rational> p;
  p.family = Family::history;
  p.kappa = kappa;
  p.lambda = lambda;
  p.gamma = gamma;
  return sign_of_mixture(p);
}

Rational target_mean(const ParamPoint<Rational>& point, const PlayTarget& target,
                     const Rational& eps) {
  ParamPoint<Rational> p = point;
  p.eps = eps;
  if (!target.pattern) return analyze(make_mixture(p)).mu;
  const GamePair<Rational> g = make_games(p);
  return pattern_mean_direct(g.a, g.b, target.r, target.s);
}

Rational epsilon_max(const ParamPoint<Rational>& point) {
  const std::vector<Rational> probs = unbiased_probabilities(point);
  return *std::min_element(probs.begin(), probs.end()) - Rational(1, 1000000000);
}

EpsilonResult fairness_epsilon(const ParamPoint<Rational>& point, const PlayTarget& target) {
  EpsilonResult res;
  ++res.evaluations;
  if (target_mean(point, target, Rational(0)) <= 0) {
    throw DomainError("no Parrondo window: mu(0) <= 0");
  }
  Rational lo(0);
  Rational hi = epsilon_max(point);
  ++res.evaluations;
  if (target_mean(point, target, hi) > 0) {
    res.lower = hi;
    res.upper = hi;
    res.eps0 = to_float(hi);
    res.saturated = true;
    return res;
  }
  const Rational width(1, 1000000000000LL);
  while (hi - lo > width) {
    Rational mid = to_rational((to_float(lo) + to_float(hi)) / 2);
    if (mid <= lo || mid >= hi) mid = (lo + hi) / 2;
    ++res.evaluations;
    if (target_mean(point, target, mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.lower = lo;
  res.upper = hi;
  res.eps0 = to_float((lo + hi) / 2);
  return res;
}

template <Scalar S>
S pattern_limit(const GameChain<S>& a, const GameChain<S>& b, int r) {
  if (r < 1) throw DomainError("r must be at least 1");
  const RowVector<S> pi = stationary_distribution(b.transition);
  const Matrix<S> z = fundamental_matrix(b.transition, pi);
  const Vector<S> zeta = weighted(b.transition, b.payoff, 1).rowwise().sum();
  return (pi * power(a.transition, r) * z * zeta)(0);
}

template Rational pattern_limit(const GameChain<Rational>&, const GameChain<Rational>&, int);
template double pattern_limit(const GameChain<double>&, const GameChain<double>&, int);

Rational capital_a_exact(int r) {
  Rational p(1);
  for (int i = 0; i < r; ++i) p *= Rational(-1, 2);
  return (Rational(1) - p) / 3;
}

Rational capital_limit_closed(const Rational& rho, int r) {
  const Rational one(1);
  const Rational q = one + rho + rho * rho;
  const Rational d = one - rho;
  return 3 * capital_a_exact(r) * d * d * d * (one + rho) / (2 * q * q);
}

Rational history_limit_closed(const Rational& k, const Rational& l) {
  const Rational one(1);
  return (one + k) * (l - k) * (one - l) / (4 * l * (2 + k + l));
}

namespace {

double capital_g2(double p) {
  const double u = std::sqrt(p / (1 - p));
  const double u1 = u / (2 * p * (1 - p));
  const double u2 = u1 * u1 / u - u * (1 - 2 * p) / (2 * p * p * (1 - p) * (1 - p));
  return -u2 / ((1 + u) * (1 + u)) + 2 * u1 * u1 / ((1 + u) * (1 + u) * (1 + u));
}

}  // namespace

ConvexityReport capital_fair_convexity(const Rational& p0) {
  if (p0 <= 0 || p0 >= 1) throw DomainError("p0 must lie in (0,1)");
  const double p = to_float(p0);
  ConvexityReport rep;
  rep.second_derivative = capital_g2(p);
  rep.sign = p0 == Rational(1, 2) ? 0 : sign(rep.second_derivative);
  // g'' vanishes at 1/2 and keeps one sign on each side of it.
  rep.convex_along_segment = p0 <= Rational(1, 2);
  return rep;
}

ConvexityReport history_fair_convexity(const Rational& p0, const Rational& p1) {
  const Rational one(1);
  if (p0 <= 0 || p0 >= 1 || p1 <= 0 || p1 >= 1) {
    throw DomainError("p0 and p1 must lie in (0,1)");
  }
  if (p0 * p1 >= one - p1) throw DomainError("need p0 p1 < 1 - p1");
  const Rational c = p1 * 2 - 1;
  const Rational numer = -4 * (p0 + p1 - one) * c;
  const Rational den = one - c;
  ConvexityReport rep;
  rep.sign = sign(numer);
  rep.second_derivative = to_float(numer / (den * den * den));
  rep.convex_along_segment = rep.sign >= 0;
  return rep;
}

Rational GridAxis::center(int i) const {
  return lo + (Rational(2 * i + 1) / Rational(2 * resolution)) * (hi - lo);
}

RegionGrid region_grid(Family family, std::vector<GridAxis> axes, const PlayTarget& target,
                       const Rational& gamma, unsigned threads) {
  const std::size_t want = family == Family::capital ? 1 : 2;
  if (axes.size() != want) throw DomainError("wrong number of grid axes for the family");
  for (const GridAxis& ax : axes) {
    if (ax.resolution < 1) throw DomainError("grid resolution must be positive");
    if (ax.hi <= ax.lo) throw DomainError("grid range must be nonempty");
  }
  if (target.pattern && (target.r < 1 || target.s < 1)) {
    throw DomainError("r and s must be at least 1");
  }
  if (!target.pattern) require_open_unit(gamma);

  RegionGrid grid;
  grid.family = family;
  grid.axes = std::move(axes);
  grid.target = target;
  grid.gamma = gamma;
  std::size_t n = 1;
  for (const GridAxis& ax : grid.axes) n *= static_cast<std::size_t>(ax.resolution);
  grid.cells.resize(n);

  parallel_for(n, threads, [&](std::size_t idx) {
    GridCell& cell = grid.cells[idx];
    ParamPoint<Rational> p;
    p.family = family;
    p.gamma = gamma;
    if (family == Family::capital) {
      p.rho = grid.axes[0].center(static_cast<int>(idx));
      cell.params = {p.rho};
    } else {
      const auto res = static_cast<std::size_t>(grid.axes[1].resolution);
      p.kappa = grid.axes[0].center(static_cast<int>(idx / res));
      p.lambda = grid.axes[1].center(static_cast<int>(idx % res));
      cell.params = {p.kappa, p.lambda};
      if (p.lambda >= 1 + p.kappa) {
        cell.valid = false;
        return;
      }
    }
    try {
      cell.mu = target_mean(p, target, Rational(0));
      cell.outcome = classify(*cell.mu);
      if (family == Family::history) cell.region = history_region(p.kappa, p.lambda);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return grid;
}

namespace {

std::string cell_status(const GridCell& c) {
  if (!c.valid) return "invalid-domain";
  if (!c.mu) return "error";
  return std::string(to_string(c.outcome));
}

}  // namespace

std::string grid_csv(const RegionGrid& grid) {
  std::ostringstream out;
  for (const GridAxis& ax : grid.axes) out << ax.name << ',';
  out << "mu_float,mu_exact,classification,region\n";
  for (const GridCell& c : grid.cells) {
    for (const Rational& v : c.params) out << to_string(v) << ',';
    if (c.mu) out << format_double(to_float(*c.mu)) << ',' << to_string(*c.mu);
    else out << ',';
    out << ',' << cell_status(c) << ',';
    if (c.region >= 0) out << c.region;
    out << '\n';
  }
  return out.str();
}

std::string grid_json(const RegionGrid& grid) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = "parrondo/1";
  j["family"] = std::string(to_string(grid.family));
  if (grid.target.pattern) {
    j["target"] = {{"pattern", {{"r", grid.target.r}, {"s", grid.target.s}}}};
  } else {
    j["target"] = {{"mixture", {{"gamma", to_string(grid.gamma)}}}};
  }
  j["axes"] = ordered_json::array();
  for (const GridAxis& ax : grid.axes) {
    j["axes"].push_back({{"name", ax.name},
                         {"lo", to_string(ax.lo)},
                         {"hi", to_string(ax.hi)},
                         {"resolution", ax.resolution}});
  }
  j["cells"] = ordered_json::array();
  for (const GridCell& c : grid.cells) {
    ordered_json cell;
    ordered_json params = ordered_json::object();
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      params[grid.axes[i].name] = to_string(c.params[i]);
    }
    cell["params"] = params;
    if (c.mu) {
      cell["mu_float"] = to_float(*c.mu);
      cell["mu_exact"] = to_string(*c.mu);
    } else {
      cell["mu_float"] = nullptr;
      cell["mu_exact"] = nullptr;
    }
    cell["classification"] = cell_status(c);
    if (c.region >= 0) cell["region"] = c.region;
    if (!c.error.empty()) cell["error"] = c.error;
    j["cells"].push_back(std::move(cell));
  }
  return j.dump(2);
}

}  // namespace parrondo

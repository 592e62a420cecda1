#include "parrondo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parrondo/analysis.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/games.hpp"
#include "parrondo/linalg.hpp"
#include "parrondo/montecarlo.hpp"
#include "parrondo/parallel.hpp"
#include "parrondo/patterns.hpp"
#include "parrondo/spectral.hpp"

namespace parrondo::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchema = "parrondo/1";

struct Options {
  std::string family = "capital";
  std::string rho, kappa, lambda, gamma, eps = "0";
  std::string backend = "exact";
  std::string format;
  std::string game = "mixture";
  std::string word;
  int r = 0;
  int s = 0;
  // region
  std::string x_range, y_range;
  int resolution = 50;
  // simulate
  std::int64_t n_games = 100000;
  int replications = 1;
  std::uint64_t seed = 20240601;
  std::string initial_state = "stationary";
  unsigned threads = 0;
  // sweep-k
  std::size_t start = 0;
  long count = -1;
};

struct CheckFailed {};

ordered_json val(const Rational& x) { return to_string(x); }
ordered_json val(double x) { return x; }

Rational required(const std::string& text, const char* flag) {
  if (text.empty()) throw ParseError(std::string("missing --") + flag);
  return parse_rational(text);
}

ParamPoint<Rational> point_from(const Options& o, bool need_gamma) {
  ParamPoint<Rational> p;
  p.family = parse_family(o.family);
  if (p.family == Family::capital) {
    p.rho = required(o.rho, "rho");
  } else {
    p.kappa = required(o.kappa, "kappa");
    p.lambda = required(o.lambda, "lambda");
  }
  p.eps = parse_rational(o.eps);
  if (need_gamma) p.gamma = required(o.gamma, "gamma");
  else if (!o.gamma.empty()) p.gamma = parse_rational(o.gamma);
  check_family_parameters(p);
  return p;
}

ordered_json params_json(const ParamPoint<Rational>& p) {
  ordered_json j;
  if (p.family == Family::capital) {
    j["rho"] = to_string(p.rho);
  } else {
    j["kappa"] = to_string(p.kappa);
    j["lambda"] = to_string(p.lambda);
  }
  j["gamma"] = to_string(p.gamma);
  j["eps"] = to_string(p.eps);
  return j;
}

ordered_json header(const char* command, const ParamPoint<Rational>& p, const std::string& backend) {
  ordered_json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["backend"] = backend;
  j["family"] = std::string(to_string(p.family));
  j["params"] = params_json(p);
  return j;
}

bool exact_backend(const Options& o) {
  if (o.backend == "exact") return true;
  if (o.backend == "float") return false;
  throw ParseError("--backend must be exact or float");
}

PatternSpec word_from(const Options& o) {
  if (!o.word.empty()) return PatternSpec(o.word);
  if (o.r < 1 || o.s < 1) throw ParseError("give --word or both --r and --s (at least 1)");
  return PatternSpec::ab(o.r, o.s);
}

void emit_plain(const ordered_json& j, const std::string& prefix, std::ostream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      emit_plain(*it, key, out);
    } else if (it->is_string()) {
      out << key << " = " << it->get<std::string>() << '\n';
    } else {
      out << key << " = " << it->dump() << '\n';
    }
  }
}

void emit(const ordered_json& j, const std::string& format, std::ostream& out) {
  if (format.empty() || format == "json") {
    out << j.dump(2) << '\n';
  } else if (format == "plain") {
    emit_plain(j, "", out);
  } else {
    throw ParseError("unsupported --format for this command: " + format);
  }
}

template <Scalar S>
GameChain<S> pick_game(const ParamPoint<S>& p, const std::string& game) {
  const GamePair<S> g = make_games(p);
  if (game == "A") return g.a;
  if (game == "B") return g.b;
  if (game == "mixture" || game == "C") return make_mixture(p);
  throw ParseError("--game must be A, B or mixture");
}

template <Scalar S>
void fill_limits(ordered_json& j, const LimitParams<S>& lp) {
  j["mu"] = val(lp.mu);
  j["sigma2"] = val(lp.sigma2);
  if constexpr (ScalarTraits<S>::exact) {
    j["mu_float"] = to_float(lp.mu);
    j["sigma2_float"] = to_float(lp.sigma2);
  }
  j["outcome"] = std::string(to_string(lp.outcome));
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const bool need_gamma = o.game == "mixture" || o.game == "C";
  const ParamPoint<Rational> p = point_from(o, need_gamma);
  ordered_json j = header("analyze", p, o.backend);
  j["game"] = o.game;
  if (exact_backend(o)) {
    fill_limits(j, limit_params(pick_game(p, o.game)));
  } else {
    fill_limits(j, limit_params(pick_game(cast_point<double>(p), o.game)));
  }
  emit(j, o.format, out);
  return 0;
}

template <Scalar S>
bool pattern_body(ordered_json& j, const ParamPoint<Rational>& point, const PatternSpec& w) {
  const ParamPoint<S> p = cast_point<S>(point);
  const GamePair<S> g = make_games(p);
  const auto rs = w.as_rs();
  const LimitParams<S> direct =
      rs ? pattern_limits_direct(g.a, g.b, rs->first, rs->second) : word_limits_direct(g.a, g.b, w);
  const LimitParams<S> product = pattern_limits_product(build_product_chain(g.a, g.b, w));
  fill_limits(j, direct);
  ordered_json prod;
  fill_limits(prod, product);
  j["product"] = prod;
  using std::abs;
  const S dmu = abs(S(direct.mu - product.mu));
  const S dvar = abs(S(direct.sigma2 - product.sigma2));
  j["delta"] = {{"mu", val(dmu)}, {"sigma2", val(dvar)}};
  bool agree = false;
  if constexpr (ScalarTraits<S>::exact) {
    agree = dmu == 0 && dvar == 0;
  } else {
    auto close = [](double d, double ref) { return d <= 1e-9 * std::max(1.0, std::abs(ref)); };
    agree = close(dmu, direct.mu) && close(dvar, direct.sigma2);
  }
  j["methods_agree"] = agree;
  return agree;
}

int cmd_pattern(const Options& o, std::ostream& out) {
  const ParamPoint<Rational> p = point_from(o, false);
  const PatternSpec w = word_from(o);
  ordered_json j = header("pattern", p, o.backend);
  j["word"] = w.word();
  const bool agree = exact_backend(o) ? pattern_body<Rational>(j, p, w) : pattern_body<double>(j, p, w);
  emit(j, o.format, out);
  return agree ? 0 : 1;
}

void force_float(const Options& o, bool backend_given) {
  if (backend_given && o.backend == "exact") {
    throw ParseError("eigenvalue commands run on the float backend only");
  }
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

int cmd_spectrum(const Options& o, std::ostream& out) {
  const ParamPoint<Rational> p = point_from(o, false);
  ordered_json j = header("spectrum", p, "float");
  j.erase("params");
  j["params"] = params_json(p);
  j["params"].erase("gamma");
  j["params"].erase("eps");
  if (p.family == Family::capital) {
    const CapitalSpectrum sp = capital_spectrum(to_float(p.rho));
    j["S"] = sp.S;
    j["eigenvalues"] = {1.0, sp.e1, sp.e2};
    j["degenerate"] = sp.degenerate;
  } else {
    const HistoryCubic<Rational> exact = history_cubic(p.kappa, p.lambda);
    const HistorySpectrum sp = history_spectrum(to_float(p.kappa), to_float(p.lambda));
    j["cubic"] = {{"a2", to_string(exact.a2)}, {"a1", to_string(exact.a1)}, {"a0", to_string(exact.a0)}};
    j["alpha"] = to_string(exact.alpha);
    j["beta"] = to_string(exact.beta);
    j["discriminant"] = to_string(exact.discriminant);
    j["discriminant_float"] = to_float(exact.discriminant);
    j["eigenvalues"] = ordered_json::array({complex_json(1.0), complex_json(sp.e[0]),
                                            complex_json(sp.e[1]), complex_json(sp.e[2])});
    j["region"] = history_region(p.kappa, p.lambda);
    j["degenerate"] = sign(exact.discriminant) == 0;
  }
  emit(j, o.format, out);
  return 0;
}

ParamPoint<Rational> history_point(Options o) {
  o.family = "history";
  return point_from(o, false);
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const ParamPoint<Rational> p = history_point(o);
  ordered_json j;
  j["schema"] = kSchema;
  j["command"] = "bounds";
  j["backend"] = "float";
  j["kappa"] = to_string(p.kappa);
  j["lambda"] = to_string(p.lambda);
  j["region"] = history_region(p.kappa, p.lambda);
  j["s0"] = bound_search_s0(p.kappa, p.lambda);
  j["s1"] = bound_search_s1(p.kappa, p.lambda);
  emit(j, o.format, out);
  return 0;
}

ordered_json sign_report_json(const SignReport& rep) {
  return {{"bound", rep.bound},
          {"checked_prefix_ok", rep.checked_prefix_ok},
          {"exceptions", rep.exceptions}};
}

int cmd_verify_point(const Options& o, std::ostream& out) {
  const ParamPoint<Rational> p = history_point(o);
  const SignReport a = verify_sign_at_point(p.kappa, p.lambda, SignMode::pattern_r_ge_2);
  const SignReport b = verify_sign_at_point(p.kappa, p.lambda, SignMode::pattern_r_eq_1);
  ordered_json j;
  j["schema"] = kSchema;
  j["command"] = "verify-point";
  j["kappa"] = to_string(p.kappa);
  j["lambda"] = to_string(p.lambda);
  j["region"] = history_region(p.kappa, p.lambda);
  j["c0_sign"] = a.expected_sign;
  j["r_ge_2"] = sign_report_json(a);
  j["r_eq_1"] = sign_report_json(b);
  const bool ok = a.checked_prefix_ok && b.checked_prefix_ok;
  j["pass"] = ok;
  emit(j, o.format, out);
  return ok ? 0 : 1;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::pair<Rational, Rational>> cases = sweep_cases();
  const std::size_t begin = std::min(o.start, cases.size());
  const std::size_t end =
      o.count < 0 ? cases.size() : std::min(cases.size(), begin + static_cast<std::size_t>(o.count));
  out << "index,kappa,lambda,region,mixture,s0,s1,r_ge_2_ok,r_eq_1_ok,exceptions\n";
  struct Row {
    SignReport a, b;
  };
  constexpr std::size_t chunk = 32;
  std::size_t winning = 0, losing = 0, failures = 0;
  int max_s0 = 0, max_s1 = 0;
  for (std::size_t lo = begin; lo < end; lo += chunk) {
    const std::size_t hi = std::min(end, lo + chunk);
    std::vector<Row> rows(hi - lo);
    parallel_for(rows.size(), o.threads, [&](std::size_t i) {
      const auto& [k, l] = cases[lo + i];
      rows[i].a = verify_sign_at_point(k, l, SignMode::pattern_r_ge_2);
      rows[i].b = verify_sign_at_point(k, l, SignMode::pattern_r_eq_1);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& [k, l] = cases[lo + i];
      const Row& row = rows[i];
      const bool win = row.a.expected_sign > 0;
      (win ? winning : losing) += 1;
      max_s0 = std::max(max_s0, row.a.bound);
      max_s1 = std::max(max_s1, row.b.bound);
      std::string ex;
      if (!row.a.exceptions.empty()) ex += "r>=2:" + join_ints(row.a.exceptions);
      if (!row.b.exceptions.empty()) ex += std::string(ex.empty() ? "" : " ") + "r=1:" + join_ints(row.b.exceptions);
      if (!ex.empty()) ++failures;
      out << lo + i << ',' << to_string(k) << ',' << to_string(l) << ','
          << history_region(k, l) << ',' << (win ? "winning" : "losing") << ',' << row.a.bound
          << ',' << row.b.bound << ',' << (row.a.checked_prefix_ok ? "true" : "false") << ','
          << (row.b.checked_prefix_ok ? "true" : "false") << ',' << ex << '\n';
    }
    out.flush();
  }
  err << "cases=" << end - begin << " winning=" << winning << " losing=" << losing
      << " max_s0=" << max_s0 << " max_s1=" << max_s1 << " points_with_exceptions=" << failures
      << '\n';
  return failures == 0 ? 0 : 1;
}

GridAxis axis_from(const std::string& name, const std::string& range, int resolution) {
  const auto colon = range.find(':');
  if (colon == std::string::npos) throw ParseError("ranges are written lo:hi");
  return {name, parse_rational(range.substr(0, colon)), parse_rational(range.substr(colon + 1)),
          resolution};
}

int cmd_region(const Options& o, std::ostream& out) {
  const Family family = parse_family(o.family);
  std::vector<GridAxis> axes;
  if (family == Family::capital) {
    axes.push_back(axis_from("rho", o.x_range.empty() ? "0:3" : o.x_range, o.resolution));
  } else {
    axes.push_back(axis_from("kappa", o.x_range.empty() ? "0:5" : o.x_range, o.resolution));
    axes.push_back(axis_from("lambda", o.y_range.empty() ? "0:5" : o.y_range, o.resolution));
  }
  const bool pattern = o.r > 0 || o.s > 0;
  if (pattern && (o.r < 1 || o.s < 1)) throw ParseError("pattern grids need --r and --s");
  const PlayTarget target = pattern ? PlayTarget::ab(o.r, o.s) : PlayTarget::mixture();
  const Rational gamma = o.gamma.empty() ? Rational(1, 2) : parse_rational(o.gamma);
  const RegionGrid grid = region_grid(family, std::move(axes), target, gamma, o.threads);
  if (o.format.empty() || o.format == "csv") {
    out << grid_csv(grid);
  } else if (o.format == "json") {
    out << grid_json(grid) << '\n';
  } else {
    throw ParseError("region supports csv or json");
  }
  return 0;
}

int cmd_limit(const Options& o, std::ostream& out) {
  const ParamPoint<Rational> p = point_from(o, false);
  if (p.eps != 0) throw DomainError("the limit is defined at eps = 0");
  if (o.r < 1) throw ParseError("missing --r");
  const GamePair<Rational> g = make_games(p);
  const Rational lim = pattern_limit(g.a, g.b, o.r);
  const Rational closed = p.family == Family::capital ? capital_limit_closed(p.rho, o.r)
                                                       : history_limit_closed(p.kappa, p.lambda);
  ordered_json j = header("limit", p, "exact");
  j["r"] = o.r;
  j["limit"] = to_string(lim);
  j["limit_float"] = to_float(lim);
  j["closed_form"] = to_string(closed);
  j["match"] = lim == closed;
  emit(j, o.format, out);
  return lim == closed ? 0 : 1;
}

int cmd_epsilon0(const Options& o, std::ostream& out) {
  const bool pattern = o.r > 0 || o.s > 0;
  if (pattern && (o.r < 1 || o.s < 1)) throw ParseError("pattern targets need --r and --s");
  const ParamPoint<Rational> p = point_from(o, !pattern);
  const PlayTarget target = pattern ? PlayTarget::ab(o.r, o.s) : PlayTarget::mixture();
  const EpsilonResult res = fairness_epsilon(p, target);
  ordered_json j = header("epsilon0", p, "exact");
  if (pattern) j["target"] = {{"pattern", {{"r", o.r}, {"s", o.s}}}};
  else j["target"] = "mixture";
  j["eps0"] = res.eps0;
  j["lower"] = to_string(res.lower);
  j["upper"] = to_string(res.upper);
  j["saturated"] = res.saturated;
  j["evaluations"] = res.evaluations;
  emit(j, o.format, out);
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const bool word = !o.word.empty() || o.r > 0 || o.s > 0;
  const bool need_gamma = !word && (o.game == "mixture" || o.game == "C");
  const ParamPoint<Rational> p = point_from(o, need_gamma);
  SimConfig cfg;
  LimitParams<Rational> analytic;
  const ParamPoint<double> pf = cast_point<double>(p);
  if (word) {
    const PatternSpec w = word_from(o);
    const GamePair<Rational> g = make_games(p);
    const GamePair<double> gf = make_games(pf);
    analytic = general_word_limits(g.a, g.b, w);
    for (char c : w.word()) cfg.phases.push_back(c == 'A' ? gf.a : gf.b);
    cfg.label = w.word();
  } else {
    analytic = limit_params(pick_game(p, o.game));
    cfg.phases.push_back(pick_game(pf, o.game));
    cfg.label = o.game;
  }
  cfg.label = std::string(to_string(p.family)) + " " + cfg.label;
  cfg.n_games = o.n_games;
  cfg.replications = o.replications;
  cfg.master_seed = o.seed;
  cfg.threads = o.threads;
  if (o.initial_state != "stationary") {
    try {
      cfg.initial_state = std::stoi(o.initial_state);
    } catch (const std::exception&) {
      throw ParseError("--initial-state takes a state index or 'stationary'");
    }
  }
  const SimResult res = simulate(cfg);
  const double mu = to_float(analytic.mu);
  const double sigma2 = to_float(analytic.sigma2);
  const SllnReport slln = slln_check(res, mu, sigma2);
  std::optional<CltReport> clt;
  if (sigma2 > 0.0 && o.replications >= 200) clt = clt_check(res, mu, sigma2);
  out << sim_json(res, slln, clt, mu, sigma2) << '\n';
  return slln.pass && (!clt || clt->pass) ? 0 : 1;
}

struct Entry {
  std::string name;
  std::string expected;
  std::string computed;
};

int cmd_paper_table(const Options& o, std::ostream& out) {
  std::vector<Entry> entries;
  auto add = [&](std::string name, const char* expected, const std::string& computed) {
    entries.push_back({std::move(name), expected, computed});
  };
  const Rational half(1, 2);
  {
    const Rational rho(1, 3);
    ParamPoint<Rational> p;
    p.family = Family::capital;
    p.rho = rho;
    p.gamma = half;
    const auto c = limit_params(make_mixture(p));
    const GamePair<Rational> g = make_games(p);
    const auto b = limit_params(g.b);
    add("capital rho=1/3 mixture gamma=1/2 mu", "18/709", to_string(c.mu));
    add("capital rho=1/3 mixture gamma=1/2 sigma2", "311313105/356400829", to_string(c.sigma2));
    add("capital rho=1/3 game B mu", "0", to_string(b.mu));
    add("capital rho=1/3 game B sigma2", "81/169", to_string(b.sigma2));
    const char* expect[4][2] = {{"0", "81/169"},
                                {"2416/35601", "14640669052339/15040606062267"},
                                {"32/1609", "4628172105/4165509529"},
                                {"4/163", "1923037543/2195688729"}};
    const int rs[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    for (int i = 0; i < 4; ++i) {
      const PatternSpec w = PatternSpec::ab(rs[i][0], rs[i][1]);
      const auto d = pattern_limits_direct(g.a, g.b, rs[i][0], rs[i][1]);
      const auto pr = pattern_limits_product(build_product_chain(g.a, g.b, w));
      const std::string tag = "capital rho=1/3 pattern [" + std::to_string(rs[i][0]) + "," +
                              std::to_string(rs[i][1]) + "] ";
      add(tag + "mu direct", expect[i][0], to_string(d.mu));
      add(tag + "sigma2 direct", expect[i][1], to_string(d.sigma2));
      add(tag + "mu product", expect[i][0], to_string(pr.mu));
      add(tag + "sigma2 product", expect[i][1], to_string(pr.sigma2));
    }
  }
  {
    ParamPoint<Rational> p;
    p.family = Family::history;
    p.kappa = Rational(1, 9);
    p.lambda = Rational(1, 3);
    p.gamma = half;
    const auto c = limit_params(make_mixture(p));
    const GamePair<Rational> g = make_games(p);
    const auto b = limit_params(g.b);
    add("history kappa=1/9 lambda=1/3 mixture gamma=1/2 mu", "5/429", to_string(c.mu));
    add("history kappa=1/9 lambda=1/3 mixture gamma=1/2 sigma2", "25324040/26317863",
        to_string(c.sigma2));
    add("history kappa=1/9 lambda=1/3 game B mu", "0", to_string(b.mu));
    add("history kappa=1/9 lambda=1/3 game B sigma2", "235/198", to_string(b.sigma2));
    const char* expect[4][2] = {{"1/44", "8945/10648"},
                                {"203/16500", "1003207373/998250000"},
                                {"1/60", "1039/1200"},
                                {"1/100", "19617/20000"}};
    const int rs[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    for (int i = 0; i < 4; ++i) {
      const PatternSpec w = PatternSpec::ab(rs[i][0], rs[i][1]);
      const auto d = pattern_limits_direct(g.a, g.b, rs[i][0], rs[i][1]);
      const auto pr = pattern_limits_product(build_product_chain(g.a, g.b, w));
      const std::string tag = "history kappa=1/9 lambda=1/3 pattern [" +
                              std::to_string(rs[i][0]) + "," + std::to_string(rs[i][1]) + "] ";
      add(tag + "mu direct", expect[i][0], to_string(d.mu));
      add(tag + "sigma2 direct", expect[i][1], to_string(d.sigma2));
      add(tag + "mu product", expect[i][0], to_string(pr.mu));
      add(tag + "sigma2 product", expect[i][1], to_string(pr.sigma2));
    }
  }
  {
    struct Row {
      const char* kappa;
      const char* lambda;
      int region, s0, s1;
    };
    const Row rows[] = {{"1/9", "1/3", 1, 1, 2}, {"1/3", "1/9", 6, 1, 6}, {"9", "3", 3, 1, 3},
                        {"1/9", "1/8", 1, 1, 6}, {"1/9", "8/9", 1, 2, 3}, {"8", "1/9", 6, 1, 27},
                        {"4", "9/2", 2, 1, 3},   {"3", "3/2", 4, 1, 1},   {"3", "2/3", 5, 1, 2}};
    for (const Row& row : rows) {
      const Rational k = parse_rational(row.kappa);
      const Rational l = parse_rational(row.lambda);
      const std::string tag = std::string("history bounds (") + row.kappa + "," + row.lambda + ") ";
      const std::string expected = std::to_string(row.region) + " " + std::to_string(row.s0) +
                                   " " + std::to_string(row.s1);
      const std::string computed = std::to_string(history_region(k, l)) + " " +
                                   std::to_string(bound_search_s0(k, l)) + " " +
                                   std::to_string(bound_search_s1(k, l));
      entries.push_back({tag + "region s0 s1", expected, computed});
    }
  }
  ordered_json j;
  j["schema"] = kSchema;
  j["command"] = "paper-table";
  j["entries"] = ordered_json::array();
  bool all = true;
  for (const Entry& e : entries) {
    const bool match = e.expected == e.computed;
    all = all && match;
    j["entries"].push_back(
        {{"name", e.name}, {"expected", e.expected}, {"computed", e.computed}, {"match", match}});
  }
  j["all_match"] = all;
  if (o.format == "plain") {
    for (const Entry& e : entries) {
      out << (e.expected == e.computed ? "ok   " : "FAIL ") << e.name << ": " << e.computed
          << " (expected " << e.expected << ")\n";
    }
  } else {
    emit(j, o.format, out);
  }
  return all ? 0 : 1;
}

void add_point_flags(CLI::App* sub, Options& o, bool with_family = true) {
  if (with_family) {
    sub->add_option("--family", o.family, "capital or history")->capture_default_str();
    sub->add_option("--rho", o.rho, "capital parameter (rational text)");
  }
  sub->add_option("--kappa", o.kappa, "history parameter");
  sub->add_option("--lambda", o.lambda, "history parameter");
}

void add_common(CLI::App* sub, Options& o) {
  add_point_flags(sub, o);
  sub->add_option("--gamma", o.gamma, "mixture weight on game A");
  sub->add_option("--eps", o.eps, "bias parameter")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit parameters of Parrondo games", "parrondo"};
  app.require_subcommand(1);
  Options o;
  bool backend_given = false;

  auto backend = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
           "--backend",
           [&](const std::string& v) {
             o.backend = v;
             backend_given = true;
           },
           "exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
  };
  auto format = [&](CLI::App* sub, std::vector<std::string> allowed) {
    sub->add_option("--format", o.format)->check(CLI::IsMember(allowed));
  };

  auto* analyze = app.add_subcommand("analyze", "mu and sigma2 of game A, B or the mixture");
  add_common(analyze, o);
  analyze->add_option("--game", o.game, "A, B or mixture")->capture_default_str();
  backend(analyze);
  format(analyze, {"json", "plain"});

  auto* pattern = app.add_subcommand("pattern", "mu and sigma2 of a periodic word, two methods");
  add_common(pattern, o);
  pattern->add_option("--r", o.r);
  pattern->add_option("--s", o.s);
  pattern->add_option("--word", o.word, "word over {A,B}");
  backend(pattern);
  format(pattern, {"json", "plain"});

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of game B");
  add_point_flags(spectrum, o);
  backend(spectrum);
  format(spectrum, {"json", "plain"});

  auto* bounds = app.add_subcommand("bounds", "s0 and s1 for the history family");
  add_point_flags(bounds, o, false);
  backend(bounds);
  format(bounds, {"json", "plain"});

  auto* verify = app.add_subcommand("verify-point", "sign checks below s0 and s1 at one point");
  add_point_flags(verify, o, false);
  format(verify, {"json", "plain"});

  auto* sweep = app.add_subcommand("sweep-k", "sign checks over all digit-fraction pairs (CSV)");
  sweep->add_option("--start", o.start, "first case index");
  sweep->add_option("--count", o.count, "number of cases, -1 for all");
  sweep->add_option("--threads", o.threads);

  auto* region = app.add_subcommand("region", "grid of mu signs and region labels");
  region->add_option("--family", o.family)->capture_default_str();
  region->add_option("--x-range", o.x_range, "lo:hi of rho or kappa");
  region->add_option("--y-range", o.y_range, "lo:hi of lambda");
  region->add_option("--resolution", o.resolution)->capture_default_str();
  region->add_option("--gamma", o.gamma, "mixture weight (default 1/2)");
  region->add_option("--r", o.r);
  region->add_option("--s", o.s);
  region->add_option("--threads", o.threads);
  format(region, {"csv", "json"});

  auto* limit = app.add_subcommand("limit", "limit of (r+s) mu_[r,s] as s grows");
  add_common(limit, o);
  limit->add_option("--r", o.r)->required();
  format(limit, {"json", "plain"});

  auto* eps0 = app.add_subcommand("epsilon0", "bias at which the Parrondo effect ends");
  add_common(eps0, o);
  eps0->add_option("--r", o.r);
  eps0->add_option("--s", o.s);
  format(eps0, {"json", "plain"});

  auto* sim = app.add_subcommand("simulate", "Monte Carlo with SLLN and CLT checks");
  add_common(sim, o);
  sim->add_option("--game", o.game, "A, B or mixture")->capture_default_str();
  sim->add_option("--r", o.r);
  sim->add_option("--s", o.s);
  sim->add_option("--word", o.word);
  sim->add_option("--n", o.n_games)->capture_default_str();
  sim->add_option("--replications", o.replications)->capture_default_str();
  sim->add_option("--seed", o.seed)->capture_default_str();
  sim->add_option("--initial-state", o.initial_state)->capture_default_str();
  sim->add_option("--threads", o.threads);

  auto* table = app.add_subcommand("paper-table", "reference constants with computed values");
  format(table, {"json", "plain"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return cmd_analyze(o, out);
    if (*pattern) return cmd_pattern(o, out);
    if (*spectrum) {
      force_float(o, backend_given);
      return cmd_spectrum(o, out);
    }
    if (*bounds) {
      force_float(o, backend_given);
      return cmd_bounds(o, out);
    }
    if (*verify) return cmd_verify_point(o, out);
    if (*sweep) return cmd_sweep(o, out, err);
    if (*region) return cmd_region(o, out);
    if (*limit) return cmd_limit(o, out);
    if (*eps0) return cmd_epsilon0(o, out);
    if (*sim) return cmd_simulate(o, out);
    if (*table) return cmd_paper_table(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}

}  // namespace parrondo::cli

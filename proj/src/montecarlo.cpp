#include "parrondo/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/parallel.hpp"

namespace parrondo {

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::replication_key(std::uint64_t master_seed, std::uint64_t replication) {
  return mix(master_seed + (replication + 1) * golden);
}

namespace {

struct Phase {
  Eigen::Index size = 0;
  std::vector<double> cumulative;  // row-major
  std::vector<std::int64_t> payoff;
};

int draw(const double* cum, Eigen::Index size, double u) {
  for (Eigen::Index j = 0; j + 1 < size; ++j) {
    if (u < cum[j]) return static_cast<int>(j);
  }
  return static_cast<int>(size - 1);
}

Phase compile(const GameChain<double>& chain) {
  Phase ph;
  ph.size = chain.size();
  ph.cumulative.resize(static_cast<std::size_t>(ph.size * ph.size));
  ph.payoff.resize(ph.cumulative.size());
  for (Eigen::Index i = 0; i < ph.size; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < ph.size; ++j) {
      acc += chain.transition(i, j);
      const auto k = static_cast<std::size_t>(i * ph.size + j);
      ph.cumulative[k] = acc;
      const double w = chain.payoff(i, j);
      if (w != std::round(w)) throw DomainError("simulation needs integer payoffs");
      ph.payoff[k] = static_cast<std::int64_t>(w);
    }
  }
  return ph;
}

}  // namespace

SimResult simulate(const SimConfig& config) {
  if (config.phases.empty()) throw DomainError("nothing to simulate");
  if (config.n_games < 1) throw DomainError("n_games must be at least 1");
  if (config.replications < 1) throw DomainError("replications must be at least 1");
  const Eigen::Index size = config.phases.front().size();
  std::vector<Phase> phases;
  for (const GameChain<double>& c : config.phases) {
    if (c.size() != size) throw DomainError("phases differ in state count");
    check_chain(c);
    phases.push_back(compile(c));
  }
  std::vector<double> start_cdf;
  if (config.initial_state) {
    if (*config.initial_state < 0 || *config.initial_state >= size) {
      throw DomainError("initial state out of range");
    }
  } else {
    Matrix<double> cycle = Matrix<double>::Identity(size, size);
    for (const GameChain<double>& c : config.phases) cycle = (cycle * c.transition).eval();
    const RowVector<double> pi = stationary_distribution(cycle);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < size; ++j) start_cdf.push_back(acc += pi(j));
  }

  SimResult res;
  res.config = config;
  res.finals.assign(static_cast<std::size_t>(config.replications), 0);
  const std::size_t period = phases.size();
  parallel_for(res.finals.size(), config.threads, [&](std::size_t rep) {
    SplitMix64 rng(SplitMix64::replication_key(config.master_seed, rep));
    int state = config.initial_state ? *config.initial_state
                                     : draw(start_cdf.data(), size, rng.uniform());
    std::int64_t total = 0;
    std::size_t phase = 0;
    for (std::int64_t step = 0; step < config.n_games; ++step) {
      const Phase& ph = phases[phase];
      const std::size_t row = static_cast<std::size_t>(state * ph.size);
      const int next = draw(ph.cumulative.data() + row, ph.size, rng.uniform());
      total += ph.payoff[row + static_cast<std::size_t>(next)];
      state = next;
      if (++phase == period) phase = 0;
    }
    res.finals[rep] = total;
  });

  const double n = static_cast<double>(config.n_games);
  const double reps = static_cast<double>(config.replications);
  double sum = 0.0;
  for (std::int64_t v : res.finals) sum += static_cast<double>(v);
  res.mean_per_game = sum / (n * reps);
  if (config.replications > 1) {
    const double m = sum / reps;
    double ss = 0.0;
    for (std::int64_t v : res.finals) ss += (static_cast<double>(v) - m) * (static_cast<double>(v) - m);
    res.variance_per_game = ss / (reps - 1) / n;
  }
  return res;
}

SllnReport slln_check(const SimResult& result, double mu, double sigma2) {
  if (result.finals.empty()) throw DomainError("empty simulation result");
  if (sigma2 < 0.0) throw DomainError("sigma2 must be nonnegative");
  const double n = static_cast<double>(result.config.n_games);
  const double reps = static_cast<double>(result.finals.size());
  SllnReport rep;
  rep.deviation = std::abs(result.mean_per_game - mu);
  if (sigma2 == 0.0) {
    double wmax = 0.0;
    for (const GameChain<double>& c : result.config.phases) {
      wmax = std::max(wmax, c.payoff.cwiseAbs().maxCoeff());
    }
    const double bound = static_cast<double>(result.config.phases.front().size()) * wmax / n;
    if (rep.deviation > bound) {
      throw DomainError("sigma2 = 0 but the deviation exceeds the bounded-walk bound");
    }
    rep.pass = true;
    return rep;
  }
  rep.z = (result.mean_per_game - mu) / std::sqrt(sigma2 / (n * reps));
  rep.pass = std::abs(rep.z) <= 5.0;
  return rep;
}

CltReport clt_check(const SimResult& result, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("CLT check needs sigma2 > 0");
  if (result.finals.size() < 200) throw DomainError("CLT check needs at least 200 replications");
  const double n = static_cast<double>(result.config.n_games);
  const double scale = std::sqrt(n * sigma2);
  CltReport rep;
  for (std::int64_t v : result.finals) {
    rep.standardized.push_back((static_cast<double>(v) - n * mu) / scale);
  }
  std::vector<double> sorted = rep.standardized;
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-sorted[i] / std::sqrt(2.0));
    d = std::max({d, static_cast<double>(i + 1) / count - cdf, cdf - static_cast<double>(i) / count});
  }
  rep.ks_stat = d;
  rep.ks_critical = 1.94947 / std::sqrt(count);
  double m = 0.0;
  for (double z : sorted) m += z;
  m /= count;
  double ss = 0.0;
  for (double z : sorted) ss += (z - m) * (z - m);
  rep.var_ratio = ss / (count - 1);
  rep.pass = rep.ks_stat < rep.ks_critical && rep.var_ratio >= 0.9 && rep.var_ratio <= 1.1;
  return rep;
}

std::string sim_json(const SimResult& result, const std::optional<SllnReport>& slln,
                     const std::optional<CltReport>& clt, double mu, double sigma2) {
  using nlohmann::ordered_json;
  const SimConfig& c = result.config;
  ordered_json j;
  j["schema"] = "parrondo/1";
  j["rng"] = SplitMix64::algorithm;
  j["config"] = {{"game", c.label},
                 {"n_games", c.n_games},
                 {"replications", c.replications},
                 {"master_seed", c.master_seed},
                 {"initial_state", c.initial_state ? ordered_json(*c.initial_state)
                                                   : ordered_json("stationary")}};
  j["analytic"] = {{"mu", mu}, {"sigma2", sigma2}};
  j["mean_per_game"] = result.mean_per_game;
  j["variance_per_game"] = result.variance_per_game;
  if (result.finals.size() <= 20) j["finals"] = result.finals;
  if (slln) {
    j["slln"] = {{"pass", slln->pass}, {"z", slln->z}, {"deviation", slln->deviation}};
  }
  if (clt) {
    j["clt"] = {{"pass", clt->pass},
                {"ks_stat", clt->ks_stat},
                {"ks_critical", clt->ks_critical},
                {"var_ratio", clt->var_ratio}};
  }
  return j.dump(2);
}

}  // namespace parrondo

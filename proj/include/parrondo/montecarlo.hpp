#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parrondo/markov.hpp"

namespace parrondo {

/// SplitMix64 as a counter-based stream: the k-th output depends only on
/// (key, k). Replication i uses key = mix(master_seed + (i+1) * golden).
class SplitMix64 {
 public:
  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
  static constexpr const char* algorithm = "splitmix64-counter/1";

  explicit SplitMix64(std::uint64_t key) : state_(key) {}

  static std::uint64_t mix(std::uint64_t z);
  static std::uint64_t replication_key(std::uint64_t master_seed, std::uint64_t replication);

  std::uint64_t next() { return mix(state_ += golden); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct SimConfig {
  /// Chains played cyclically, one per step: a single game or mixture is
  /// one phase, a word has one phase per letter.
  std::vector<GameChain<double>> phases;
  std::string label;
  std::int64_t n_games = 1;
  int replications = 1;
  std::uint64_t master_seed = 0;
  /// Fixed starting state, or nullopt to draw X_0 from the stationary
  /// distribution of the phase-0 cycle.
  std::optional<int> initial_state;
  unsigned threads = 0;
};

struct SimResult {
  SimConfig config;
  std::vector<std::int64_t> finals;  // S_n per replication
  double mean_per_game = 0.0;        // sum S_n / (n R)
  double variance_per_game = 0.0;    // sample variance of S_n over n; 0 when R = 1
};

/// Throws DomainError on an invalid configuration or initial state.
SimResult simulate(const SimConfig& config);

struct SllnReport {
  bool pass = false;
  double z = 0.0;
  double deviation = 0.0;
};

/// Passes when |mean - mu| <= 5 sqrt(sigma2 / (n R)). With sigma2 = 0 the walk
/// is bounded and the deviation must stay within size * max|w| / n; beyond
/// that the pair (mu, sigma2) is rejected with DomainError.
SllnReport slln_check(const SimResult& result, double mu, double sigma2);

struct CltReport {
  bool pass = false;
  double ks_stat = 0.0;
  double ks_critical = 0.0;
  double var_ratio = 0.0;
  std::vector<double> standardized;
};

/// KS distance of (S_n - n mu)/sqrt(n sigma2) from N(0,1) against the 0.1%
/// critical value 1.94947/sqrt(R), and sample variance of the standardized
/// values in [0.9, 1.1]. Needs sigma2 > 0 and R >= 200.
CltReport clt_check(const SimResult& result, double mu, double sigma2);

std::string sim_json(const SimResult& result, const std::optional<SllnReport>& slln,
                     const std::optional<CltReport>& clt, double mu, double sigma2);

}  // namespace parrondo

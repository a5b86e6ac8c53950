#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "prophet/scheme.hpp"

namespace prophet {

struct SimulationConfig {
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 42;
  std::vector<double> x_grid;  // empty: 20 evenly spaced interior points
  unsigned workers = 1;
  std::uint64_t chunk = 65536;  // trials per RNG stream
};

struct ProbeStats {
  double x = 0;
  std::uint64_t alg_count = 0, max_count = 0;
  double p_alg = 0, p_max = 0;
  double ci_alg = 0, ci_max = 0;
  std::optional<double> ratio;  // empty when P[max > x] is estimated as 0
  double diff = 0;              // P[ALG > x] - gamma P[max > x]
  double ci_diff = 0;
};

struct SimulationReport {
  std::vector<ProbeStats> probes;
  double e_alg = 0, e_max = 0, ci_alg = 0, ci_max = 0;
  double e_gap = 0, ci_gap = 0;  // E[ALG - gamma max]
  std::vector<std::uint64_t> accept_counts;  // per item
  std::vector<double> accept_prob, accept_ci;
  std::uint64_t no_accept = 0;
  std::uint64_t seed = 0, trials = 0;
  unsigned workers = 1;
  SchemeId scheme_id = SchemeId::SchemeI;
  double gamma = 0;
};

struct GameOutcome {
  std::optional<std::size_t> accepted_item;
  double reward = 0;
  double max_value = 0;
};

// Inverse-CDF sampler for the arrival laws of a built scheme. Arrival
// positions are fractional row indices; +inf marks the atom at t = 1.
class ArrivalSampler {
 public:
  explicit ArrivalSampler(const BuiltScheme& scheme);
  // Position and threshold for group k given a uniform draw.
  std::pair<double, double> position(std::size_t k, double u) const;
  double time_at(double position) const;
  double min_threshold(std::size_t k) const { return min_tau_[k]; }

 private:
  const BuiltScheme* s_;
  std::vector<double> mass_, atom_, min_tau_;
};

// Plays one game with given values and arrival positions (+inf = t = 1).
GameOutcome play(const BuiltScheme& scheme, const std::vector<double>& values,
                 const std::vector<double>& positions, const std::vector<double>& thresholds);

GameOutcome run_game(const BuiltScheme& scheme, const ArrivalSampler& sampler, std::mt19937_64& rng);
GameOutcome run_game(const BuiltScheme& scheme, std::mt19937_64& rng);

std::vector<double> default_x_grid(const Instance& inst, std::size_t points = 20);

SimulationReport estimate_asd(const BuiltScheme& scheme, const SimulationConfig& config);

}  // namespace prophet

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace prophet {

// Items over a shared support 0 = a_1 < ... < a_k.
struct FiniteInstance {
  std::vector<double> support;
  std::vector<std::vector<double>> probs;  // probs[i][j] = P[X_i = a_j]

  std::size_t n() const { return probs.size(); }
  std::size_t k() const { return support.size(); }
  void validate() const;
};

enum class LpSetting { OrderSelection, ProphetSecretary };
std::string to_string(LpSetting s);
LpSetting parse_setting(const std::string& s);

// A threshold index equal to k means "never accept".
struct DeterministicAlgorithm {
  std::vector<std::size_t> order;
  std::vector<std::size_t> thresholds;  // thresholds[s] applies to the s-th arriving item
  std::vector<mpq_class> exceed;        // P[A >= a_j], j = 0..k-1
};

struct AlgorithmBlock {
  std::vector<std::size_t> order;  // fixed arrival order (prophet-secretary), empty otherwise
  mpq_class weight = 1;
  std::vector<DeterministicAlgorithm> algorithms;
};

struct EnumerationOptions {
  LpSetting setting = LpSetting::OrderSelection;
  std::size_t cap = 100000;
  bool deduplicate = true;
};

struct Enumeration {
  LpSetting setting = LpSetting::OrderSelection;
  std::vector<mpq_class> max_exceed;  // P[max >= a_j]
  std::vector<AlgorithmBlock> blocks;
  std::size_t enumerated = 0;  // before deduplication
  std::size_t columns() const;
};

std::vector<std::vector<mpq_class>> exact_probabilities(const FiniteInstance& fi);
std::vector<mpq_class> exceedance(const std::vector<std::vector<mpq_class>>& probs,
                                  const std::vector<std::size_t>& order,
                                  const std::vector<std::size_t>& thresholds);
Enumeration enumerate_algorithms(const FiniteInstance& fi, const EnumerationOptions& opt = {});

struct LpSolution {
  mpq_class alpha;                            // LP2 optimum
  mpq_class mu;                               // LP1 optimum
  std::vector<std::vector<mpq_class>> lambda;  // per block, per algorithm
  std::vector<mpq_class> c;                    // LP1 weights on levels
  std::vector<mpq_class> nu;                   // LP1 per-block values
  std::size_t pivots_primal = 0, pivots_dual = 0;
  double duality_gap() const;
};

LpSolution solve_lp_pair(const Enumeration& en);

struct MixtureComponent {
  std::size_t block;
  std::vector<std::size_t> order;
  std::vector<std::size_t> thresholds;
  double weight;
};

struct MixtureReport {
  std::vector<MixtureComponent> support;
  std::vector<double> exceed;       // mixture P[A >= a_j]
  std::vector<double> residual;     // P[A >= a_j] - alpha P[max >= a_j]
  double min_residual = 0;
  double expected_alg = 0, expected_max = 0;
  bool point_mass = false;
  bool pass = false;
};

MixtureReport extract_asd_mixture(const FiniteInstance& fi, const Enumeration& en, const LpSolution& sol);

// Largest ASD ratio attainable by the dual side for given level weights c:
// sum_b w_b max_a c . E_{b,a}, after normalising c . P[max >= a] = 1.
mpq_class best_response_value(const Enumeration& en, const std::vector<mpq_class>& c);

}  // namespace prophet

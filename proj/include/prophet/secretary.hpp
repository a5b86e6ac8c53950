#pragma once

#include <cstddef>
#include <vector>

namespace prophet {

// N IID items (value b_j w.p. p_j / N, value 1/(N eps) w.p. eps, else 0)
// plus one deterministic item of value a.
struct HardnessInstance {
  std::size_t N = 100000;
  double a = 0.82;
  std::vector<double> b{1.2, 1.25, 1.3, 1.35, 1.4, 1.45, 1.5, 1.55, 1.6, 1.65, 1.7, 1.8};
  std::vector<double> p{0.02, 0.03, 0.04, 0.05, 0.04, 0.03, 0.03, 0.02, 0.02, 0.02, 0.02, 0.005};

  std::size_t k() const { return b.size(); }
  void validate(double epsilon = 0.0) const;
};

struct PolicyEvaluation {
  double opt = 0;
  double max_exp = 0;
  double ratio = 0;
  std::size_t orderings = 0;
  double max_ordering_value = 0;  // largest per-ordering value
};

// Limit of E[max] as eps -> 0.
double max_expectation_limit(const HardnessInstance& hi);

// One IID step in the eps -> 0 limit: V + sum_{b_j > V} (b_j - V) p_j / N + 1/N.
double iid_limit_step(const HardnessInstance& hi, double V);

// tau_s: optimal value of s IID items alone, s = 0..N.
std::vector<double> suffix_recursion_cache(const HardnessInstance& hi);

// Optimal value when the deterministic item is preceded by r IID items,
// by direct backward recursion (O(r) steps).
double ordering_value(const HardnessInstance& hi, const std::vector<double>& suffix, std::size_t r);

PolicyEvaluation optimal_policy_value(const HardnessInstance& hi);

struct ConvergenceRow {
  std::size_t N;
  double ratio;
};
std::vector<ConvergenceRow> convergence_table(const HardnessInstance& hi, const std::vector<std::size_t>& Ns);

// Finite-eps versions used by the brute-force cross-check.
double iid_finite_step(const HardnessInstance& hi, double eps, double V);
double optimal_policy_finite(const HardnessInstance& hi, double eps);
double max_expectation_finite(const HardnessInstance& hi, double eps);

// Exhaustive oracle: all orderings of the N+1 items, all threshold policies,
// all value profiles. Returns the mean over orderings of the best policy value.
double brute_force_opt(const HardnessInstance& hi, double eps);
double brute_force_max(const HardnessInstance& hi, double eps);

}  // namespace prophet

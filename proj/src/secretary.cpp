#include "prophet/secretary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "prophet/errors.hpp"
#include "prophet/numeric.hpp"

namespace prophet {

void HardnessInstance::validate(double epsilon) const {
  if (N < 1) throw InvalidInput("N must be >= 1");
  if (b.size() != p.size()) throw InvalidInput("b and p must have the same length");
  double prev = a;
  double mass = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!(b[j] > prev)) throw InvalidInput("need a < b_1 < ... < b_k");
    if (!(p[j] >= 0)) throw InvalidInput("masses must be non-negative");
    prev = b[j];
    mass += p[j] / double(N);
  }
  if (mass + epsilon > 1.0) throw InvalidInput("sum p / N + eps must be <= 1");
}

double max_expectation_limit(const HardnessInstance& hi) {
  hi.validate();
  double N = double(hi.N);
  auto pw = [&](double s) { return std::exp(N * std::log1p(-s / N)); };
  double total = std::accumulate(hi.p.begin(), hi.p.end(), 0.0);
  CompensatedSum e;
  e.add(hi.a * pw(total));
  for (std::size_t i = 0; i < hi.k(); ++i) {
    double above = 0, at_or_above = 0;
    for (std::size_t j = i; j < hi.k(); ++j) {
      at_or_above += hi.p[j];
      if (j > i) above += hi.p[j];
    }
    e.add(hi.b[i] * (pw(above) - pw(at_or_above)));
  }
  e.add(1.0);
  return e.value();
}

namespace {

// Suffix sums over {j : b_j > V}, with V non-decreasing along a trajectory.
class LimitStepper {
 public:
  explicit LimitStepper(const HardnessInstance& hi) : hi_(hi), P_(hi.k() + 1, 0.0), B_(hi.k() + 1, 0.0) {
    double N = double(hi.N);
    for (std::size_t j = hi.k(); j-- > 0;) {
      P_[j] = P_[j + 1] + hi.p[j] / N;
      B_[j] = B_[j + 1] + hi.b[j] * hi.p[j] / N;
    }
    inv_n_ = 1.0 / N;
  }
  std::size_t first_above(double V) const {
    std::size_t i = 0;
    while (i < hi_.k() && !(hi_.b[i] > V)) ++i;
    return i;
  }
  double increment(double V, std::size_t& idx) const {
    while (idx < hi_.k() && !(hi_.b[idx] > V)) ++idx;
    return B_[idx] - V * P_[idx] + inv_n_;
  }

 private:
  const HardnessInstance& hi_;
  std::vector<double> P_, B_;
  double inv_n_ = 0;
};

// Runs `steps` IID limit steps starting from V0; writes every state if out != nullptr.
double run_trajectory(const HardnessInstance& hi, const LimitStepper& st, double V0, std::size_t steps,
                      std::vector<double>* out) {
  const double guard = hi.b.empty() ? hi.a + 1.0 + 1e-9 : hi.b.back() + 1.0;
  CompensatedSum V;
  V.add(V0);
  double v = V0;
  std::size_t idx = st.first_above(v);
  if (out) out->push_back(v);
  for (std::size_t s = 0; s < steps; ++s) {
    V.add(st.increment(v, idx));
    v = V.value();
    if (!(v < guard)) throw VerificationFailure("recursion value exceeded the sanity bound " + std::to_string(guard));
    if (out) out->push_back(v);
  }
  return v;
}

}  // namespace

double iid_limit_step(const HardnessInstance& hi, double V) {
  double s = V + 1.0 / double(hi.N);
  for (std::size_t j = 0; j < hi.k(); ++j) {
    if (hi.b[j] > V) s += (hi.b[j] - V) * hi.p[j] / double(hi.N);
  }
  return s;
}

std::vector<double> suffix_recursion_cache(const HardnessInstance& hi) {
  hi.validate();
  LimitStepper st(hi);
  std::vector<double> tau;
  tau.reserve(hi.N + 1);
  run_trajectory(hi, st, 0.0, hi.N, &tau);
  return tau;
}

double ordering_value(const HardnessInstance& hi, const std::vector<double>& suffix, std::size_t r) {
  if (r > hi.N) throw InvalidInput("ordering index out of range");
  LimitStepper st(hi);
  double W = std::max(hi.a, suffix[hi.N - r]);
  return run_trajectory(hi, st, W, r, nullptr);
}

PolicyEvaluation optimal_policy_value(const HardnessInstance& hi) {
  hi.validate();
  LimitStepper st(hi);
  std::vector<double> suffix = suffix_recursion_cache(hi);
  // Orderings whose IID tail is already worth at least a continue exactly
  // like the all-IID recursion; the others all restart from a.
  std::vector<double> from_a;
  from_a.reserve(hi.N + 1);
  run_trajectory(hi, st, hi.a, hi.N, &from_a);
  CompensatedSum total;
  double mx = 0;
  for (std::size_t r = 0; r <= hi.N; ++r) {
    double v = suffix[hi.N - r] >= hi.a ? suffix[hi.N] : from_a[r];
    total.add(v);
    mx = std::max(mx, v);
  }
  PolicyEvaluation ev;
  ev.orderings = hi.N + 1;
  ev.opt = total.value() / double(hi.N + 1);
  ev.max_exp = max_expectation_limit(hi);
  ev.ratio = ev.opt / ev.max_exp;
  ev.max_ordering_value = mx;
  return ev;
}

std::vector<ConvergenceRow> convergence_table(const HardnessInstance& hi, const std::vector<std::size_t>& Ns) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t N : Ns) {
    HardnessInstance h = hi;
    h.N = N;
    rows.push_back({N, optimal_policy_value(h).ratio});
  }
  return rows;
}

namespace {

struct Atom {
  double v, p;
};

std::vector<Atom> iid_atoms(const HardnessInstance& hi, double eps) {
  double N = double(hi.N);
  std::vector<Atom> at;
  double rest = 1.0 - eps;
  for (std::size_t j = 0; j < hi.k(); ++j) {
    at.push_back({hi.b[j], hi.p[j] / N});
    rest -= hi.p[j] / N;
  }
  at.push_back({1.0 / (N * eps), eps});
  at.push_back({0.0, rest});
  return at;
}

}  // namespace

double iid_finite_step(const HardnessInstance& hi, double eps, double V) {
  double s = V;
  for (const auto& a : iid_atoms(hi, eps)) {
    if (a.v > V) s += (a.v - V) * a.p;
  }
  return s;
}

double optimal_policy_finite(const HardnessInstance& hi, double eps) {
  hi.validate(eps);
  std::vector<double> tau(hi.N + 1, 0.0);
  for (std::size_t s = 1; s <= hi.N; ++s) tau[s] = iid_finite_step(hi, eps, tau[s - 1]);
  double total = 0;
  for (std::size_t r = 0; r <= hi.N; ++r) {
    double V = std::max(hi.a, tau[hi.N - r]);
    for (std::size_t s = 0; s < r; ++s) V = iid_finite_step(hi, eps, V);
    total += V;
  }
  return total / double(hi.N + 1);
}

double max_expectation_finite(const HardnessInstance& hi, double eps) {
  hi.validate(eps);
  // E[max] = int_0^inf P[max > x] dx over the merged support.
  auto at = iid_atoms(hi, eps);
  std::vector<double> levels{0.0, hi.a};
  for (const auto& x : at) levels.push_back(x.v);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double e = 0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    double x = levels[i];
    double below = 0;  // P[one IID item <= x]
    for (const auto& a : at) {
      if (a.v <= x) below += a.p;
    }
    double det = hi.a <= x ? 1.0 : 0.0;
    double surv = 1.0 - det * std::pow(below, double(hi.N));
    e += surv * (levels[i + 1] - x);
  }
  return e;
}

double brute_force_opt(const HardnessInstance& hi, double eps) {
  hi.validate(eps);
  const std::size_t n = hi.N + 1;
  if (n > 4) throw CapExceeded("brute force limited to N <= 3");
  auto at = iid_atoms(hi, eps);
  // Item n-1 is deterministic.
  std::vector<std::vector<Atom>> laws(n);
  for (std::size_t i = 0; i + 1 < n; ++i) laws[i] = at;
  laws[n - 1] = {{hi.a, 1.0}};
  // Candidate thresholds: every support value (accept if v >= threshold) and never.
  std::vector<double> cands;
  for (const auto& a : at) cands.push_back(a.v);
  cands.push_back(hi.a);
  cands.push_back(std::numeric_limits<double>::infinity());
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0;
  std::size_t orderings = 0;
  do {
    double best = 0;
    std::vector<std::size_t> pol(n, 0);
    for (;;) {
      // Expected reward of policy `pol` under ordering `perm` over all profiles.
      std::vector<std::size_t> prof(n, 0);
      double value = 0;
      for (;;) {
        double prob = 1;
        double reward = 0;
        bool stopped = false;
        for (std::size_t s = 0; s < n; ++s) {
          const Atom& x = laws[perm[s]][prof[perm[s]]];
          prob *= 1.0;  // probabilities multiplied below
          if (!stopped && x.v >= cands[pol[s]]) {
            reward = x.v;
            stopped = true;
          }
        }
        for (std::size_t i = 0; i < n; ++i) prob *= laws[i][prof[i]].p;
        value += prob * reward;
        std::size_t d = 0;
        while (d < n && ++prof[d] == laws[d].size()) prof[d++] = 0;
        if (d == n) break;
      }
      best = std::max(best, value);
      std::size_t d = 0;
      while (d < n && ++pol[d] == cands.size()) pol[d++] = 0;
      if (d == n) break;
    }
    total += best;
    ++orderings;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / double(orderings);
}

double brute_force_max(const HardnessInstance& hi, double eps) {
  hi.validate(eps);
  const std::size_t n = hi.N;
  auto at = iid_atoms(hi, eps);
  std::vector<std::size_t> prof(n, 0);
  double e = 0;
  for (;;) {
    double prob = 1, mx = hi.a;
    for (std::size_t i = 0; i < n; ++i) {
      prob *= at[prof[i]].p;
      mx = std::max(mx, at[prof[i]].v);
    }
    e += prob * mx;
    std::size_t d = 0;
    while (d < n && ++prof[d] == at.size()) prof[d++] = 0;
    if (d == n) break;
  }
  return e;
}

}  // namespace prophet

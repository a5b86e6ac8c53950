#include "prophet/lp_asd.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <map>
#include <numeric>

#include "prophet/errors.hpp"
#include "prophet/simplex.hpp"

namespace prophet {

void FiniteInstance::validate() const {
  if (support.empty()) throw InvalidInput("empty support");
  if (support[0] != 0.0) throw InvalidInput("support must start at 0");
  for (std::size_t j = 1; j < support.size(); ++j) {
    if (!(support[j] > support[j - 1])) throw InvalidInput("support must be strictly increasing");
  }
  if (probs.empty()) throw InvalidInput("no items");
  for (const auto& row : probs) {
    if (row.size() != support.size()) throw InvalidInput("item probabilities must match support size");
    double s = 0;
    for (double p : row) {
      if (!(p >= 0)) throw InvalidInput("negative probability");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw InvalidInput("item probabilities must sum to 1");
  }
}

std::string to_string(LpSetting s) {
  return s == LpSetting::OrderSelection ? "order-selection" : "prophet-secretary";
}

LpSetting parse_setting(const std::string& s) {
  if (s == "order-selection") return LpSetting::OrderSelection;
  if (s == "prophet-secretary") return LpSetting::ProphetSecretary;
  throw InvalidInput("unknown setting: " + s);
}

std::size_t Enumeration::columns() const {
  std::size_t c = 0;
  for (const auto& b : blocks) c += b.algorithms.size();
  return c;
}

namespace {

// Shortest round-trip decimal of p, read back as an exact rational (0.2 -> 1/5).
mpq_class decimal_rational(double p) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, p);
  std::string s(buf, res.ptr);
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    exp10 = std::stol(s.substr(e + 1));
    s.resize(e);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    exp10 -= long(s.size() - dot - 1);
    s.erase(dot, 1);
  }
  mpz_class num(s, 10), scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, std::size_t(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return q;
}

}  // namespace

std::vector<std::vector<mpq_class>> exact_probabilities(const FiniteInstance& fi) {
  fi.validate();
  std::vector<std::vector<mpq_class>> out;
  for (const auto& row : fi.probs) {
    std::vector<mpq_class> r;
    mpq_class s = 0;
    for (double p : row) {
      r.push_back(decimal_rational(p));
      s += r.back();
    }
    for (auto& v : r) v /= s;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<mpq_class> exceedance(const std::vector<std::vector<mpq_class>>& probs,
                                  const std::vector<std::size_t>& order,
                                  const std::vector<std::size_t>& thresholds) {
  const std::size_t n = probs.size();
  const std::size_t k = probs[0].size();
  // Distribution of the accepted level; nothing accepted counts as level 0.
  std::vector<mpq_class> level(k, mpq_class(0));
  std::vector<std::size_t> prof(n, 0);
  for (;;) {
    mpq_class pr = 1;
    for (std::size_t i = 0; i < n && sgn(pr) != 0; ++i) pr *= probs[i][prof[i]];
    if (sgn(pr) != 0) {
      std::size_t got = 0;
      for (std::size_t s = 0; s < n; ++s) {
        std::size_t v = prof[order[s]];
        if (thresholds[s] < k && v >= thresholds[s]) {
          got = v;
          break;
        }
      }
      level[got] += pr;
    }
    std::size_t d = 0;
    while (d < n && ++prof[d] == k) prof[d++] = 0;
    if (d == n) break;
  }
  std::vector<mpq_class> ex(k, mpq_class(0));
  mpq_class acc = 0;
  for (std::size_t j = k; j-- > 0;) {
    acc += level[j];
    ex[j] = acc;
  }
  return ex;
}

namespace {

std::vector<mpq_class> max_exceedance(const std::vector<std::vector<mpq_class>>& probs) {
  const std::size_t k = probs[0].size();
  std::vector<mpq_class> ex(k);
  for (std::size_t j = 0; j < k; ++j) {
    mpq_class below = 1;
    for (const auto& r : probs) {
      mpq_class b = 0;
      for (std::size_t l = 0; l < j; ++l) b += r[l];
      below *= b;
    }
    ex[j] = 1 - below;
  }
  return ex;
}

std::vector<std::vector<std::size_t>> threshold_sequences(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(n, 0);
  for (;;) {
    out.push_back(t);
    std::size_t d = 0;
    while (d < n && ++t[d] == k + 1) t[d++] = 0;
    if (d == n) break;
  }
  return out;
}

void dedupe(std::vector<DeterministicAlgorithm>& algs) {
  std::map<std::vector<mpq_class>, std::size_t> seen;
  std::vector<DeterministicAlgorithm> kept;
  for (auto& a : algs) {
    if (seen.emplace(a.exceed, kept.size()).second) kept.push_back(std::move(a));
  }
  algs = std::move(kept);
}

std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Enumeration enumerate_algorithms(const FiniteInstance& fi, const EnumerationOptions& opt) {
  auto probs = exact_probabilities(fi);
  const std::size_t n = fi.n(), k = fi.k();
  double count = double(factorial(n)) * std::pow(double(k + 1), double(n));
  if (opt.setting == LpSetting::ProphetSecretary && (n > 3 || k > 3)) {
    throw CapExceeded("prophet-secretary enumeration limited to n <= 3, k <= 3");
  }
  if (count > double(opt.cap)) {
    throw CapExceeded("enumeration size " + std::to_string(std::size_t(count)) + " exceeds cap " +
                      std::to_string(opt.cap));
  }
  Enumeration en;
  en.setting = opt.setting;
  en.max_exceed = max_exceedance(probs);
  auto seqs = threshold_sequences(n, k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (opt.setting == LpSetting::OrderSelection) {
    AlgorithmBlock blk;
    do {
      for (const auto& t : seqs) blk.algorithms.push_back({order, t, exceedance(probs, order, t)});
    } while (std::next_permutation(order.begin(), order.end()));
    en.enumerated = blk.algorithms.size();
    if (opt.deduplicate) dedupe(blk.algorithms);
    en.blocks.push_back(std::move(blk));
  } else {
    mpq_class w(1, factorial(n));
    w.canonicalize();
    do {
      AlgorithmBlock blk;
      blk.order = order;
      blk.weight = w;
      for (const auto& t : seqs) blk.algorithms.push_back({order, t, exceedance(probs, order, t)});
      en.enumerated += blk.algorithms.size();
      if (opt.deduplicate) dedupe(blk.algorithms);
      en.blocks.push_back(std::move(blk));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return en;
}

double LpSolution::duality_gap() const { return std::abs(mpq_class(mu - alpha).get_d()); }

LpSolution solve_lp_pair(const Enumeration& en) {
  const std::size_t k = en.max_exceed.size();
  const std::size_t B = en.blocks.size();
  const std::size_t cols = en.columns();

  // LP2: variables [alpha, lambda...]; maximise alpha.
  LinearProgram p2;
  p2.num_vars = 1 + cols;
  p2.objective.assign(p2.num_vars, mpq_class(0));
  p2.objective[0] = 1;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<mpq_class> row(p2.num_vars, mpq_class(0));
    row[0] = en.max_exceed[j];
    std::size_t c = 1;
    for (const auto& b : en.blocks) {
      for (const auto& a : b.algorithms) row[c++] = -b.weight * a.exceed[j];
    }
    p2.add_row(std::move(row), Sense::LessEq, 0);
  }
  {
    std::size_t c = 1;
    for (const auto& b : en.blocks) {
      std::vector<mpq_class> row(p2.num_vars, mpq_class(0));
      for (std::size_t i = 0; i < b.algorithms.size(); ++i) row[c++] = 1;
      p2.add_row(std::move(row), Sense::Equal, 1);
    }
  }
  auto r2 = solve_exact(p2);
  if (r2.status != LpStatus::Optimal) throw InfeasibleLp("LP2 did not reach an optimum");

  // LP1: variables [c_1..c_k, nu_1..nu_B]; minimise sum nu.
  LinearProgram p1;
  p1.num_vars = k + B;
  p1.maximize = false;
  p1.objective.assign(p1.num_vars, mpq_class(0));
  for (std::size_t b = 0; b < B; ++b) p1.objective[k + b] = 1;
  {
    std::vector<mpq_class> row(p1.num_vars, mpq_class(0));
    for (std::size_t j = 0; j < k; ++j) row[j] = en.max_exceed[j];
    p1.add_row(std::move(row), Sense::Equal, 1);
  }
  for (std::size_t b = 0; b < B; ++b) {
    for (const auto& a : en.blocks[b].algorithms) {
      std::vector<mpq_class> row(p1.num_vars, mpq_class(0));
      for (std::size_t j = 0; j < k; ++j) row[j] = -en.blocks[b].weight * a.exceed[j];
      row[k + b] = 1;
      p1.add_row(std::move(row), Sense::GreaterEq, 0);
    }
  }
  auto r1 = solve_exact(p1);
  if (r1.status != LpStatus::Optimal) throw InfeasibleLp("LP1 did not reach an optimum");

  LpSolution sol;
  sol.alpha = r2.value;
  sol.mu = r1.value;
  sol.pivots_primal = r1.pivots;
  sol.pivots_dual = r2.pivots;
  std::size_t c = 1;
  for (const auto& b : en.blocks) {
    std::vector<mpq_class> lam;
    for (std::size_t i = 0; i < b.algorithms.size(); ++i) lam.push_back(r2.x[c++]);
    sol.lambda.push_back(std::move(lam));
  }
  sol.c.assign(r1.x.begin(), r1.x.begin() + long(k));
  sol.nu.assign(r1.x.begin() + long(k), r1.x.end());
  return sol;
}

MixtureReport extract_asd_mixture(const FiniteInstance& fi, const Enumeration& en, const LpSolution& sol) {
  const std::size_t k = en.max_exceed.size();
  MixtureReport rep;
  std::vector<mpq_class> mix(k, mpq_class(0));
  for (std::size_t b = 0; b < en.blocks.size(); ++b) {
    mpq_class total = 0;
    for (std::size_t i = 0; i < en.blocks[b].algorithms.size(); ++i) {
      const auto& lam = sol.lambda[b][i];
      total += lam;
      if (sgn(lam) < 0) throw VerificationFailure("negative mixture weight");
      if (sgn(lam) == 0) continue;
      const auto& a = en.blocks[b].algorithms[i];
      rep.support.push_back({b, a.order, a.thresholds, lam.get_d()});
      for (std::size_t j = 0; j < k; ++j) mix[j] += en.blocks[b].weight * lam * a.exceed[j];
    }
    if (total != 1) throw VerificationFailure("mixture weights do not sum to one");
  }
  rep.point_mass = rep.support.size() == en.blocks.size();
  bool ok = true;
  rep.min_residual = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    mpq_class r = mix[j] - sol.alpha * en.max_exceed[j];
    ok = ok && sgn(r) >= 0;
    rep.exceed.push_back(mix[j].get_d());
    rep.residual.push_back(r.get_d());
    rep.min_residual = std::min(rep.min_residual, r.get_d());
  }
  for (std::size_t j = 0; j < k; ++j) {
    double step = fi.support[j] - (j ? fi.support[j - 1] : 0.0);
    rep.expected_alg += step * rep.exceed[j];
    rep.expected_max += step * en.max_exceed[j].get_d();
  }
  rep.pass = ok && rep.min_residual >= -1e-9;
  if (!rep.pass) throw VerificationFailure("mixture violates an ASD constraint");
  return rep;
}

mpq_class best_response_value(const Enumeration& en, const std::vector<mpq_class>& c) {
  mpq_class norm = 0;
  for (std::size_t j = 0; j < c.size(); ++j) norm += c[j] * en.max_exceed[j];
  if (sgn(norm) <= 0) throw InvalidInput("level weights must give positive mass to the max");
  mpq_class total = 0;
  for (const auto& b : en.blocks) {
    mpq_class best = 0;
    for (const auto& a : b.algorithms) {
      mpq_class v = 0;
      for (std::size_t j = 0; j < c.size(); ++j) v += c[j] * a.exceed[j];
      if (v > best) best = v;
    }
    total += b.weight * best;
  }
  return total / norm;
}

}  // namespace prophet

// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "corpus.hpp"
#include "lp_corpus.hpp"
#include "oracles.hpp"
#include "prophet/analysis.hpp"
#include "prophet/lp_asd.hpp"
#include "prophet/secretary.hpp"
#include "prophet/simulator.hpp"

using namespace prophet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = dt <= budget_s;
  bool ok = o.pass && in_time;
  failures += !ok;
  std::printf("CRITERION %d %s: %s (%s; %.2fs of %.0fs)\n", id, ok ? "PASS" : "FAIL", title, o.detail.c_str(), dt,
              budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

unsigned workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace

int main() {
  criterion(1, "PT constants", 10, [] {
    auto pt = compute_pt_constants();
    bool ok = std::abs(pt.alpha - 0.2109) <= 2e-4 && std::abs(pt.gamma_pt - 0.7251) <= 1e-4;
    return Outcome{ok, fmt("alpha=%.6f gamma_pt=%.6f", pt.alpha, pt.gamma_pt)};
  });

  criterion(2, "bracket reproduction", 5, [] {
    auto a = gamma_constants(0.7258);
    auto b = gamma_constants(0.7276);
    auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    bool ok = in(a.beta.x, 0.7879, 0.7880) && in(a.gamma_point.x, 0.7893, 0.7894) && in(b.beta.x, 0.7850, 0.7851) &&
              in(b.gamma_point.x, 0.7900, 0.7901);
    return Outcome{ok, fmt("beta=%.6f gamma=%.6f at 0.7258; beta=%.6f gamma=%.6f at 0.7276", a.beta.x,
                           a.gamma_point.x, b.beta.x, b.gamma_point.x)};
  });

  criterion(3, "adverse-item integrals and inequalities", 10, [] {
    auto rep = lemma8_integrals();
    std::ostringstream os;
    int integrals = 0, failed = 0;
    for (const auto& f : rep.facts) {
      if (!f.pass) ++failed;
      if (f.reference != 0) {
        ++integrals;
        os << f.value << " (" << f.rel_error * 100 << "%) ";
      }
    }
    os << "; " << rep.facts.size() << " facts, " << failed << " failed";
    return Outcome{rep.all_pass() && integrals == 4, os.str()};
  });

  criterion(4, "wrap-up bound", 10, [] {
    auto w = wrapup_bound(0.7258, 0.28);
    return Outcome{std::abs(w.value - 0.9998) <= 1e-3 && w.value < 1.0, fmt("value=%.6f", w.value)};
  });

  criterion(5, "hardness ratio", 1800, [] {
    HardnessInstance h;
    h.N = 10000;
    auto t0 = std::chrono::steady_clock::now();
    double r4 = optimal_policy_value(h).ratio;
    double dt4 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    h.N = 100000;
    double r5 = optimal_policy_value(h).ratio;
    bool ok = std::abs(r4 - 0.7254) <= 5e-4 && dt4 < 60 && std::abs(r5 - 0.725398) <= 1e-5;
    return Outcome{ok, fmt("N=1e4 ratio=%.7f (%.2fs); N=1e5 ratio=%.7f", r4, dt4, r5)};
  });

  criterion(6, "dominance equality on two uniforms", 300, [] {
    auto s = build_scheme_one(corpus::iid_uniform(2), {});
    SimulationConfig c;
    c.trials = 10000000;
    c.seed = 42;
    c.workers = workers();
    auto r = estimate_asd(s, c);
    double worst = 0;
    bool ok = r.probes.size() == 20;
    for (const auto& p : r.probes) {
      double z = std::abs(p.diff) / p.ci_diff;
      worst = std::max(worst, z);
      ok = ok && std::abs(p.diff) <= 3 * p.ci_diff;
    }
    return Outcome{ok, fmt("%.0f probes, worst |diff| = %.2f CI half-widths", double(r.probes.size()), worst)};
  });

  criterion(7, "two-scheme property suite", 120, [] {
    auto all = corpus::all();
    int built = 0, routed = 0, adverse = 0;
    double worst = 0;
    bool pt_seen = false, ok = all.size() >= 20;
    for (auto& n : all) {
      auto s = build_two_scheme(n.inst, {});
      ++built;
      for (auto& l : s.laws) worst = std::max(worst, l.total_mass);
      bool two = s.id == SchemeId::SchemeII;
      if (n.adverse) {
        ++adverse;
        routed += two;
      }
      if (n.name == "pt_hard_1000") {
        pt_seen = true;
        ok = ok && two && s.adverse_item && *s.adverse_item == 0;
      }
      ok = ok && s.well_defined();
    }
    ok = ok && pt_seen && routed == adverse && worst <= 1 + 1e-6;
    return Outcome{ok, fmt("%.0f instances, %.0f of %.0f adverse routed, max integral %.7f", built, routed, adverse,
                           worst)};
  });

  criterion(8, "LP duality", 60, [] {
    int n = 0;
    double gap = 0, res = 1;
    bool ok = true;
    for (auto& c : lp_corpus::all()) {
      if (c.fi.n() > 3 || c.fi.k() > 3) continue;
      for (auto s : {LpSetting::OrderSelection, LpSetting::ProphetSecretary}) {
        EnumerationOptions o;
        o.setting = s;
        auto en = enumerate_algorithms(c.fi, o);
        auto sol = solve_lp_pair(en);
        auto mix = extract_asd_mixture(c.fi, en, sol);
        gap = std::max(gap, sol.duality_gap());
        res = std::min(res, mix.min_residual);
        ok = ok && sol.duality_gap() <= 1e-9 && mix.min_residual >= -1e-9;
        ++n;
      }
    }
    ok = ok && n >= 10;
    return Outcome{ok, fmt("%.0f solves, max |mu-alpha| = %.1e, min residual = %.1e", n, gap, res)};
  });

  criterion(9, "oracle equivalence", 300, [] {
    const double eps = 1e-3;
    double worst = 0;
    int cases = 0;
    const std::vector<double> b = {1.5, 2.5};
    const std::vector<double> p = {0.4, 0.3};
    for (std::size_t N = 1; N <= 3; ++N) {
      for (std::size_t k = 0; k <= 2; ++k) {
        HardnessInstance h;
        h.N = N;
        h.a = 1.0;
        h.b.assign(b.begin(), b.begin() + long(k));
        h.p.assign(p.begin(), p.begin() + long(k));
        worst = std::max(worst, std::abs(brute_force_opt(h, eps) - optimal_policy_finite(h, eps)));
        ++cases;
      }
    }
    bool ok = worst <= 1e-12;
    SimulationConfig c;
    c.trials = 1000000;
    c.seed = 7;
    c.workers = workers();
    double zmax = 0;
    {
      auto s = build_scheme_one(corpus::iid_uniform(2), {});
      auto r = estimate_asd(s, c);
      for (std::size_t i = 0; i < 2; ++i) {
        zmax = std::max(zmax, std::abs(r.accept_prob[i] - 0.7258 / 2) /
                                  (r.accept_ci[i] / 1.96));
      }
    }
    {
      auto inst = Instance::from_items({ValueDistribution::uniform(0, 1), ValueDistribution::uniform(0, 2)});
      auto s = build_scheme_one(inst, {});
      auto r = estimate_asd(s, c);
      oracle::UniformPair o{0.7258};
      for (int i = 0; i < 2; ++i) {
        zmax = std::max(zmax, std::abs(r.accept_prob[std::size_t(i)] - o.acceptance(i)) /
                                  (r.accept_ci[std::size_t(i)] / 1.96));
      }
    }
    ok = ok && zmax <= 3;
    return Outcome{ok, fmt("%.0f enumeration cases, max gap %.1e; acceptance within %.2f sigma", cases, worst, zmax)};
  });

  return failures ? 1 : 0;
}

#include <doctest.h>

#include <random>

#include "lp_corpus.hpp"
#include "prophet/errors.hpp"
#include "prophet/simplex.hpp"

using namespace prophet;

namespace {

EnumerationOptions setting(LpSetting s) {
  EnumerationOptions o;
  o.setting = s;
  return o;
}

}  // namespace

TEST_SUITE("lp_asd") {
  TEST_CASE("simplex on a textbook problem") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {3, 5};
    lp.add_row({1, 0}, Sense::LessEq, 4);
    lp.add_row({0, 2}, Sense::LessEq, 12);
    lp.add_row({3, 2}, Sense::LessEq, 18);
    auto r = solve_exact(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == 36);
    CHECK(r.x[0] == 2);
    CHECK(r.x[1] == 6);
    LinearProgram bad;
    bad.num_vars = 1;
    bad.objective = {1};
    bad.add_row({1}, Sense::GreaterEq, 2);
    bad.add_row({1}, Sense::LessEq, 1);
    CHECK(solve_exact(bad).status == LpStatus::Infeasible);
    LinearProgram unb;
    unb.num_vars = 1;
    unb.objective = {1};
    unb.add_row({1}, Sense::GreaterEq, 0);
    CHECK(solve_exact(unb).status == LpStatus::Unbounded);
  }

  TEST_CASE("enumeration counts and exceedances") {
    FiniteInstance coins{{0, 1}, {{0.5, 0.5}, {0.5, 0.5}}};
    EnumerationOptions o;
    o.deduplicate = false;
    auto en = enumerate_algorithms(coins, o);
    CHECK(en.enumerated == 18);
    CHECK(en.columns() == 18);
    auto probs = exact_probabilities(coins);
    auto e = exceedance(probs, {0, 1}, {1, 0});
    CHECK(e[1] == mpq_class(3, 4));
    auto never = exceedance(probs, {0, 1}, {2, 2});
    CHECK(never[1] == 0);
    CHECK(never[0] == 1);
    CHECK(en.max_exceed[1] == mpq_class(3, 4));
    FiniteInstance big{{0, 1, 2, 3}, std::vector<std::vector<double>>(5, {0.25, 0.25, 0.25, 0.25})};
    CHECK_THROWS_AS(enumerate_algorithms(big, {}), CapExceeded);
  }

  TEST_CASE("small certified values") {
    FiniteInstance det{{0, 1}, {{0, 1}, {1, 0}}};
    auto en = enumerate_algorithms(det, {});
    auto sol = solve_lp_pair(en);
    CHECK(sol.alpha == 1);
    auto mix = extract_asd_mixture(det, en, sol);
    CHECK(mix.point_mass);
    FiniteInstance coins{{0, 1}, {{0.5, 0.5}, {0.5, 0.5}}};
    auto en2 = enumerate_algorithms(coins, {});
    CHECK(solve_lp_pair(en2).alpha == 1);
  }

  TEST_CASE("strong duality and dominance on toy instances") {
    std::size_t count = 0;
    for (auto& n : lp_corpus::all()) {
      for (auto s : {LpSetting::OrderSelection, LpSetting::ProphetSecretary}) {
        CAPTURE(n.name);
        CAPTURE(to_string(s));
        auto en = enumerate_algorithms(n.fi, setting(s));
        auto sol = solve_lp_pair(en);
        CHECK(sol.alpha == sol.mu);
        CHECK(sol.duality_gap() <= 1e-9);
        auto mix = extract_asd_mixture(n.fi, en, sol);
        CHECK(mix.pass);
        CHECK(mix.min_residual >= -1e-9);
        CHECK(mix.expected_alg >= sol.alpha.get_d() * mix.expected_max - 1e-12);
        CHECK(sol.alpha <= 1);
        CHECK(sol.alpha > 0);
        // Point masses are feasible, so the best single algorithm is a lower bound.
        if (s == LpSetting::OrderSelection) {
          mpq_class best = 0;
          for (const auto& a : en.blocks[0].algorithms) {
            mpq_class worst = 1;
            for (std::size_t j = 0; j < en.max_exceed.size(); ++j) {
              if (sgn(en.max_exceed[j]) > 0) worst = std::min(worst, mpq_class(a.exceed[j] / en.max_exceed[j]));
            }
            best = std::max(best, worst);
          }
          CHECK(sol.alpha >= best);
        }
        ++count;
      }
    }
    CHECK(count >= 20);
  }

  TEST_CASE("prophet secretary never beats order selection") {
    for (auto& n : lp_corpus::all()) {
      CAPTURE(n.name);
      auto a = solve_lp_pair(enumerate_algorithms(n.fi, setting(LpSetting::OrderSelection))).alpha;
      auto b = solve_lp_pair(enumerate_algorithms(n.fi, setting(LpSetting::ProphetSecretary))).alpha;
      CHECK(b <= a);
    }
  }

  TEST_CASE("monotone relabelling leaves the optimum unchanged") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.1, 3.0);
    for (auto& n : lp_corpus::all()) {
      CAPTURE(n.name);
      auto base = solve_lp_pair(enumerate_algorithms(n.fi, {})).alpha;
      for (int rep = 0; rep < 3; ++rep) {
        FiniteInstance fi = n.fi;
        double acc = 0;
        for (std::size_t j = 1; j < fi.support.size(); ++j) {
          acc += U(rng);
          fi.support[j] = acc;
        }
        CHECK(solve_lp_pair(enumerate_algorithms(fi, {})).alpha == base);
      }
    }
  }

  TEST_CASE("every dual point has a good enough response") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> U(0, 20);
    for (auto& n : lp_corpus::all()) {
      for (auto s : {LpSetting::OrderSelection, LpSetting::ProphetSecretary}) {
        CAPTURE(n.name);
        auto en = enumerate_algorithms(n.fi, setting(s));
        auto sol = solve_lp_pair(en);
        CHECK(best_response_value(en, sol.c) == sol.alpha);
        for (int rep = 0; rep < 25; ++rep) {
          std::vector<mpq_class> c(en.max_exceed.size());
          for (auto& v : c) v = U(rng);
          c[0] += 1;
          CHECK(best_response_value(en, c) >= sol.alpha);
        }
      }
    }
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS((FiniteInstance{{1, 2}, {{0.5, 0.5}}}.validate()), InvalidInput);
    CHECK_THROWS_AS((FiniteInstance{{0, 1}, {{0.5, 0.4}}}.validate()), InvalidInput);
    CHECK_THROWS_AS((FiniteInstance{{0, 1}, {{0.5, 0.5, 0.0}}}.validate()), InvalidInput);
    CHECK_THROWS_AS(parse_setting("free-order"), InvalidInput);
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "prophet/errors.hpp"

using namespace prophet;

TEST_SUITE("distributions") {
  TEST_CASE("max exceedance of two uniforms") {
    auto inst = corpus::iid_uniform(2);
    CHECK(inst.max_exceed_prob(0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(inst.max_exceed_prob(0.5, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(inst.max_exceed_prob(1.5) == 0.0);
    for (auto& n : corpus::all()) CHECK(n.inst.max_exceed_prob(n.inst.upper() + 1.0) == 0.0);
  }

  TEST_CASE("threshold inversion") {
    auto inst = corpus::iid_uniform(2);
    CHECK(inst.threshold_tau(0.75) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(inst.threshold_tau(0.0) == 1.0);
    CHECK(inst.threshold_tau(1.0) == 0.0);
    for (double t = 0.01; t < 1.0; t += 0.01) {
      CHECK(std::abs(inst.threshold_tau(t) - std::sqrt(1 - t)) < 1e-10);
    }
  }

  TEST_CASE("threshold is non-increasing on the corpus") {
    for (auto& n : corpus::all()) {
      double prev = n.inst.threshold_tau(0.0);
      for (int i = 1; i <= 200; ++i) {
        double tau = n.inst.threshold_tau(i / 200.0);
        CHECK_MESSAGE(tau <= prev + 1e-10, n.name);
        prev = tau;
      }
    }
  }

  TEST_CASE("level functions of two uniforms") {
    auto tab = level_functions(corpus::iid_uniform(2));
    auto lp = level_at(tab, 0.75);
    CHECK(lp.tau == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(lp.p[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(lp.q[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK((1 - lp.p[0]) * (1 - lp.q[0]) == doctest::Approx(0.25).epsilon(1e-7));
    auto z = level_at(tab, 0.0);
    CHECK(z.p[0] == 0.0);
    CHECK(z.q[0] == 0.0);
  }

  TEST_CASE("level function identities on the corpus") {
    SweepOptions opt;
    for (auto& n : corpus::all()) {
      CAPTURE(n.name);
      auto tab = level_functions(n.inst, opt);
      double worst = 0, dom = 0;
      bool monotone = true;
      for (std::size_t g = 0; g < tab.groups(); ++g) {
        for (std::size_t r = 0; r < tab.rows(); ++r) {
          double t = tab.t[r], p = tab.p[g][r], q = tab.q[g][r];
          worst = std::max(worst, std::abs((1 - p) * (1 - q) - (1 - t)));
          dom = std::max({dom, p - t, q - t, -p});
          if (r > 0 && (p < tab.p[g][r - 1] || q < tab.q[g][r - 1])) monotone = false;
        }
        CHECK(tab.p[g].front() == doctest::Approx(0.0));
        CHECK(tab.p[g].back() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tab.q[g].back() == doctest::Approx(1.0).epsilon(1e-9));
      }
      CHECK(worst <= opt.tol_prob);
      CHECK(dom <= opt.tol_prob);
      CHECK(monotone);
      for (std::size_t r = 1; r < tab.rows(); ++r) CHECK(tab.tau[r] < tab.tau[r - 1]);
    }
  }

  TEST_CASE("smoothing converges to the step function") {
    auto coin = ValueDistribution::finite({{0, 0.3}, {1, 0.5}, {2, 0.2}});
    for (double x : {-0.5, 0.05, 1.05, 2.05, 2.5}) {
      double exact = coin.survival(x);
      double prev = 1.0;
      for (double w : {0.4, 0.1, 1e-2, 1e-4, 1e-6}) {
        Instance inst({{coin, 2}}, w);
        double err = std::abs(inst.max_exceed_prob(x) - (1 - (1 - exact) * (1 - exact)));
        CHECK(err <= prev + 1e-15);
        prev = err;
      }
      CHECK(prev < 1e-12);
    }
  }

  TEST_CASE("smoothed laws are continuous and strictly increasing") {
    auto d = ValueDistribution::finite({{0, 0.5}, {3, 0.25}, {4, 0.25}}).smoothed(1e-3);
    CHECK(d.continuous());
    double prev = -1;
    for (double x = 0.0; x <= 4.001; x += 0.0005) {
      double F = d.cdf(x);
      CHECK(F >= prev);
      prev = F;
    }
    CHECK(d.cdf(0.0005) == doctest::Approx(0.25));
  }

  TEST_CASE("distribution primitives") {
    auto u = ValueDistribution::uniform(1, 3);
    CHECK(u.cdf(2) == doctest::Approx(0.5));
    CHECK(u.quantile(0.25) == doctest::Approx(1.5));
    CHECK(u.mean() == doctest::Approx(2.0));
    auto pw = ValueDistribution::power(0, 1, 1e-3);
    CHECK(pw.survival(0.5) == doctest::Approx(-std::expm1(1e-3 * std::log(0.5))).epsilon(1e-14));
    CHECK(pw.quantile(pw.cdf(0.3)) == doctest::Approx(0.3).epsilon(1e-9));
    auto pl = ValueDistribution::piecewise_linear({{0, 0}, {1, 0.8}, {2, 1}});
    CHECK(pl.cdf(0.5) == doctest::Approx(0.4));
    CHECK(pl.mean() == doctest::Approx(0.5 * 0.8 * 1 + 1.5 * 0.2));
    std::mt19937_64 rng(7);
    double s = 0;
    for (int i = 0; i < 200000; ++i) s += pl.sample(rng);
    CHECK(s / 200000 == doctest::Approx(pl.mean()).epsilon(5e-3));
    CHECK_THROWS_AS(ValueDistribution::uniform(1, 1), InvalidInput);
    CHECK_THROWS_AS(ValueDistribution::finite({{0, 0.5}, {1, 0.4}}), InvalidInput);
  }

  TEST_CASE("item groups behave like repeated items") {
    auto a = Instance({{ValueDistribution::uniform(0, 1), 3}, {ValueDistribution::uniform(0, 2), 1}});
    auto b = Instance::from_items({ValueDistribution::uniform(0, 1), ValueDistribution::uniform(0, 1),
                                   ValueDistribution::uniform(0, 1), ValueDistribution::uniform(0, 2)});
    for (double x : {0.1, 0.7, 1.3}) {
      CHECK(a.max_exceed_prob(x) == doctest::Approx(b.max_exceed_prob(x)).epsilon(1e-14));
      CHECK(a.others_exceed_prob(0, x) == doctest::Approx(b.max_exceed_prob(x, 0)).epsilon(1e-14));
    }
    auto s = a.split_item(1);
    CHECK(s.num_items() == 4);
    CHECK(s.num_groups() == 4);
    CHECK(s.group_of(1) == 1);
    CHECK(s.group(1).count == 1);
  }

  TEST_CASE("jumps without smoothing are reported") {
    Instance inst({{ValueDistribution::finite({{0, 0.5}, {1, 0.5}}), 2}}, 0.0);
    CHECK_THROWS_AS(level_functions(inst), NonInvertible);
  }
}

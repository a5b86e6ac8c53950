#include <doctest.h>

#include <cmath>
#include <random>

#include "prophet/secretary.hpp"

using namespace prophet;

TEST_CASE("hardness ratio at N = 10^5") {
  HardnessInstance h;
  auto ev = optimal_policy_value(h);
  CHECK(std::abs(ev.ratio - 0.725398) <= 1e-5);
  CHECK(ev.ratio < 0.7254);

  auto rows = convergence_table(h, {100, 1000, 10000, 100000});
  REQUIRE(rows.size() == 4);
  CHECK(std::abs(rows[3].ratio - rows[2].ratio) < 1e-4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio <= rows[i - 1].ratio);

  auto tau = suffix_recursion_cache(h);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, h.N);
  std::vector<std::size_t> rs = {0, 1, h.N / 2, h.N - 1, h.N};
  for (int i = 0; i < 20; ++i) rs.push_back(pick(rng));
  for (std::size_t r : rs) CHECK(ordering_value(h, tau, r) <= ev.max_exp);
}

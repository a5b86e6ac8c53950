#pragma once

#include <string>
#include <vector>

#include "prophet/lp_asd.hpp"

namespace lp_corpus {

struct Named {
  std::string name;
  prophet::FiniteInstance fi;
};

inline std::vector<Named> all() {
  return {
      {"one_and_zero", {{0, 1}, {{0, 1}, {1, 0}}}},
      {"fair_coins", {{0, 1}, {{0.5, 0.5}, {0.5, 0.5}}}},
      {"biased_coins", {{0, 1}, {{0.9, 0.1}, {0.3, 0.7}}}},
      {"three_coins", {{0, 1}, {{0.5, 0.5}, {0.8, 0.2}, {0.6, 0.4}}}},
      {"two_levels_pair", {{0, 1, 2}, {{0.2, 0.5, 0.3}, {0.5, 0.4, 0.1}}}},
      {"long_shot", {{0, 1, 10}, {{0, 1, 0}, {0.9, 0, 0.1}}}},
      {"triple_k3", {{0, 1, 3}, {{0.2, 0.5, 0.3}, {0.5, 0.4, 0.1}, {0.7, 0, 0.3}}}},
      {"triple_spread", {{0, 0.5, 4}, {{0.1, 0.8, 0.1}, {0.6, 0.2, 0.2}, {0.3, 0.6, 0.1}}}},
      {"iid_triple", {{0, 1, 2}, {{0.4, 0.4, 0.2}, {0.4, 0.4, 0.2}, {0.4, 0.4, 0.2}}}},
      {"deterministic_mix", {{0, 1, 2}, {{0, 1, 0}, {0.5, 0, 0.5}, {1, 0, 0}}}},
      {"sure_and_risky", {{0, 2, 3}, {{0, 1, 0}, {0.25, 0, 0.75}}}},
      {"single_item", {{0, 1, 2}, {{0.3, 0.3, 0.4}}}},
  };
}

}  // namespace lp_corpus

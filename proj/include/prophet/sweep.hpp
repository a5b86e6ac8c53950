#pragma once

#include <functional>
#include <vector>

#include "prophet/distributions.hpp"

namespace prophet {

struct SweepRow {
  double tau = 0;
  double t = 0;
  std::vector<double> tau_g, p, q;
};

// Evaluates a row at a common threshold value (t is filled by the caller).
using RowEval = std::function<SweepRow(double tau)>;

// Tabulates rows at the grid's threshold values and refines between
// neighbours until the tracked level functions change slowly enough.
LevelTable refined_sweep(const Instance& inst, const SweepOptions& opt, const RowEval& eval);

}  // namespace prophet

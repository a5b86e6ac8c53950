#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace prophet {

enum class Sense { LessEq, Equal, GreaterEq };

// max (or min) objective . x  s.t.  A x (sense) b,  x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<std::vector<mpq_class>> A;
  std::vector<mpq_class> b;
  std::vector<Sense> sense;
  std::vector<mpq_class> objective;
  bool maximize = true;

  void add_row(std::vector<mpq_class> row, Sense s, mpq_class rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  mpq_class value = 0;
  std::vector<mpq_class> x;
  std::size_t pivots = 0;
};

// Dense two-phase tableau simplex over the rationals with Bland's rule.
LpResult solve_exact(const LinearProgram& lp);

}  // namespace prophet

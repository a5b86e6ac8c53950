#include "prophet/simplex.hpp"

#include "prophet/errors.hpp"

namespace prophet {

void LinearProgram::add_row(std::vector<mpq_class> row, Sense s, mpq_class rhs) {
  if (row.size() != num_vars) throw InvalidInput("row width does not match num_vars");
  A.push_back(std::move(row));
  sense.push_back(s);
  b.push_back(std::move(rhs));
}

namespace {

struct Tableau {
  std::size_t m = 0, cols = 0;  // cols excludes rhs
  std::vector<std::vector<mpq_class>> t;  // m rows + objective row, each cols+1 wide
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;

  void pivot(std::size_t r, std::size_t c) {
    ++pivots;
    mpq_class inv = 1 / t[r][c];
    for (auto& v : t[r]) v *= inv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || sgn(t[i][c]) == 0) continue;
      mpq_class f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(t[r][j]) != 0) t[i][j] -= f * t[r][j];
      }
    }
    basis[r] = c;
  }

  // Objective row holds reduced costs for minimisation: entering column has negative cost.
  // Returns false if unbounded.
  bool run(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (allowed[j] && sgn(t[m][j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      mpq_class best;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(t[i][enter]) <= 0) continue;
        mpq_class ratio = t[i][cols] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_exact(const LinearProgram& lp) {
  const std::size_t m = lp.A.size();
  const std::size_t n = lp.num_vars;
  if (lp.objective.size() != n) throw InvalidInput("objective width does not match num_vars");

  // Column layout: [x (n)] [slack/surplus (one per inequality)] [artificial (one per row)]
  std::size_t n_slack = 0;
  for (auto s : lp.sense) n_slack += s != Sense::Equal;
  Tableau tb;
  tb.m = m;
  tb.cols = n + n_slack + m;
  tb.t.assign(m + 1, std::vector<mpq_class>(tb.cols + 1, mpq_class(0)));
  tb.basis.assign(m, 0);
  std::size_t slack = n;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = tb.t[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = lp.A[i][j];
    if (lp.sense[i] == Sense::LessEq) row[slack++] = 1;
    if (lp.sense[i] == Sense::GreaterEq) row[slack++] = -1;
    row[tb.cols] = lp.b[i];
    if (sgn(row[tb.cols]) < 0) {
      for (auto& v : row) v = -v;
    }
    row[n + n_slack + i] = 1;
    tb.basis[i] = n + n_slack + i;
  }
  // Phase 1: minimise the sum of artificials.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= tb.cols; ++j) {
      if (j < n + n_slack || j == tb.cols) tb.t[m][j] -= tb.t[i][j];
    }
  }
  std::vector<bool> allowed(tb.cols, true);
  tb.run(allowed);
  LpResult res;
  if (sgn(tb.t[m][tb.cols]) != 0) {
    res.status = LpStatus::Infeasible;
    res.pivots = tb.pivots;
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n + n_slack) continue;
    for (std::size_t j = 0; j < n + n_slack; ++j) {
      if (sgn(tb.t[i][j]) != 0) {
        tb.pivot(i, j);
        break;
      }
    }
  }
  for (std::size_t j = n + n_slack; j < tb.cols; ++j) allowed[j] = false;

  // Phase 2 objective, expressed as minimisation.
  auto& obj = tb.t[m];
  for (auto& v : obj) v = 0;
  for (std::size_t j = 0; j < n; ++j) obj[j] = lp.maximize ? mpq_class(-lp.objective[j]) : lp.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t c = tb.basis[i];
    if (sgn(obj[c]) == 0) continue;
    mpq_class f = obj[c];
    for (std::size_t j = 0; j <= tb.cols; ++j) obj[j] -= f * tb.t[i][j];
  }
  if (!tb.run(allowed)) {
    res.status = LpStatus::Unbounded;
    res.pivots = tb.pivots;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.pivots = tb.pivots;
  res.x.assign(n, mpq_class(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n) res.x[tb.basis[i]] = tb.t[i][tb.cols];
  }
  mpq_class v = 0;
  for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * res.x[j];
  res.value = v;
  return res;
}

}  // namespace prophet

#include "prophet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

bool needs_refine(const SweepRow& a, const SweepRow& b, const SweepOptions& opt) {
  for (std::size_t g = 0; g < a.p.size(); ++g) {
    double dq = std::fabs(b.q[g] - a.q[g]);
    double dp = std::fabs(b.p[g] - a.p[g]);
    if (dq > opt.tol_q) return true;
    if (dp * dq > opt.tol_pq) return true;
  }
  return false;
}

// Trapezoid error of int p dq over [a, b], estimated from the midpoint row.
bool curved(const SweepRow& a, const SweepRow& m, const SweepRow& b, const SweepOptions& opt) {
  for (std::size_t g = 0; g < a.p.size(); ++g) {
    double dq = b.q[g] - a.q[g];
    if (dq == 0) continue;
    double chord = a.p[g] + (b.p[g] - a.p[g]) * (m.q[g] - a.q[g]) / dq;
    if (std::fabs(m.p[g] - chord) * std::fabs(dq) > opt.tol_curve) return true;
  }
  return false;
}

bool may_curve(const SweepRow& a, const SweepRow& b, const SweepOptions& opt) {
  for (std::size_t g = 0; g < a.p.size(); ++g) {
    if (std::fabs(b.p[g] - a.p[g]) * std::fabs(b.q[g] - a.q[g]) > opt.tol_curve) return true;
  }
  return false;
}

}  // namespace

LevelTable refined_sweep(const Instance& inst, const SweepOptions& opt, const RowEval& eval) {
  const auto& nodes = opt.grid.nodes;
  if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != 1.0) {
    throw InvalidInput("time grid must start at 0 and end at 1");
  }

  std::vector<SweepRow> base;
  base.reserve(nodes.size());
  for (double t : nodes) {
    double tau = inst.threshold_tau(t, opt.tol_value, opt.tol_prob);
    if (!base.empty() && tau >= base.back().tau) continue;
    SweepRow r = eval(tau);
    r.t = t;
    base.push_back(std::move(r));
  }

  std::vector<SweepRow> out;
  std::vector<bool> is_base;
  out.push_back(base.front());
  is_base.push_back(true);
  std::vector<SweepRow> stack;
  for (std::size_t k = 1; k < base.size(); ++k) {
    stack.clear();
    stack.push_back(base[k]);
    bool stack_base = true;  // bottom of the stack is the base row
    while (!stack.empty()) {
      const SweepRow& a = out.back();
      const SweepRow& b = stack.back();
      double mid = 0.5 * (a.tau + b.tau);
      bool splittable = mid > b.tau && mid < a.tau;
      if (needs_refine(a, b, opt)) {
        if (!splittable) {
          throw NonInvertible("level functions jump near value " + std::to_string(b.tau) +
                              "; increase smoothing_width");
        }
        SweepRow m = eval(mid);
        m.t = std::clamp(inst.max_exceed_prob(mid), a.t, b.t);
        stack.push_back(std::move(m));
        continue;
      }
      if (splittable && may_curve(a, b, opt)) {
        SweepRow m = eval(mid);
        if (curved(a, m, b, opt)) {
          m.t = std::clamp(inst.max_exceed_prob(mid), a.t, b.t);
          stack.push_back(std::move(m));
          continue;
        }
      }
      out.push_back(std::move(stack.back()));
      stack.pop_back();
      is_base.push_back(stack.empty() && stack_base);
      if (out.size() > opt.max_rows) {
        throw CapExceeded("level table exceeded " + std::to_string(opt.max_rows) + " rows");
      }
    }
  }

  LevelTable tab;
  std::size_t G = out.front().p.size();
  std::size_t R = out.size();
  tab.t.resize(R);
  tab.tau.resize(R);
  tab.base = std::move(is_base);
  tab.tau_g.assign(G, std::vector<double>(R));
  tab.p.assign(G, std::vector<double>(R));
  tab.q.assign(G, std::vector<double>(R));
  for (std::size_t r = 0; r < R; ++r) {
    tab.t[r] = out[r].t;
    tab.tau[r] = out[r].tau;
    for (std::size_t g = 0; g < G; ++g) {
      tab.tau_g[g][r] = out[r].tau_g[g];
      tab.p[g][r] = out[r].p[g];
      tab.q[g][r] = out[r].q[g];
    }
  }
  return tab;
}

LevelTable level_functions(const Instance& inst, const SweepOptions& opt) {
  std::size_t G = inst.num_groups();
  RowEval eval = [&](double tau) {
    SweepRow r;
    r.tau = tau;
    r.tau_g.assign(G, tau);
    r.p.resize(G);
    r.q.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
      r.p[g] = inst.group(g).dist.survival(tau);
      r.q[g] = inst.others_exceed_prob(g, tau);
    }
    return r;
  };
  return refined_sweep(inst, opt, eval);
}

LevelPoint level_at(const LevelTable& tab, double t) {
  if (!(t >= 0 && t <= 1)) throw DomainError("level_at: t must lie in [0,1]");
  std::size_t G = tab.groups();
  LevelPoint pt;
  pt.p.resize(G);
  pt.q.resize(G);
  auto it = std::lower_bound(tab.t.begin(), tab.t.end(), t);
  std::size_t j = std::size_t(it - tab.t.begin());
  if (j >= tab.rows()) j = tab.rows() - 1;
  if (j == 0 || tab.t[j] == t) {
    pt.tau = tab.tau[j];
    for (std::size_t g = 0; g < G; ++g) {
      pt.p[g] = tab.p[g][j];
      pt.q[g] = tab.q[g][j];
    }
    return pt;
  }
  std::size_t i = j - 1;
  double w = (t - tab.t[i]) / (tab.t[j] - tab.t[i]);
  pt.tau = tab.tau[i] + w * (tab.tau[j] - tab.tau[i]);
  for (std::size_t g = 0; g < G; ++g) {
    pt.p[g] = tab.p[g][i] + w * (tab.p[g][j] - tab.p[g][i]);
    pt.q[g] = tab.q[g][i] + w * (tab.q[g][j] - tab.q[g][i]);
  }
  return pt;
}

}  // namespace prophet

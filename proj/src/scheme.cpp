#include "prophet/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "prophet/errors.hpp"
#include "prophet/sweep.hpp"

namespace prophet {

std::string to_string(SchemeId id) { return id == SchemeId::SchemeI ? "SchemeI" : "SchemeII"; }

void SchemeParams::validate() const {
  if (!(gamma > 0 && gamma < 1)) throw InvalidInput("gamma must lie in (0,1)");
  if (!(epsilon > 0 && epsilon < c && c < 1)) throw InvalidInput("need 0 < epsilon < c < 1");
}

bool BuiltScheme::well_defined() const {
  for (const auto& l : laws) {
    if (!l.well_defined) return false;
  }
  return true;
}

double h_fn(double x, double c, double epsilon) {
  if (!(x >= 0 && x <= 1)) throw DomainError("h: x must lie in [0,1]");
  if (x < epsilon) return (c - epsilon) / epsilon * x;
  if (x < c) return c + epsilon * (x - c) / (c - epsilon);
  return x;
}

std::vector<double> g_algebraic(const Instance& inst, const LevelTable& tab, double gamma) {
  std::vector<double> g(tab.rows());
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    double s = 0;
    for (std::size_t k = 0; k < tab.groups(); ++k) {
      s += double(inst.group(k).count) * (1.0 - tab.q[k][r]) * tab.p[k][r];
    }
    g[r] = gamma * (s - tab.t[r]) + 1.0;
  }
  return g;
}

namespace {

double second_divided(const std::vector<double>& p, const std::vector<double>& q, std::size_t i,
                      std::size_t j, std::size_t k, bool& ok) {
  double h1 = q[j] - q[i], h2 = q[k] - q[j], span = q[k] - q[i];
  if (h1 == 0 || h2 == 0 || span == 0) {
    ok = false;
    return 0;
  }
  return ((p[k] - p[j]) / h2 - (p[j] - p[i]) / h1) / span;
}

// int p dq over rows [r-1, r]. Trapezoid, corrected by the curvature of p(q)
// when both neighbouring rows agree on it (they do not across a kink).
double cell_integral(const std::vector<double>& p, const std::vector<double>& q, std::size_t r) {
  std::size_t a = r - 1, b = r;
  double h = q[b] - q[a];
  double trap = 0.5 * (p[a] + p[b]) * h;
  if (h == 0 || a == 0 || b + 1 >= q.size()) return trap;
  bool ok = true;
  double left = second_divided(p, q, a - 1, a, b, ok);
  double right = second_divided(p, q, a, b, b + 1, ok);
  if (!ok) return trap;
  if (std::fabs(left - right) > 0.25 * std::max(std::fabs(left), std::fabs(right))) return trap;
  return trap - 0.5 * (left + right) * h * h * h / 6.0;
}

}  // namespace

std::vector<double> g_integral(const Instance& inst, const LevelTable& tab, double gamma) {
  std::size_t R = tab.rows();
  std::vector<double> g(R, 1.0);
  std::vector<double> J(tab.groups(), 0.0);
  for (std::size_t r = 1; r < R; ++r) {
    double s = 0;
    for (std::size_t k = 0; k < tab.groups(); ++k) {
      J[k] += cell_integral(tab.p[k], tab.q[k], r);
      s += double(inst.group(k).count) * J[k];
    }
    g[r] = 1.0 - gamma * s;
  }
  return g;
}

std::vector<ArrivalLaw> arrival_laws(const Instance& inst, const LevelTable& tab,
                                     const std::vector<double>& g, double gamma, double slack) {
  std::size_t R = tab.rows();
  for (std::size_t r = 0; r < R; ++r) {
    if (!(g[r] > 0) && tab.t[r] < 1.0) {
      std::ostringstream os;
      os << "g(t) = " << g[r] << " <= 0 at t = " << tab.t[r];
      throw DegenerateScheme(os.str());
    }
  }
  std::vector<std::size_t> base_rows;
  for (std::size_t r = 0; r < R; ++r) {
    if (tab.base[r]) base_rows.push_back(r);
  }
  std::vector<ArrivalLaw> laws(tab.groups());
  for (std::size_t k = 0; k < tab.groups(); ++k) {
    (void)inst;
    auto& law = laws[k];
    law.cumulative.assign(R, 0.0);
    const auto& p = tab.p[k];
    const auto& q = tab.q[k];
    double I = 0, F = 0;
    for (std::size_t r = 0; r + 1 < R; ++r) {
      double dq = q[r + 1] - q[r];
      if (dq != 0) {
        double e0 = std::exp(-gamma * I);
        I += 0.5 * (p[r] / g[r] + p[r + 1] / g[r + 1]) * dq;
        double e1 = std::exp(-gamma * I);
        F += 0.5 * gamma * (e0 / g[r] + e1 / g[r + 1]) * dq;
      }
      law.cumulative[r + 1] = F;
    }
    law.total_mass = F;
    law.atom_at_one = std::max(0.0, 1.0 - F);
    law.well_defined = F <= 1.0 + slack;
    for (std::size_t b = 0; b < base_rows.size(); ++b) {
      std::size_t r = base_rows[b];
      if (tab.t[r] >= 1.0) break;
      std::size_t lo = b > 0 ? base_rows[b - 1] : r;
      std::size_t hi = b + 1 < base_rows.size() ? base_rows[b + 1] : r;
      double dt = tab.t[hi] - tab.t[lo];
      law.node_t.push_back(tab.t[r]);
      law.node_density.push_back(dt > 0 ? (law.cumulative[hi] - law.cumulative[lo]) / dt : 0.0);
    }
  }
  return laws;
}

std::vector<ArrivalLaw> arrival_density_pt(const Instance& inst, const LevelTable& tab, double gamma) {
  return arrival_laws(inst, tab, g_algebraic(inst, tab, gamma), gamma);
}

std::vector<ArrivalLaw> arrival_density_general(const Instance& inst, const LevelTable& tab, double gamma) {
  return arrival_laws(inst, tab, g_integral(inst, tab, gamma), gamma);
}

namespace {

// inf{x : P[max of the others of group a > x] <= y}
double others_inverse(const Instance& inst, std::size_t a, double y, const SweepOptions& opt) {
  double lo = inst.lower(), hi = inst.upper();
  if (y <= 0) return hi;
  if (y >= 1) return lo;
  if (inst.others_exceed_prob(a, lo) <= y) return lo;
  for (;;) {
    double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (inst.others_exceed_prob(a, m) > y) {
      lo = m;
    } else {
      hi = m;
    }
  }
  double sa = inst.others_exceed_prob(a, lo), sb = inst.others_exceed_prob(a, hi);
  if (sa > y + opt.tol_prob && sb < y - opt.tol_prob) {
    throw NonInvertible("survival of the other items jumps across " + std::to_string(y) +
                        "; increase smoothing_width");
  }
  return hi;
}

std::vector<double> acceptance_from_laws(const Instance& inst, const LevelTable& tab,
                                         const std::vector<ArrivalLaw>& laws) {
  // P[item accepted] = int p_i(t) prod_{j != i} (1 - int_0^t p_j dF_j) dF_i(t)
  std::size_t G = tab.groups(), R = tab.rows();
  std::vector<std::vector<double>> K(G, std::vector<double>(R, 0.0));
  for (std::size_t k = 0; k < G; ++k) {
    for (std::size_t r = 1; r < R; ++r) {
      double dF = laws[k].cumulative[r] - laws[k].cumulative[r - 1];
      K[k][r] = K[k][r - 1] + 0.5 * (tab.p[k][r - 1] + tab.p[k][r]) * dF;
    }
  }
  auto survive = [&](std::size_t k, std::size_t r) {
    double s = 1.0;
    for (std::size_t h = 0; h < G; ++h) {
      double m = double(inst.group(h).count) - (h == k ? 1.0 : 0.0);
      if (m > 0) s *= std::pow(std::max(0.0, 1.0 - K[h][r]), m);
    }
    return s;
  };
  std::vector<double> acc(G, 0.0);
  for (std::size_t k = 0; k < G; ++k) {
    double a = 0, prev = tab.p[k][0] * survive(k, 0);
    for (std::size_t r = 1; r < R; ++r) {
      double dF = laws[k].cumulative[r] - laws[k].cumulative[r - 1];
      double cur = tab.p[k][r] * survive(k, r);
      a += 0.5 * (prev + cur) * dF;
      prev = cur;
    }
    acc[k] = a;
  }
  return acc;
}

}  // namespace

LevelTable scheme_two_schedule(const Instance& inst, std::size_t a, const SchemeParams& params) {
  params.validate();
  if (inst.group(a).count != 1) throw InvalidInput("the adverse group must hold a single item");
  std::size_t G = inst.num_groups();
  const auto& opt = params.sweep;
  RowEval eval = [&](double tau) {
    SweepRow r;
    r.tau = tau;
    r.tau_g.assign(G, tau);
    r.p.resize(G);
    r.q.resize(G);
    for (std::size_t k = 0; k < G; ++k) {
      double qk = inst.others_exceed_prob(k, tau);
      if (k != a) {
        r.p[k] = inst.group(k).dist.survival(tau);
        r.q[k] = qk;
        continue;
      }
      double y = h_fn(std::clamp(qk, 0.0, 1.0), params.c, params.epsilon);
      double tau_a = qk >= params.c ? tau : others_inverse(inst, a, y, opt);
      r.tau_g[k] = tau_a;
      r.p[k] = inst.group(k).dist.survival(tau_a);
      r.q[k] = qk >= params.c ? qk : inst.others_exceed_prob(a, tau_a);
    }
    return r;
  };
  return refined_sweep(inst, opt, eval);
}

BuiltScheme build_scheme_one(const Instance& inst, const SchemeParams& params) {
  params.validate();
  BuiltScheme s;
  s.inst = inst;
  s.params = params;
  s.id = SchemeId::SchemeI;
  s.table = level_functions(inst, params.sweep);
  s.g = g_algebraic(inst, s.table, params.gamma);
  s.laws = arrival_laws(inst, s.table, s.g, params.gamma, params.well_defined_slack);
  s.acceptance_probability = acceptance_from_laws(inst, s.table, s.laws);
  for (const auto& l : s.laws) s.scheme_one_integrals.push_back(l.total_mass);
  return s;
}

BuiltScheme build_scheme_two(const Instance& inst, std::size_t adverse_item, const SchemeParams& params) {
  params.validate();
  if (adverse_item >= inst.num_items()) throw InvalidInput("adverse item index out of range");
  BuiltScheme s;
  s.inst = inst.split_item(adverse_item);
  s.params = params;
  s.id = SchemeId::SchemeII;
  s.adverse_item = adverse_item;
  s.adverse_group = s.inst.group_of(adverse_item);
  s.table = scheme_two_schedule(s.inst, *s.adverse_group, params);
  s.g = g_integral(s.inst, s.table, params.gamma);
  s.laws = arrival_laws(s.inst, s.table, s.g, params.gamma, params.well_defined_slack);
  s.acceptance_probability = acceptance_from_laws(s.inst, s.table, s.laws);
  for (std::size_t k = 0; k < s.laws.size(); ++k) {
    double m = s.laws[k].total_mass;
    if (m <= 1.0 + params.well_defined_slack && m > 1.0 - params.safety_margin) {
      std::ostringstream os;
      os << "group " << k << " integral " << m << " is within the safety margin of 1";
      s.diagnostics.push_back(os.str());
    }
  }
  return s;
}

BuiltScheme build_two_scheme(const Instance& inst, const SchemeParams& params) {
  BuiltScheme one = build_scheme_one(inst, params);
  std::vector<std::size_t> adverse_items;
  for (std::size_t k = 0; k < one.laws.size(); ++k) {
    if (one.laws[k].well_defined) continue;
    for (std::size_t j = 0; j < inst.group(k).count; ++j) adverse_items.push_back(inst.first_item(k) + j);
  }
  if (adverse_items.empty()) return one;
  std::sort(adverse_items.begin(), adverse_items.end());
  std::size_t item = adverse_items.front();
  BuiltScheme two = build_scheme_two(inst, item, params);
  two.scheme_one_integrals = one.scheme_one_integrals;
  if (adverse_items.size() > 1) {
    std::ostringstream os;
    os << adverse_items.size() << " items are adverse; using item " << item;
    two.diagnostics.push_back(os.str());
  }
  if (!two.well_defined()) {
    std::ostringstream os;
    os << "neither scheme is well-defined at gamma=" << params.gamma << "; adverse item " << item
       << ", second-scheme integrals:";
    for (const auto& l : two.laws) os << ' ' << l.total_mass;
    throw BothSchemesFailed(os.str());
  }
  return two;
}

double PTilde::operator()(double xv) const {
  if (x.empty()) return 0.0;
  if (xv <= x.front()) return p.front();
  if (xv >= x.back()) return p.back();
  auto it = std::lower_bound(x.begin(), x.end(), xv);
  std::size_t j = std::size_t(it - x.begin());
  std::size_t i = j - 1;
  double w = x[j] - x[i];
  if (w <= 0) return p[j];
  return p[i] + (p[j] - p[i]) * (xv - x[i]) / w;
}

PTilde p_tilde(const LevelTable& tab, std::size_t group) {
  PTilde pt;
  pt.x = tab.q[group];
  pt.p = tab.p[group];
  return pt;
}

double integral_functional(const std::vector<double>& x, const std::vector<double>& p,
                           const std::vector<double>& rho, double gamma) {
  double I = 0, F = 0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    double dx = x[j + 1] - x[j];
    double e0 = std::exp(-gamma * I);
    I += 0.5 * (p[j] / rho[j] + p[j + 1] / rho[j + 1]) * dx;
    double e1 = std::exp(-gamma * I);
    F += 0.5 * gamma * (e0 / rho[j] + e1 / rho[j + 1]) * dx;
  }
  return F;
}

WeakAdverseReport weakly_adverse_check(const PTilde& pt, double gamma, std::size_t uniform_nodes) {
  std::set<double> nodes;
  for (std::size_t j = 0; j <= uniform_nodes; ++j) nodes.insert(double(j) / double(uniform_nodes));
  for (double v : pt.x) {
    if (v > 0 && v < 1) nodes.insert(v);
  }
  std::vector<double> x(nodes.begin(), nodes.end()), p, rho;
  p.reserve(x.size());
  rho.reserve(x.size());
  for (double v : x) {
    double pv = pt(v);
    double L = v < 1 ? -(1 - v) * std::log1p(-v) : 0.0;
    p.push_back(pv);
    rho.push_back(gamma * (L * (1 - pv) - v) + 1.0);
  }
  WeakAdverseReport rep;
  rep.G_hat = integral_functional(x, p, rho, gamma);
  rep.is_weakly_adverse = rep.G_hat > 1.0;
  return rep;
}

WeakAdverseReport weakly_adverse_check(const Instance& inst, std::size_t item, double gamma,
                                       const SweepOptions& opt) {
  LevelTable tab = level_functions(inst, opt);
  return weakly_adverse_check(p_tilde(tab, inst.group_of(item)), gamma);
}

}  // namespace prophet

#include "prophet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

constexpr double kZCap = 1.0 - 1e-9;

void check_gamma(double gamma) {
  if (!(gamma > 0 && gamma < 1)) throw DomainError("gamma must lie in (0,1)");
}

double m_integrand(double x, double gamma) { return gamma / (gamma * (ell(x) - x) + 1.0); }

// Cumulative integral of the M integrand on a fixed grid, one table per gamma.
class MTable {
 public:
  explicit MTable(double gamma) : gamma_(gamma), cum_(kCells + 1, 0.0) {
    for (int k = 0; k < kCells; ++k) {
      double a = double(k) / kCells, b = std::min(double(k + 1) / kCells, kZCap);
      cum_[k + 1] = cum_[k] + integrate_fixed([&](double x) { return m_integrand(x, gamma_); }, a, b);
    }
  }
  double M(double z) const {
    z = std::min(z, kZCap);
    int k = std::min(kCells - 1, int(z * kCells));
    double a = double(k) / kCells;
    double part = integrate_fixed([&](double x) { return m_integrand(x, gamma_); }, a, z);
    return 1.0 - (cum_[k] + part);
  }

 private:
  static constexpr int kCells = 256;
  double gamma_;
  std::vector<double> cum_;
};

const MTable& m_table(double gamma) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<MTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(gamma);
  if (it == cache.end()) it = cache.emplace(gamma, std::make_unique<MTable>(gamma)).first;
  return *it->second;
}

void check_z(double z) {
  if (!(z >= 0 && z < 1)) throw DomainError("z must lie in [0,1)");
}

NumericFact strict_fact(std::string name, double value, std::string rel, double bound) {
  NumericFact f;
  f.name = std::move(name);
  f.value = value;
  f.bound = bound;
  f.relation = rel;
  if (rel == "<") f.pass = value < bound;
  if (rel == ">") f.pass = value > bound;
  if (rel == "<=") f.pass = value <= bound;
  if (rel == ">=") f.pass = value >= bound;
  return f;
}

NumericFact approx_fact(std::string name, double value, std::string rel, double bound, double reference,
                        double rel_tol) {
  NumericFact f = strict_fact(std::move(name), value, std::move(rel), bound);
  f.reference = reference;
  f.rel_error = std::fabs(value - reference) / std::fabs(reference);
  f.rel_tol = rel_tol;
  f.pass = f.pass && f.rel_error <= rel_tol;
  return f;
}

}  // namespace

double ell(double z) {
  if (z >= 1) return 0.0;
  return -(1.0 - z) * std::log1p(-z);
}

double aux_H(double z, double gamma) {
  check_z(z);
  double L = ell(z);
  return gamma * L / (gamma * (L - z) + 1.0);
}

double aux_K(double z, double gamma) {
  check_z(z);
  return gamma * (1.0 - z) / (1.0 - gamma * z);
}

double aux_M(double z, double gamma) {
  check_z(z);
  check_gamma(gamma);
  if (z == 0) return 1.0;
  return m_table(gamma).M(z);
}

Root find_gamma_point(double gamma) {
  check_gamma(gamma);
  auto f = [&](double g) {
    double l = std::log1p(-g);
    return (l + 1.0) / (l + g) - gamma;
  };
  return bisect(f, 1.0 - std::exp(-1.0), 1.0 - 1e-15, 1e-13, "gamma point");
}

Root find_beta(double gamma) {
  check_gamma(gamma);
  double gp = find_gamma_point(gamma).x;
  auto f = [&](double z) { return aux_M(z, gamma) - aux_H(z, gamma); };
  const double step = 1e-3;
  double prev = 0.0;
  for (double z = step; z < gp + step; z += step) {
    double zz = std::min(z, gp);
    if (f(zz) <= 0) return bisect(f, prev, zz, 1e-13, "beta");
    prev = zz;
  }
  throw BracketFailure("beta: M - H has no sign change on [0, gamma point]");
}

GammaConstants gamma_constants(double gamma) {
  GammaConstants gc;
  gc.gamma = gamma;
  gc.gamma_point = find_gamma_point(gamma);
  gc.beta = find_beta(gamma);
  return gc;
}

double pt_equation(double a) {
  double la = std::log(a) + 1.0;
  double I = integrate([&](double x) { return la / (la * (x - x * std::log(x)) - a); }, a, 1.0, 1e-12);
  return I + 1.0 / std::log(a);
}

double pt_equation_as_printed(double a) {
  double la = std::log(a) + 1.0;
  double I = integrate([&](double x) { return la / (la * (x - x * std::log(x)) - a); }, a, 1.0, 1e-12);
  return I + 1.0 / a;
}

PTConstants compute_pt_constants() {
  PTConstants c;
  // The denominator stays negative for alpha < 1/e; bracket well inside.
  c.alpha_root = bisect(pt_equation, 0.05, 0.35, 1e-12, "pt alpha");
  c.alpha = c.alpha_root.x;
  double la = std::log(c.alpha) + 1.0;
  c.gamma_pt = la / (la - c.alpha);
  c.residual_as_printed = pt_equation_as_printed(c.alpha);
  return c;
}

Root hill_kertz_constant() {
  auto f = [](double g) {
    double k = 1.0 / g - 1.0;
    double I = integrate([&](double y) { return y <= 0 ? 1.0 / k : 1.0 / (y * (1.0 - std::log(y)) + k); },
                         0.0, 1.0, 1e-12);
    return I - 1.0;
  };
  return bisect(f, 0.6, 0.9, 1e-12, "hill-kertz");
}

double mu_fn(double x, const GammaConstants& gc) {
  double b = gc.beta.x;
  if (!(x >= 0 && x < b)) throw DomainError("mu: x must lie in [0, beta)");
  double G = gc.gamma, gp = gc.gamma_point.x;
  double hm = aux_H(gp, G) - aux_M(gp, G);
  return hm * (G * (ell(x) - x) + 1.0) / (G * (aux_M(x, G) - aux_H(x, G)));
}

double mu_fn(double x, double gamma) { return mu_fn(x, gamma_constants(gamma)); }

double Y_fn(double z, double p, const GammaConstants& gc) {
  if (!(z >= gc.gamma_point.lo && z < 1)) throw DomainError("Y: z must lie in [gamma point, 1)");
  if (!(p >= 0 && p <= 1)) throw DomainError("Y: p must lie in [0,1]");
  double G = gc.gamma;
  double K = aux_K(z, G);
  double a = G * (1.0 - K) / (1.0 - G * z);
  double b = G * (1.0 - p * K) / (G * (ell(z) * (1.0 - p) - z) + 1.0);
  return (a - b) * (1.0 - G * z);
}

double Y_fn(double z, double p, double gamma) { return Y_fn(z, p, gamma_constants(gamma)); }

double W_fn(double z, double p, const GammaConstants& gc) {
  if (!(z >= 0 && z <= gc.beta.hi)) throw DomainError("W: z must lie in [0, beta]");
  if (!(p >= 0 && p <= 1)) throw DomainError("W: p must lie in [0,1]");
  double G = gc.gamma;
  double L = ell(z);
  double a = G / (G * (L - z) + 1.0);
  double b = G * (1.0 - p * aux_M(z, G)) / (G * (L * (1.0 - p) - z) + 1.0);
  return a - b;
}

double W_fn(double z, double p, double gamma) { return W_fn(z, p, gamma_constants(gamma)); }

bool Lemma8Report::all_pass() const {
  return std::all_of(facts.begin(), facts.end(), [](const NumericFact& f) { return f.pass; });
}

Lemma8Report lemma8_integrals(double gs, double gp) {
  Lemma8Report rep;
  rep.star = gamma_constants(gs);
  rep.prime = gamma_constants(gp);
  auto& F = rep.facts;
  const auto& S = rep.star;
  const auto& P = rep.prime;

  // Brackets that justify the integration limits.
  F.push_back(strict_fact("gamma_point(star) <= 0.7894", S.gamma_point.hi, "<=", 0.7894));
  F.push_back(strict_fact("gamma_point(star) >= 0.7893", S.gamma_point.lo, ">=", 0.7893));
  F.push_back(strict_fact("gamma_point(prime) <= 0.7901", P.gamma_point.hi, "<=", 0.7901));
  F.push_back(strict_fact("gamma_point(prime) >= 0.7900", P.gamma_point.lo, ">=", 0.7900));
  F.push_back(strict_fact("beta(star) >= 0.7879", S.beta.lo, ">=", 0.7879));
  F.push_back(strict_fact("beta(star) <= 0.7880", S.beta.hi, "<=", 0.7880));
  F.push_back(strict_fact("beta(prime) >= 0.7850", P.beta.lo, ">=", 0.7850));
  F.push_back(strict_fact("beta(prime) <= 0.7851", P.beta.hi, "<=", 0.7851));

  auto hm = [](const GammaConstants& c) {
    double g = c.gamma_point.x;
    return aux_H(g, c.gamma) - aux_M(g, c.gamma);
  };
  auto thr = [](const GammaConstants& c) {
    double b = c.beta.x, G = c.gamma;
    return G * (1.0 - b) - aux_H(b, G) * (1.0 - G * b);
  };
  double hm_s = hm(S), hm_p = hm(P), th_s = thr(S), th_p = thr(P);
  F.push_back(strict_fact("H(gamma point)-M(gamma point) at star < 0.00163", hm_s, "<", 0.00163));
  F.push_back(strict_fact("H(gamma point)-M(gamma point) at prime < 0.00555", hm_p, "<", 0.00555));
  F.push_back(strict_fact("G(1-beta)-H(beta)(1-G beta) at star < 0.00068", th_s, "<", 0.00068));
  F.push_back(strict_fact("G(1-beta)-H(beta)(1-G beta) at prime < 0.00237", th_p, "<", 0.00237));

  double iy_s = integrate([&](double z) { return Y_fn(z, 0.9, S); }, 0.7894, 0.9, 1e-12);
  double iy_p = integrate([&](double z) { return Y_fn(z, 0.811, P); }, 0.7901, 0.947, 1e-12);
  double iw_s = integrate([&](double z) { return W_fn(z, 0.2, S); }, 0.67, 0.7879, 1e-12);
  double iw_p = integrate([&](double z) { return W_fn(z, 0.3763, P); }, 0.58, 0.7850, 1e-12);
  F.push_back(approx_fact("int_{0.7894}^{0.9} Y_star(z,0.9) > 0.00068", iy_s, ">", 0.00068, 0.000693, 0.02));
  F.push_back(approx_fact("int_{0.7901}^{0.947} Y_prime(z,0.811) > 0.00237", iy_p, ">", 0.00237, 0.002384, 0.02));
  F.push_back(approx_fact("int_{0.67}^{0.7879} W_star(z,0.2) > 0.00163", iw_s, ">", 0.00163, 0.00165, 0.02));
  F.push_back(approx_fact("int_{0.58}^{0.7850} W_prime(z,0.3763) > 0.00555", iw_p, ">", 0.00555, 0.0096, 0.05));

  // Monotonicity in p used to turn the integrals into bounds on p~.
  bool y_mono = true, w_mono = true;
  for (int a = 0; a <= 40; ++a) {
    for (int b = 0; b < 50; ++b) {
      double p0 = b / 50.0, p1 = (b + 1) / 50.0;
      double zy = S.gamma_point.hi + (0.999 - S.gamma_point.hi) * a / 40.0;
      if (Y_fn(zy, p1, S) > Y_fn(zy, p0, S) + 1e-15) y_mono = false;
      double zw = S.beta.lo * a / 40.0;
      if (W_fn(zw, p1, S) < W_fn(zw, p0, S) - 1e-15) w_mono = false;
    }
  }
  F.push_back(strict_fact("Y non-increasing in p (violations)", y_mono ? 0 : 1, "<=", 0));
  F.push_back(strict_fact("W non-decreasing in p (violations)", w_mono ? 0 : 1, "<=", 0));

  // Time arguments from p_i(t) > y  <=>  p~_i(1 - (1-t)/(1-y)) > y.
  auto xarg = [](double t, double y) { return 1.0 - (1.0 - t) / (1.0 - y); };
  F.push_back(strict_fact("|x(0.99, 0.9) - 0.9|", std::fabs(xarg(0.99, 0.9) - 0.9), "<", 1e-9));
  F.push_back(strict_fact("|x(0.989983, 0.811) - 0.947|", std::fabs(xarg(0.989983, 0.811) - 0.947), "<", 1e-5));
  F.push_back(strict_fact("|x(0.736, 0.2) - 0.67|", std::fabs(xarg(0.736, 0.2) - 0.67), "<", 1e-9));
  F.push_back(strict_fact("0.989983 <= 0.99", 0.989983, "<=", 0.99));
  // (1-p_i)(1-p_j)/(1-t) is non-decreasing in t: bound 1 - p_j(0.736).
  double one_minus_pj = (1 - 0.9) * (1 - 0.811) / (1 - 0.99) * (1 - 0.736) / (1 - 0.2);
  F.push_back(strict_fact("p_j(0.736) lower bound >= 0.3763", 1 - one_minus_pj, ">=", 0.3763 - 1e-12));
  F.push_back(strict_fact("x(0.736, 0.3763) <= 0.58", xarg(0.736, 0.3763), "<=", 0.58));
  return rep;
}

WrapupReport wrapup_bound(double gamma, double c) {
  check_gamma(gamma);
  WrapupReport w;
  w.gamma = gamma;
  w.c = c;
  w.constants = gamma_constants(gamma);
  const auto& gc = w.constants;
  if (!(c >= 0 && c < gc.beta.lo && c < 1.0 - std::exp(-1.0))) {
    throw DomainError("wrapup: need 0 <= c < beta and c < 1 - 1/e");
  }
  double gp = gc.gamma_point.x;
  w.K_gamma = aux_K(gp, gamma);
  w.M_c = aux_M(c, gamma);
  w.M_gamma = aux_M(gp, gamma);
  auto integrand = [&](double x) {
    double d = 1.0 - gamma * mu_fn(x, gc);
    if (!(d > 0)) throw DomainError("wrapup: 1 - gamma mu(x) <= 0 on [0, c]");
    return gamma / d;
  };
  w.integral = c > 0 ? integrate(integrand, 0.0, c, 1e-12) : 0.0;
  w.value = w.K_gamma + w.M_c - w.M_gamma + w.integral;
  w.gamma_prime = gamma / (1.0 - gamma * mu_fn(c, gc));
  return w;
}

std::vector<double> default_probe_points() {
  std::vector<double> v{0.9, 0.947, 0.67, 0.58};
  for (int k = 1; k < 20; ++k) v.push_back(k / 20.0);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

namespace {

// Exact integral of the piecewise-linear p~ over [a, b].
double integrate_ptilde(const PTilde& pt, double a, double b) {
  if (b <= a) return 0.0;
  double s = 0;
  double prev_x = a, prev_p = pt(a);
  auto it = std::upper_bound(pt.x.begin(), pt.x.end(), a);
  for (; it != pt.x.end() && *it < b; ++it) {
    double x = *it;
    double p = pt(x);
    s += 0.5 * (prev_p + p) * (x - prev_x);
    prev_x = x;
    prev_p = p;
  }
  s += 0.5 * (prev_p + pt(b)) * (b - prev_x);
  return s;
}

}  // namespace

PropertyReport property_checks(const PTilde& pt, double gamma, const std::vector<double>& probes) {
  PropertyReport rep;
  auto wa = weakly_adverse_check(pt, gamma);
  rep.G_hat = wa.G_hat;
  rep.implied = wa.is_weakly_adverse;
  GammaConstants gc = gamma_constants(gamma);
  double b = gc.beta.x, gp = gc.gamma_point.x;
  double rhsB = gamma * (1 - b) - aux_H(b, gamma) * (1 - gamma * b);
  double rhsC = aux_H(gp, gamma) - aux_M(gp, gamma);
  for (double x : probes) {
    if (x >= 0 && x < b && x < 1.0 - std::exp(-1.0)) {
      PropertyProbe pr{"A", x, integrate_ptilde(pt, 0.0, x), mu_fn(x, gc), false};
      pr.satisfied = pr.lhs <= pr.rhs;
      rep.probes.push_back(pr);
    }
    if (x > gp && x <= 1) {
      double px = pt(x);
      double xe = std::min(x, kZCap);
      PropertyProbe pr{"B", x, integrate([&](double z) { return Y_fn(z, px, gc); }, gp, xe, 1e-12), rhsB, false};
      pr.satisfied = pr.lhs < pr.rhs;
      rep.probes.push_back(pr);
    }
    if (x >= 0 && x < b) {
      double px = pt(x);
      PropertyProbe pr{"C", x, integrate([&](double z) { return W_fn(z, px, gc); }, x, b, 1e-12), rhsC, false};
      pr.satisfied = pr.lhs < pr.rhs;
      rep.probes.push_back(pr);
    }
  }
  return rep;
}

PropertyReport property_checks(const Instance& inst, std::size_t item, double gamma,
                               const std::vector<double>& probes, const SweepOptions& opt) {
  LevelTable tab = level_functions(inst, opt);
  return property_checks(p_tilde(tab, inst.group_of(item)), gamma, probes);
}

}  // namespace prophet

#pragma once

#include <string>
#include <vector>

#include "prophet/numeric.hpp"
#include "prophet/scheme.hpp"

namespace prophet {

// -(1-z) ln(1-z), continuous at z = 1.
double ell(double z);

double aux_H(double z, double gamma);
double aux_K(double z, double gamma);
double aux_M(double z, double gamma);

// Root of H = K on (1 - 1/e, 1).
Root find_gamma_point(double gamma);
// inf{z : M(z) <= H(z)}.
Root find_beta(double gamma);

struct GammaConstants {
  double gamma = 0;
  Root beta;
  Root gamma_point;
};
GammaConstants gamma_constants(double gamma);

struct PTConstants {
  double alpha = 0;
  double gamma_pt = 0;
  Root alpha_root;
  double residual_as_printed = 0;  // value of the 1/alpha variant of the equation at alpha
};
// alpha solves int_alpha^1 (ln a + 1) / ((ln a + 1)(x - x ln x) - a) dx + 1 / ln a = 0.
double pt_equation(double alpha);
double pt_equation_as_printed(double alpha);
PTConstants compute_pt_constants();

// Gamma solving int_0^1 dy / (y (1 - ln y) + 1/Gamma - 1) = 1.
Root hill_kertz_constant();

double mu_fn(double x, double gamma);
double mu_fn(double x, const GammaConstants& gc);
double Y_fn(double z, double p, double gamma);
double Y_fn(double z, double p, const GammaConstants& gc);
double W_fn(double z, double p, double gamma);
double W_fn(double z, double p, const GammaConstants& gc);

struct NumericFact {
  std::string name;
  double value = 0;
  double bound = 0;
  std::string relation;  // "<", ">", "<=", ">="
  double reference = 0;  // printed approximate value, 0 if none
  double rel_error = 0;  // |value - reference| / reference
  double rel_tol = 0;
  bool pass = false;
};

struct Lemma8Report {
  GammaConstants star, prime;
  std::vector<NumericFact> facts;
  bool all_pass() const;
};
Lemma8Report lemma8_integrals(double gamma_star = 0.7258, double gamma_prime = 0.7276);

struct WrapupReport {
  double gamma = 0, c = 0;
  double K_gamma = 0, M_c = 0, M_gamma = 0, integral = 0;
  double value = 0;
  double gamma_prime = 0;  // gamma / (1 - gamma mu(c))
  GammaConstants constants;
};
WrapupReport wrapup_bound(double gamma, double c);

struct PropertyProbe {
  std::string property;  // "A", "B", "C"
  double x = 0;
  double lhs = 0, rhs = 0;
  bool satisfied = false;
};
struct PropertyReport {
  double G_hat = 0;
  bool implied = false;  // item is weakly adverse, so the properties must hold
  std::vector<PropertyProbe> probes;
};
std::vector<double> default_probe_points();
PropertyReport property_checks(const PTilde& pt, double gamma, const std::vector<double>& probes);
PropertyReport property_checks(const Instance& inst, std::size_t item, double gamma,
                               const std::vector<double>& probes, const SweepOptions& opt = {});

}  // namespace prophet

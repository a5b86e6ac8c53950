#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prophet/distributions.hpp"

namespace prophet {

enum class SchemeId { SchemeI, SchemeII };
std::string to_string(SchemeId id);

struct SchemeParams {
  double gamma = 0.7258;
  double c = 0.28;
  double epsilon = 1e-4;
  SweepOptions sweep;
  double well_defined_slack = 1e-6;  // accept integral <= 1 + slack
  double safety_margin = 1e-3;       // flag integrals within this of 1

  void validate() const;
};

// Arrival-time law of one item group, tabulated on the level-table rows.
struct ArrivalLaw {
  std::vector<double> cumulative;  // P[arrive at or before row r]
  double total_mass = 0;           // integral of the density over [0,1)
  double atom_at_one = 0;
  std::vector<double> node_t;        // base-grid times (t < 1)
  std::vector<double> node_density;  // density at node_t
  bool well_defined = true;
};

struct BuiltScheme {
  Instance inst;  // groups as used by the scheme (adverse item split off)
  SchemeParams params;
  SchemeId id = SchemeId::SchemeI;
  std::optional<std::size_t> adverse_item;
  std::optional<std::size_t> adverse_group;
  LevelTable table;
  std::vector<double> g;  // g on rows (algebraic for Scheme I, integral otherwise)
  std::vector<ArrivalLaw> laws;                // per group
  std::vector<double> acceptance_probability;  // per item of the group
  std::vector<double> scheme_one_integrals;    // per group of the original instance
  std::vector<std::string> diagnostics;

  double integral(std::size_t item) const { return laws[inst.group_of(item)].total_mass; }
  bool well_defined() const;
};

double h_fn(double x, double c, double epsilon);

// g(t) = Gamma * (sum_i (1 - q_i) p_i - t) + 1 on the table rows.
std::vector<double> g_algebraic(const Instance& inst, const LevelTable& tab, double gamma);
// g(t) = 1 - Gamma * sum_i int_0^t p_i dq_i on the table rows.
std::vector<double> g_integral(const Instance& inst, const LevelTable& tab, double gamma);

// Arrival laws for the given g (Stieltjes trapezoid in q).
std::vector<ArrivalLaw> arrival_laws(const Instance& inst, const LevelTable& tab,
                                     const std::vector<double>& g, double gamma,
                                     double slack = 1e-6);

std::vector<ArrivalLaw> arrival_density_pt(const Instance& inst, const LevelTable& tab, double gamma);
std::vector<ArrivalLaw> arrival_density_general(const Instance& inst, const LevelTable& tab, double gamma);

// Per-item thresholds of the second scheme for the group holding a single adverse item.
LevelTable scheme_two_schedule(const Instance& inst, std::size_t adverse_group, const SchemeParams& params);

BuiltScheme build_scheme_one(const Instance& inst, const SchemeParams& params);
BuiltScheme build_scheme_two(const Instance& inst, std::size_t adverse_item, const SchemeParams& params);
BuiltScheme build_two_scheme(const Instance& inst, const SchemeParams& params);

// p~(x) = p(q^{-1}(x)) for one group, as a monotone table in x.
struct PTilde {
  std::vector<double> x, p;
  double operator()(double xv) const;
};
PTilde p_tilde(const LevelTable& tab, std::size_t group);

// int_0^1 Gamma / rho(x) * exp(-Gamma int_0^x p/rho) dx by trapezoid on the nodes.
double integral_functional(const std::vector<double>& x, const std::vector<double>& p,
                           const std::vector<double>& rho, double gamma);

struct WeakAdverseReport {
  double G_hat = 0;
  bool is_weakly_adverse = false;
};
WeakAdverseReport weakly_adverse_check(const PTilde& pt, double gamma, std::size_t uniform_nodes = 8192);
WeakAdverseReport weakly_adverse_check(const Instance& inst, std::size_t item, double gamma,
                                       const SweepOptions& opt = {});

}  // namespace prophet

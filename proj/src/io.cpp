#include "prophet/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "prophet/errors.hpp"

#ifndef PROPHET_BUILD_ID
#define PROPHET_BUILD_ID "unknown"
#endif

namespace prophet {

std::string build_id() { return PROPHET_BUILD_ID; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text << '\n';
}

namespace {

std::vector<std::pair<double, double>> pairs(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array of pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InvalidInput(std::string(what) + " entries must be [a, b]");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

ValueDistribution dist_from_json(const json& item) {
  std::string kind = item.at("kind").get<std::string>();
  const json& p = item.contains("params") ? item.at("params") : item;
  if (kind == "uniform") return ValueDistribution::uniform(p.at("lo").get<double>(), p.at("hi").get<double>());
  if (kind == "finite") return ValueDistribution::finite(pairs(p.at("points"), "points"));
  if (kind == "piecewise_linear") return ValueDistribution::piecewise_linear(pairs(p.at("knots"), "knots"));
  if (kind == "power") {
    return ValueDistribution::power(p.value("lo", 0.0), p.value("hi", 1.0), p.at("exponent").get<double>());
  }
  throw InvalidInput("unknown distribution kind: " + kind);
}

json dist_to_json(const ValueDistribution& d) {
  json j;
  switch (d.kind()) {
    case DistKind::Uniform:
      j = {{"kind", "uniform"}, {"params", {{"lo", d.lower()}, {"hi", d.upper()}}}};
      break;
    case DistKind::FiniteSupport:
      j = {{"kind", "finite"}, {"params", {{"points", d.points()}}}};
      break;
    case DistKind::PiecewiseLinearCdf:
      j = {{"kind", "piecewise_linear"}, {"params", {{"knots", d.points()}}}};
      break;
    case DistKind::Power:
      j = {{"kind", "power"}, {"params", {{"lo", d.lower()}, {"hi", d.upper()}, {"exponent", d.exponent()}}}};
      break;
  }
  return j;
}

}  // namespace

Instance instance_from_json(const json& j) {
  try {
    std::vector<ItemGroup> groups;
    for (const auto& item : j.at("items")) {
      std::size_t count = item.value("count", std::size_t(1));
      if (count == 0) throw InvalidInput("item count must be positive");
      groups.push_back({dist_from_json(item), count});
    }
    double w = j.value("smoothing_width", -1.0);
    return Instance(std::move(groups), w);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance: ") + e.what());
  }
}

json instance_to_json(const Instance& inst) {
  json items = json::array();
  for (std::size_t g = 0; g < inst.num_groups(); ++g) {
    json it = dist_to_json(inst.group(g).dist);
    it["count"] = inst.group(g).count;
    items.push_back(it);
  }
  return {{"items", items}};
}

FiniteInstance finite_instance_from_json(const json& j) {
  try {
    FiniteInstance fi;
    fi.support = j.at("support").get<std::vector<double>>();
    fi.probs = j.at("items").get<std::vector<std::vector<double>>>();
    fi.validate();
    return fi;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("finite instance: ") + e.what());
  }
}

HardnessInstance hardness_from_json(const json& j, HardnessInstance base) {
  try {
    if (j.contains("N")) base.N = j.at("N").get<std::size_t>();
    if (j.contains("a")) base.a = j.at("a").get<double>();
    if (j.contains("b")) base.b = j.at("b").get<std::vector<double>>();
    if (j.contains("p")) base.p = j.at("p").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("hardness config: ") + e.what());
  }
  base.validate();
  return base;
}

json to_json(const Root& r) { return {{"value", r.x}, {"bracket", {r.lo, r.hi}}, {"iterations", r.iterations}}; }

json to_json(const GammaConstants& gc) {
  return {{"gamma", gc.gamma}, {"beta", to_json(gc.beta)}, {"gamma_point", to_json(gc.gamma_point)}};
}

json to_json(const PTConstants& pt) {
  return {{"alpha", to_json(pt.alpha_root)},
          {"gamma_pt", pt.gamma_pt},
          {"residual_with_reciprocal_alpha", pt.residual_as_printed}};
}

json to_json(const NumericFact& f) {
  json j = {{"name", f.name}, {"value", f.value}, {"relation", f.relation}, {"pass", f.pass}};
  if (f.relation != "approx") j["bound"] = f.bound;
  if (f.reference != 0) {
    j["reference"] = f.reference;
    j["rel_error"] = f.rel_error;
    j["rel_tol"] = f.rel_tol;
  }
  return j;
}

json to_json(const Lemma8Report& r) {
  json facts = json::array();
  for (const auto& f : r.facts) facts.push_back(to_json(f));
  return {{"star", to_json(r.star)}, {"prime", to_json(r.prime)}, {"facts", facts}, {"pass", r.all_pass()}};
}

json to_json(const WrapupReport& r) {
  return {{"gamma", r.gamma},     {"c", r.c},
          {"K_gamma", r.K_gamma}, {"M_c", r.M_c},
          {"M_gamma", r.M_gamma}, {"integral", r.integral},
          {"value", r.value},     {"below_one", r.value < 1.0},
          {"gamma_prime", r.gamma_prime}, {"constants", to_json(r.constants)}};
}

json to_json(const PropertyReport& r) {
  json probes = json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"property", p.property}, {"x", p.x}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"satisfied", p.satisfied}});
  }
  return {{"G_hat", r.G_hat}, {"weakly_adverse", r.implied}, {"probes", probes}};
}

json to_json(const BuiltScheme& s) {
  json items = json::array();
  for (std::size_t i = 0; i < s.inst.num_items(); ++i) {
    std::size_t g = s.inst.group_of(i);
    items.push_back({{"item", i},
                     {"group", g},
                     {"integral", s.laws[g].total_mass},
                     {"atom_at_one", s.laws[g].atom_at_one},
                     {"well_defined", s.laws[g].well_defined},
                     {"acceptance_probability", s.acceptance_probability[g]}});
  }
  json j = {{"scheme_id", to_string(s.id)},
            {"gamma", s.params.gamma},
            {"well_defined", s.well_defined()},
            {"items", items},
            {"scheme_one_integrals", s.scheme_one_integrals},
            {"grid",
             {{"rows", s.table.rows()},
              {"base_nodes", s.params.sweep.grid.resolution()},
              {"tol_q", s.params.sweep.tol_q},
              {"tol_value", s.params.sweep.tol_value}}},
            {"diagnostics", s.diagnostics}};
  j["adverse_item"] = s.adverse_item ? json(*s.adverse_item) : json(nullptr);
  if (s.id == SchemeId::SchemeII) {
    j["c"] = s.params.c;
    j["epsilon"] = s.params.epsilon;
  }
  return j;
}

json to_json(const SimulationReport& r) {
  json probes = json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"x", p.x},
                      {"p_alg", p.p_alg},
                      {"ci_alg", p.ci_alg},
                      {"p_max", p.p_max},
                      {"ci_max", p.ci_max},
                      {"ratio", p.ratio ? json(*p.ratio) : json(nullptr)},
                      {"diff", p.diff},
                      {"ci_diff", p.ci_diff}});
  }
  return {{"scheme_id", to_string(r.scheme_id)},
          {"gamma", r.gamma},
          {"trials", r.trials},
          {"seed", r.seed},
          {"workers", r.workers},
          {"probes", probes},
          {"e_alg", r.e_alg},
          {"ci_alg", r.ci_alg},
          {"e_max", r.e_max},
          {"ci_max", r.ci_max},
          {"e_gap", r.e_gap},
          {"ci_gap", r.ci_gap},
          {"accept_prob", r.accept_prob},
          {"accept_ci", r.accept_ci},
          {"no_accept", r.no_accept}};
}

json to_json(const PolicyEvaluation& e) {
  return {{"opt", e.opt}, {"max_expectation", e.max_exp}, {"ratio", e.ratio}, {"orderings", e.orderings}};
}

json to_json(const Enumeration& en, const LpSolution& sol, const MixtureReport& mix) {
  json support = json::array();
  for (const auto& c : mix.support) {
    support.push_back({{"block", c.block}, {"order", c.order}, {"thresholds", c.thresholds}, {"weight", c.weight}});
  }
  return {{"setting", to_string(en.setting)},
          {"algorithms_enumerated", en.enumerated},
          {"lp_columns", en.columns()},
          {"alpha", sol.alpha.get_d()},
          {"alpha_exact", sol.alpha.get_str()},
          {"mu", sol.mu.get_d()},
          {"mu_exact", sol.mu.get_str()},
          {"duality_gap", sol.duality_gap()},
          {"mixture", support},
          {"point_mass", mix.point_mass},
          {"exceedance", mix.exceed},
          {"residuals", mix.residual},
          {"min_residual", mix.min_residual},
          {"expected_alg", mix.expected_alg},
          {"expected_max", mix.expected_max},
          {"note", "threshold index k means never accept; optimal mixtures need not be unique"},
          {"pass", mix.pass}};
}

std::string simulation_csv(const SimulationReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "x,p_alg,ci_alg,p_max,ci_max,diff,ci_diff\n";
  for (const auto& p : r.probes) {
    os << p.x << ',' << p.p_alg << ',' << p.ci_alg << ',' << p.p_max << ',' << p.ci_max << ',' << p.diff << ','
       << p.ci_diff << '\n';
  }
  return os.str();
}

json envelope(const std::string& command, const json& config, const json& result) {
  return {{"schema_version", kSchemaVersion},
          {"provenance", {{"command", command}, {"build_id", build_id()}, {"config", config}}},
          {"result", result}};
}

}  // namespace prophet

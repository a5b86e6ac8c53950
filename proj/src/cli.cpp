#include "prophet/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "prophet/errors.hpp"
#include "prophet/io.hpp"

namespace prophet {

namespace {

unsigned default_workers() {
  if (const char* env = std::getenv("PROPHET_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return unsigned(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

const CLI::Validator open_unit([](std::string& s) -> std::string {
  double v = 0;
  try {
    std::size_t pos = 0;
    v = std::stod(s, &pos);
    if (pos != s.size()) return "not a number: " + s;
  } catch (...) {
    return "not a number: " + s;
  }
  if (!(v > 0.0 && v < 1.0)) return "must lie strictly between 0 and 1, got " + s;
  return {};
}, "in (0,1)");

struct Options {
  std::string instance, config, out = "-", csv;
  double gamma = 0.7258;
  double c = 0.28;
  double epsilon = 1e-4;
  double gamma_prime = 0.7276;
  std::size_t grid = 4096;
  double trials = 1e6;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::size_t item = 0;
  std::size_t N = 0;
  std::string setting = "order-selection";
  std::size_t cap = 100000;
};

SchemeParams scheme_params(const Options& o) {
  SchemeParams p;
  p.gamma = o.gamma;
  p.c = o.c;
  p.epsilon = o.epsilon;
  p.sweep.grid = TimeGrid::make(o.grid);
  p.validate();
  return p;
}

void emit(const Options& o, const std::string& command, const json& config, const json& result) {
  write_output(o.out, envelope(command, config, result).dump(2));
}

int cmd_scheme_build(const Options& o) {
  json j = read_json_file(o.instance);
  Instance inst = instance_from_json(j);
  BuiltScheme s = build_two_scheme(inst, scheme_params(o));
  json cfg = {{"instance", o.instance}, {"instance_echo", j}, {"gamma", o.gamma}, {"c", o.c},
              {"epsilon", o.epsilon}, {"grid", o.grid}};
  emit(o, "scheme build", cfg, to_json(s));
  return kExitOk;
}

int cmd_scheme_check(const Options& o) {
  json j = read_json_file(o.instance);
  Instance inst = instance_from_json(j);
  if (o.item >= inst.num_items()) throw InvalidInput("item index out of range");
  SweepOptions sw;
  sw.grid = TimeGrid::make(o.grid);
  auto rep = property_checks(inst, o.item, o.gamma, default_probe_points(), sw);
  json cfg = {{"instance", o.instance}, {"instance_echo", j}, {"item", o.item}, {"gamma", o.gamma}, {"grid", o.grid}};
  emit(o, "scheme check-adverse", cfg, to_json(rep));
  if (rep.implied) {
    for (const auto& p : rep.probes) {
      if (!p.satisfied) return kExitFailure;
    }
  }
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  json j = read_json_file(o.instance);
  Instance inst = instance_from_json(j);
  BuiltScheme s = build_two_scheme(inst, scheme_params(o));
  if (!(o.trials >= 1) || o.trials != std::floor(o.trials)) throw InvalidInput("trials must be a positive integer");
  SimulationConfig sc;
  sc.trials = std::uint64_t(o.trials);
  sc.seed = o.seed;
  sc.workers = o.workers;
  auto rep = estimate_asd(s, sc);
  json cfg = {{"instance", o.instance}, {"instance_echo", j}, {"gamma", o.gamma}, {"trials", sc.trials},
              {"seed", sc.seed},        {"workers", sc.workers}, {"chunk", sc.chunk}, {"grid", o.grid}};
  json res = to_json(rep);
  res["scheme"] = to_json(s);
  emit(o, "simulate", cfg, res);
  if (!o.csv.empty()) write_output(o.csv, simulation_csv(rep));
  return kExitOk;
}

int cmd_constants(const Options& o) {
  auto gc = gamma_constants(o.gamma);
  auto pt = compute_pt_constants();
  auto hk = hill_kertz_constant();
  json res = {{"gamma_constants", to_json(gc)}, {"pt", to_json(pt)}, {"hill_kertz", to_json(hk)}};
  emit(o, "analysis constants", {{"gamma", o.gamma}}, res);
  return kExitOk;
}

int cmd_lemma8(const Options& o) {
  auto rep = lemma8_integrals(o.gamma, o.gamma_prime);
  emit(o, "analysis verify-lemma8", {{"gamma", o.gamma}, {"gamma_prime", o.gamma_prime}}, to_json(rep));
  return rep.all_pass() ? kExitOk : kExitFailure;
}

int cmd_wrapup(const Options& o) {
  auto rep = wrapup_bound(o.gamma, o.c);
  emit(o, "analysis wrapup", {{"gamma", o.gamma}, {"c", o.c}}, to_json(rep));
  return kExitOk;
}

int cmd_secretary(const Options& o) {
  HardnessInstance hi;
  json cfg_echo = nullptr;
  if (!o.config.empty()) {
    cfg_echo = read_json_file(o.config);
    hi = hardness_from_json(cfg_echo);
  }
  if (o.N) hi.N = o.N;
  hi.validate();
  auto ev = optimal_policy_value(hi);
  std::vector<std::size_t> Ns;
  for (std::size_t n = 100; n < hi.N; n *= 10) Ns.push_back(n);
  Ns.push_back(hi.N);
  json table = json::array();
  for (const auto& row : convergence_table(hi, Ns)) table.push_back({{"N", row.N}, {"ratio", row.ratio}});
  json res = to_json(ev);
  res["convergence"] = table;
  json cfg = {{"config", o.config.empty() ? json(nullptr) : json(o.config)},
              {"config_echo", cfg_echo},
              {"N", hi.N},
              {"a", hi.a},
              {"b", hi.b},
              {"p", hi.p}};
  emit(o, "secretary-hardness", cfg, res);
  return kExitOk;
}

int cmd_lp(const Options& o) {
  json j = read_json_file(o.instance);
  FiniteInstance fi = finite_instance_from_json(j);
  EnumerationOptions eo;
  eo.setting = parse_setting(o.setting);
  eo.cap = o.cap;
  auto en = enumerate_algorithms(fi, eo);
  auto sol = solve_lp_pair(en);
  auto mix = extract_asd_mixture(fi, en, sol);
  json cfg = {{"instance", o.instance}, {"instance_echo", j}, {"setting", o.setting}, {"cap", o.cap}};
  emit(o, "lp-asd", cfg, to_json(en, sol, mix));
  return sol.duality_gap() <= 1e-9 && mix.pass ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Order-selection prophet inequality toolkit"};
  app.require_subcommand(1);
  Options o;
  o.workers = default_workers();

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file ('-' for stdout)"); };
  auto add_gamma = [&](CLI::App* c) {
    c->add_option("--gamma", o.gamma, "competitive ratio target")->check(open_unit)->capture_default_str();
  };
  auto add_instance = [&](CLI::App* c) {
    c->add_option("--instance", o.instance, "instance JSON")->required()->check(CLI::ExistingFile);
  };
  auto add_scheme = [&](CLI::App* c) {
    c->add_option("--c", o.c, "breakpoint of h")->check(open_unit)->capture_default_str();
    c->add_option("--epsilon", o.epsilon, "slope parameter of h")->capture_default_str();
    c->add_option("--grid", o.grid, "uniform time-grid cells")->check(CLI::Range(std::size_t(16), std::size_t(1) << 20));
  };

  auto* scheme = app.add_subcommand("scheme", "build or inspect threshold schemes");
  scheme->require_subcommand(1);
  auto* build = scheme->add_subcommand("build", "build the two-scheme algorithm for an instance");
  add_instance(build);
  add_gamma(build);
  add_scheme(build);
  add_out(build);
  auto* check = scheme->add_subcommand("check-adverse", "weak-adverseness test and structural properties");
  add_instance(check);
  add_gamma(check);
  check->add_option("--item", o.item, "item index");
  check->add_option("--grid", o.grid, "uniform time-grid cells");
  add_out(check);

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo check of stochastic dominance");
  add_instance(sim);
  add_gamma(sim);
  add_scheme(sim);
  sim->add_option("--trials", o.trials, "number of games")->capture_default_str();
  sim->add_option("--seed", o.seed, "master seed")->capture_default_str();
  sim->add_option("--workers", o.workers, "worker threads (default from PROPHET_WORKERS)")->check(CLI::PositiveNumber);
  sim->add_option("--csv", o.csv, "also write the dominance curve as CSV");
  add_out(sim);

  auto* analysis = app.add_subcommand("analysis", "analytic constants and bounds");
  analysis->require_subcommand(1);
  auto* consts = analysis->add_subcommand("constants", "gamma-dependent and fixed constants");
  add_gamma(consts);
  add_out(consts);
  auto* lemma = analysis->add_subcommand("verify-lemma8", "numeric facts behind the adverse-item bound");
  add_gamma(lemma);
  lemma->add_option("--gamma-prime", o.gamma_prime, "second ratio")->check(open_unit)->capture_default_str();
  add_out(lemma);
  auto* wrap = analysis->add_subcommand("wrapup", "final integral bound");
  add_gamma(wrap);
  wrap->add_option("--c", o.c, "breakpoint of h")->check(open_unit)->capture_default_str();
  add_out(wrap);

  auto* sec = app.add_subcommand("secretary-hardness", "hardness instance for prophet secretary");
  sec->add_option("--config", o.config, "JSON with N, a, b, p")->check(CLI::ExistingFile);
  sec->add_option("--N", o.N, "number of IID items")->check(CLI::PositiveNumber);
  add_out(sec);

  auto* lp = app.add_subcommand("lp-asd", "LP duality on a finite-support instance");
  add_instance(lp);
  lp->add_option("--setting", o.setting, "order-selection or prophet-secretary")
      ->check(CLI::IsMember({"order-selection", "prophet-secretary"}));
  lp->add_option("--cap", o.cap, "enumeration cap")->capture_default_str();
  add_out(lp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_scheme_build(o);
    if (check->parsed()) return cmd_scheme_check(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (consts->parsed()) return cmd_constants(o);
    if (lemma->parsed()) return cmd_lemma8(o);
    if (wrap->parsed()) return cmd_wrapup(o);
    if (sec->parsed()) return cmd_secretary(o);
    if (lp->parsed()) return cmd_lp(o);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace prophet

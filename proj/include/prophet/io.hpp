#pragma once

#include <json.hpp>
#include <string>

#include "prophet/analysis.hpp"
#include "prophet/lp_asd.hpp"
#include "prophet/scheme.hpp"
#include "prophet/secretary.hpp"
#include "prophet/simulator.hpp"

namespace prophet {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

std::string build_id();

json read_json_file(const std::string& path);
void write_output(const std::string& path, const std::string& text);  // "-" means stdout

// {"smoothing_width": w?, "items": [{"kind", "params", "count"?}]}
Instance instance_from_json(const json& j);
json instance_to_json(const Instance& inst);

// {"support": [...], "items": [[p_1..p_k], ...]}
FiniteInstance finite_instance_from_json(const json& j);

// {"N", "a", "b", "p"}; missing fields keep their defaults.
HardnessInstance hardness_from_json(const json& j, HardnessInstance base = {});

json to_json(const Root& r);
json to_json(const GammaConstants& gc);
json to_json(const PTConstants& pt);
json to_json(const NumericFact& f);
json to_json(const Lemma8Report& r);
json to_json(const WrapupReport& r);
json to_json(const PropertyReport& r);
json to_json(const BuiltScheme& s);
json to_json(const SimulationReport& r);
json to_json(const PolicyEvaluation& e);
json to_json(const Enumeration& en, const LpSolution& sol, const MixtureReport& mix);

std::string simulation_csv(const SimulationReport& r);

// Wraps a payload with schema version and provenance.
json envelope(const std::string& command, const json& config, const json& result);

}  // namespace prophet

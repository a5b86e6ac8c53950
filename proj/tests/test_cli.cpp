#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "prophet/cli.hpp"
#include "prophet/io.hpp"

using namespace prophet;
namespace fs = std::filesystem;

namespace {

const std::string kInstances = PROPHET_INSTANCE_DIR;

struct Run {
  int code;
  std::string err;
  json out;
};

Run run(std::vector<std::string> args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() / ("prophet_cli_test_" + std::to_string(counter++) + ".json");
  fs::remove(out);
  args.insert(args.begin(), "prophet");
  args.push_back("--out");
  args.push_back(out.string());
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  Run r{run_cli(int(argv.size()), argv.data(), err), err.str(), nullptr};
  if (fs::exists(out)) {
    r.out = read_json_file(out.string());
    fs::remove(out);
  }
  return r;
}

void check_envelope(const json& j, const std::string& command) {
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("provenance").at("command") == command);
  CHECK(j.at("provenance").contains("build_id"));
  CHECK(j.at("provenance").contains("config"));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors") {
    CHECK(run({"analysis", "constants", "--gamma", "1.5"}).code == kExitUsage);
    CHECK(run({"analysis", "wrapup", "--gamma", "abc"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"scheme", "build", "--instance", "/nonexistent.json"}).code == kExitUsage);
    CHECK(run({"lp-asd", "--instance", kInstances + "/lp_coins.json", "--setting", "free"}).code == kExitUsage);
  }

  TEST_CASE("analysis subcommands") {
    auto c = run({"analysis", "constants", "--gamma", "0.7258"});
    REQUIRE(c.code == kExitOk);
    check_envelope(c.out, "analysis constants");
    CHECK(c.out["result"]["pt"]["gamma_pt"].get<double>() == doctest::Approx(0.7251).epsilon(2e-4));
    auto l = run({"analysis", "verify-lemma8"});
    CHECK(l.code == kExitOk);
    CHECK(l.out["result"]["pass"] == true);
    auto w = run({"analysis", "wrapup", "--gamma", "0.7258", "--c", "0.28"});
    CHECK(w.code == kExitOk);
    CHECK(w.out["result"]["below_one"] == true);
  }

  TEST_CASE("scheme build and adverseness") {
    auto b = run({"scheme", "build", "--instance", kInstances + "/pt_hard_1000.json", "--gamma", "0.7258"});
    REQUIRE(b.code == kExitOk);
    check_envelope(b.out, "scheme build");
    CHECK(b.out["result"]["scheme_id"] == "SchemeII");
    CHECK(b.out["result"]["adverse_item"] == 0);
    CHECK(b.out["provenance"]["config"]["instance_echo"]["items"].size() == 2);
    auto u = run({"scheme", "build", "--instance", kInstances + "/two_uniform.json"});
    CHECK(u.out["result"]["scheme_id"] == "SchemeI");
    CHECK(u.out["result"]["adverse_item"].is_null());
    auto m = run({"scheme", "build", "--instance", kInstances + "/mixed.json"});
    CHECK(m.code == kExitOk);
    auto a = run({"scheme", "check-adverse", "--instance", kInstances + "/pt_hard_1000.json", "--item", "0"});
    CHECK(a.code == kExitOk);
    CHECK(a.out["result"]["weakly_adverse"] == true);
  }

  TEST_CASE("simulate") {
    fs::path csv = fs::temp_directory_path() / "prophet_cli_test_curve.csv";
    auto s = run({"simulate", "--instance", kInstances + "/two_uniform.json", "--trials", "2e4", "--seed", "5",
                  "--workers", "2", "--csv", csv.string()});
    REQUIRE(s.code == kExitOk);
    check_envelope(s.out, "simulate");
    CHECK(s.out["provenance"]["config"]["seed"] == 5);
    CHECK(s.out["result"]["trials"] == 20000);
    CHECK(s.out["result"]["probes"].size() == 20);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("x,p_alg", 0) == 0);
    fs::remove(csv);
    auto again = run({"simulate", "--instance", kInstances + "/two_uniform.json", "--trials", "2e4", "--seed", "5",
                      "--workers", "2"});
    CHECK(again.out["result"]["e_alg"] == s.out["result"]["e_alg"]);
    CHECK(run({"simulate", "--instance", kInstances + "/two_uniform.json", "--trials", "0.5"}).code == kExitUsage);
  }

  TEST_CASE("secretary hardness") {
    auto s = run({"secretary-hardness", "--N", "1000"});
    REQUIRE(s.code == kExitOk);
    check_envelope(s.out, "secretary-hardness");
    CHECK(s.out["result"].contains("ratio"));
    CHECK(s.out["result"]["convergence"].size() == 2);
    auto f = run({"secretary-hardness", "--config", kInstances + "/hardness.json", "--N", "10000"});
    CHECK(std::abs(f.out["result"]["ratio"].get<double>() - 0.7254) <= 5e-4);
    CHECK(f.out["provenance"]["config"]["N"] == 10000);
  }

  TEST_CASE("lp-asd") {
    auto l = run({"lp-asd", "--instance", kInstances + "/lp_triple.json"});
    REQUIRE(l.code == kExitOk);
    check_envelope(l.out, "lp-asd");
    CHECK(l.out["result"]["alpha_exact"] == l.out["result"]["mu_exact"]);
    CHECK(l.out["result"]["min_residual"].get<double>() >= -1e-9);
    auto p = run({"lp-asd", "--instance", kInstances + "/lp_triple.json", "--setting", "prophet-secretary"});
    CHECK(p.code == kExitOk);
    CHECK(p.out["result"]["alpha"].get<double>() <= l.out["result"]["alpha"].get<double>());
  }
}

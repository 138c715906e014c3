#include "doctest.h"
#include "run.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using nlohmann::json;
using testing::quote;

namespace {

const fs::path kData = JLAB_DATA_DIR;
const std::string kCli = JLAB_CLI_PATH;

fs::path fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "jlab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

testing::RunResult jlab(const fs::path& out, const std::string& args) {
  return testing::run(quote(kCli) + " --out " + quote(out) + " " + args);
}

json strip_timing(json j) {
  j.erase("timing");
  return j;
}

const std::string kSmallProps =
    "props --instances 20 --hyperplanes 200 --convexity-instances 20 --schur-instances 20 "
    "--gluing-pairs 1 --gluing-res 16 --gluing-radii 2 3 --lelong-instances 3";

}  // namespace

TEST_CASE("check exit codes") {
  const auto out = fresh("check");
  CHECK(jlab(out, "check --scenario " + quote(kData / "f1_j_positive.json")).code == 0);
  const auto fails = jlab(out, "check --scenario " + quote(kData / "f1_fails_at_E.json"));
  CHECK(fails.code == 3);
  CHECK(fails.output.find("witness") != std::string::npos);
  const auto doc = json::parse(testing::slurp(out / "check.json"));
  CHECK(doc.at("command") == "check");
  CHECK(doc.contains("input_digest"));
  CHECK(jlab(out, "check --scenario " + quote(kData / "f1_beta_equals_alpha.json")).code == 0);
  CHECK(jlab(out, "check " + quote(kData / "f1_fan.json") + " --alpha 1,1 --beta 1,1").code == 0);
}

TEST_CASE("input errors exit with code 1") {
  const auto out = fresh("errors");
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << "{\"geometry\": \"f1.json\",, }";
  CHECK(jlab(out, "check --scenario " + quote(bad)).code == 1);
  CHECK(jlab(out, "check --scenario " + quote(out / "missing.json")).code == 1);
  CHECK(jlab(out, "no-such-command").code == 1);
  CHECK(jlab(out, "solve-calabi --t 1 --m-beta 0").code == 1);
}

TEST_CASE("solve-calabi classifications") {
  const auto out = fresh("calabi");
  CHECK(jlab(out, "solve-calabi " + quote(kData / "calabi_f1_j_positive.json") + " --rho-step 0.02").code == 0);
  CHECK(fs::exists(out / "profile.csv"));
  CHECK(jlab(out, "solve-calabi " + quote(kData / "calabi_f1_fails.json")).code == 3);
  CHECK(jlab(out, "solve-calabi --t 1 --m-beta 1/4").code == 2);
}

TEST_CASE("props and sweep payloads are deterministic") {
  const auto a = fresh("det_a"), b = fresh("det_b");
  REQUIRE(jlab(a, "--seed 11 " + kSmallProps).code == 0);
  REQUIRE(jlab(b, "--seed 11 " + kSmallProps).code == 0);
  CHECK(strip_timing(json::parse(testing::slurp(a / "props.json"))) ==
        strip_timing(json::parse(testing::slurp(b / "props.json"))));
  REQUIRE(jlab(a, "sweep").code == 0);
  REQUIRE(jlab(b, "sweep").code == 0);
  CHECK(testing::slurp(a / "sweep.csv") == testing::slurp(b / "sweep.csv"));
  CHECK(strip_timing(json::parse(testing::slurp(a / "sweep_summary.json"))) ==
        strip_timing(json::parse(testing::slurp(b / "sweep_summary.json"))));
}

TEST_CASE("replay of a serialized violation") {
  const auto out = fresh("replay");
  const fs::path record = out / "v.json";
  // a schur-gap instance with an impossible tolerance
  std::ofstream(record) << json{{"suite", "schur-gap"},
                                {"seed", 42},
                                {"params", {{"n", 3}}},
                                {"statistic", 0.0},
                                {"tolerance", -1e6},
                                {"instance", json::object()}}
                               .dump();
  const auto r = jlab(out, "props --replay " + quote(record));
  CHECK(r.code != 0);
}

TEST_CASE("solve-torus writes a field") {
  const auto out = fresh("torus");
  const auto r = jlab(out, "solve-torus " + quote(kData / "torus_small.json") + " --field-format csv");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "phi.json"));
  CHECK(fs::exists(out / "residual_history.csv"));
  const auto doc = json::parse(testing::slurp(out / "solve_torus.json"));
  CHECK(doc.at("report").at("verdict") == "solved");
}

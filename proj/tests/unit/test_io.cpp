#include "doctest.h"

#include "jlab/errors.hpp"
#include "jlab/io.hpp"
#include "jlab/sampling.hpp"

#include <filesystem>
#include <fstream>

using namespace jlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "jlab_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

const fs::path kData = JLAB_DATA_DIR;

}  // namespace

TEST_CASE("rationals and classes") {
  CHECK(io::rational_from_json(io::json::parse("2.9")) == Rational(29, 10));
  CHECK(io::rational_from_json(io::json("29/10")) == Rational(29, 10));
  CHECK(io::rational_from_json(io::json(-4)) == -4);
  CHECK_THROWS_AS(io::rational_from_json(io::json::array()), ValidationError);
  const ClassVector c{Rational(3), Rational(-29, 10)};
  CHECK(io::class_from_json(io::class_to_json(c)) == c);
  CHECK(io::parse_class_text("3, -29/10") == c);
  CHECK(io::parse_class_text("3,-2.9") == c);
}

TEST_CASE("matrix round trip") {
  Rng rng(1);
  const auto m = random_positive_definite(rng, 3).matrix();
  const Matrix back = io::matrix_from_json(io::matrix_to_json(m));
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[[1,0],[0,0],[1,0]]")), ValidationError);
}

TEST_CASE("geometry and fan documents") {
  const auto g = io::geometry_from_json(io::read_json_file(kData / "f1.json"));
  CHECK(g.basis() == std::vector<std::string>{"H", "E"});
  CHECK(g.curves().size() == 3);
  CHECK(g.canonical().has_value());
  const auto again = io::geometry_from_json(io::geometry_to_json(g));
  CHECK(again.top() == g.top());
  CHECK(again.subvarieties().size() == g.subvarieties().size());

  const auto fan = io::fan_from_json(io::read_json_file(kData / "f1_fan.json"));
  CHECK(fan.size() == 4);
  CHECK(io::fan_from_json(io::fan_to_json(fan)).rays() == fan.rays());
  CHECK_THROWS_AS(io::fan_from_json(io::json::parse(R"({"rays": [[1,0],[1,2],[-1,-1]]})")), ValidationError);
  CHECK_THROWS_AS(io::geometry_from_json(io::json::parse(R"({"n": 2, "basis": ["H"], "top": [{"index": ["X","H"], "value": 1}]})")),
                  ValidationError);
}

TEST_CASE("field files") {
  Rng rng(2);
  const PeriodicGrid g(2, std::vector<int>{8, 1, 1, 10});
  const auto f = random_trig_field(rng, g, 3, 1.0);
  for (auto format : {io::FieldFormat::kBinary, io::FieldFormat::kCsv}) {
    const auto header = io::write_field(scratch(format == io::FieldFormat::kCsv ? "f_csv" : "f_bin"), f, format);
    const auto back = io::read_scalar_field(header);
    CHECK(back.grid() == g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(back[i] - f[i]));
    CHECK(worst == 0.0);
  }
  const FormField form(g, random_positive_definite(rng, 2));
  const auto header = io::write_field(scratch("form"), form, io::FieldFormat::kBinary);
  const auto any = io::read_field(header);
  REQUIRE(std::holds_alternative<FormField>(any));
  CHECK((std::get<FormField>(any).matrix_at(3) - form.matrix_at(3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(io::read_scalar_field(header), ValidationError);

  // truncated data file
  const auto bin = io::write_field(scratch("short"), f, io::FieldFormat::kBinary);
  fs::resize_file(scratch("short.bin"), 16);
  CHECK_THROWS_AS(io::read_scalar_field(bin), ValidationError);
}

TEST_CASE("torus problem documents") {
  const auto p = io::torus_problem_from_json(io::read_json_file(kData / "torus_small.json"), kData);
  CHECK(p.grid().resolutions() == std::vector<int>{16, 1, 1, 16});
  CHECK(p.c() == doctest::Approx(0.5).epsilon(1e-6));
  const auto constant = io::torus_problem_from_json(io::read_json_file(kData / "torus_constant.json"), kData);
  CHECK(constant.c() == doctest::Approx(1.5));
  auto doc = io::read_json_file(kData / "torus_small.json");
  doc["chi"]["potential"]["trig"][0]["amplitude"] = 0.3;
  CHECK_THROWS_AS(io::torus_problem_from_json(doc, kData), ValidationError);
}

TEST_CASE("calabi and sweep documents") {
  const auto p = io::calabi_problem_from_json(io::read_json_file(kData / "calabi_f1_fails.json"));
  CHECK(p.t == Rational(29, 10));
  CHECK(p.m_beta == Rational(1, 10));
  const auto q = io::calabi_problem_from_json(io::calabi_problem_to_json(p));
  CHECK(q.t == p.t);
  CHECK(q.a == p.a);
  const auto cfg = io::sweep_config_from_json(io::read_json_file(kData / "sweep_standard.json"));
  const auto std_cfg = SweepConfig::standard();
  CHECK(cfg.t == std_cfg.t);
  CHECK(cfg.m_beta == std_cfg.m_beta);
  CHECK(cfg.a == std_cfg.a);
  CHECK(io::sweep_config_from_json(io::sweep_config_to_json(cfg)).t == cfg.t);
}

TEST_CASE("malformed json reports a position") {
  const auto path = scratch("bad.json");
  {
    std::ofstream out(path);
    out << "{\n  \"n\": 2,,\n}";
  }
  try {
    io::read_json_file(path);
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_json_file(scratch("missing.json")), ConfigurationError);
}

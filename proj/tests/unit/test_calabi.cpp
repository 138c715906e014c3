#include "doctest.h"

#include "jlab/calabi.hpp"
#include "jlab/errors.hpp"
#include "jlab/toric.hpp"

#include <random>

using namespace jlab;

namespace {

CalabiProblem problem(int a, Rational s, Rational t, Rational ma, Rational mb) { return {a, s, t, ma, mb}; }

Classification toric_verdict(const CalabiProblem& p) {
  const auto model = toric_to_geometry(ToricFan2D::hirzebruch(p.a));
  return j_verdict(model.geometry, p.alpha_class(), p.beta_class()).classification;
}

}  // namespace

TEST_CASE("proportional classes are solvable with f = g / lambda") {
  for (int a = 1; a <= 3; ++a)
    for (const Rational lambda : {Rational(1, 2), Rational(1), Rational(2)}) {
      const auto p = problem(a, Rational(3, 2), Rational(3, 2) * lambda, 1, lambda);
      CHECK(p.c() == lambda);
      const auto r = calabi_solve(p);
      CHECK(r.classification == CalabiClass::kSolvable);
      CHECK(r.gates_passed);
      CHECK(r.solve.verdict == SolveVerdict::kSolved);
      const double l = to_double(lambda);
      for (const auto& row : r.profile) CHECK(std::abs(row.f - row.g / l) < 1e-9);
      CHECK(toric_verdict(p) == Classification::kJPositive);
    }
}

TEST_CASE("endpoint identity holds exactly") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> d(1, 40);
  for (int i = 0; i < 200; ++i) {
    const auto p = problem(1 + i % 3, Rational(d(rng), 7), Rational(d(rng) - 1, 5), Rational(d(rng), 3),
                           Rational(d(rng), 11));
    CHECK(endpoint_identity_defect(p) == 0);
  }
}

TEST_CASE("dictionary and verdicts on F1") {
  SUBCASE("J-positive pair") {
    const auto p = problem(1, 1, 0, 1, 1);
    CHECK(p.c() == Rational(2, 3));
    CHECK(validate_dictionary(p).passed);
    const auto r = calabi_solve(p);
    CHECK(r.classification == CalabiClass::kSolvable);
    CHECK(r.gates_passed);
    CHECK(r.max_first_integral < 1e-10);
    CHECK(r.max_ode_residual < 1e-8);
    CHECK(r.solve.min_margin > 0.0);
    CHECK(toric_verdict(p) == Classification::kJPositive);
  }
  SUBCASE("fails at the negative curve") {
    const auto p = problem(1, 1, Rational(29, 10), 1, Rational(1, 10));
    CHECK(p.c() == Rational(31, 30));
    CHECK(validate_dictionary(p).passed);
    const auto r = calabi_solve(p);
    CHECK(r.classification == CalabiClass::kNotSolvable);
    CHECK(r.min_g_prime < 0.0);
    CHECK(r.argmin_f == 0.0);
    const auto model = toric_to_geometry(ToricFan2D::hirzebruch(1));
    const auto v = j_verdict(model.geometry, p.alpha_class(), p.beta_class());
    CHECK(v.classification == Classification::kFails);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == "D1");
  }
  SUBCASE("slope equality is a boundary instance") {
    // G'(0) = 2c - t with c = (2 m_beta + t) / 3 vanishes at t = 4 m_beta
    const auto p = problem(1, 1, 1, 1, Rational(1, 4));
    const auto r = calabi_solve(p);
    CHECK(r.classification == CalabiClass::kBoundary);
    CHECK(calabi_g_prime_exact(p, 0) == 0);
    CHECK(toric_verdict(p) == Classification::kJNef);
  }
}

TEST_CASE("G and its derivative") {
  const auto p = problem(2, 1, Rational(1, 2), 1, Rational(3, 4));
  const double h = 1e-6;
  for (double f : {0.1, 0.5, 0.9}) {
    const double fd = (calabi_g(p, f + h) - calabi_g(p, f - h)) / (2 * h);
    CHECK(calabi_g_prime(p, f) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK(calabi_g(p, 0.0) == 0.0);
  CHECK(calabi_g(p, 1.0) == doctest::Approx(0.75));
}

TEST_CASE("invalid problems") {
  CHECK_THROWS_AS(problem(0, 1, 0, 1, 1).validate(), ArgumentError);
  CHECK_THROWS_AS(problem(1, 0, 0, 1, 1).validate(), ArgumentError);
  CHECK_THROWS_AS(problem(1, 1, -1, 1, 1).validate(), ArgumentError);
  CHECK_THROWS_AS(problem(1, 1, 0, 1, 0).validate(), ArgumentError);
  CHECK_THROWS_AS(calabi_solve(problem(1, 1, 0, 1, 1), std::nullopt, {.rho_step = 0.0}), ArgumentError);
}

TEST_CASE("verdict sweep") {
  const auto cfg = SweepConfig::standard();
  CHECK(cfg.t.size() == 10);
  CHECK(cfg.m_beta.size() == 10);
  const auto result = verdict_sweep(cfg);
  CHECK(result.entries.size() == 300);
  CHECK(result.dictionary_passed);
  CHECK(result.gates_passed);
  CHECK(result.max_endpoint_defect == 0.0);
  CHECK(result.boundary > 0);
  CHECK(result.non_boundary_agreements == result.non_boundary);
  int diagonal = 0;
  for (const auto& e : result.entries) {
    if (e.problem.t == e.problem.m_beta) {
      CHECK(e.calabi == CalabiClass::kSolvable);
      CHECK(e.agree);
      ++diagonal;
    }
  }
  CHECK(diagonal == 15);
  CHECK_THROWS_AS(verdict_sweep(SweepConfig{}), ArgumentError);
}

#include "doctest.h"
#include "oracles.hpp"

#include "jlab/errors.hpp"
#include "jlab/intersection.hpp"

#include <random>

using namespace jlab;

namespace {

SymmetricTable linear(std::vector<Rational> values) {
  SymmetricTable t(1, static_cast<int>(values.size()));
  for (int i = 0; i < static_cast<int>(values.size()); ++i) t.set({i}, values[static_cast<std::size_t>(i)]);
  return t;
}

// F_1 in the basis (H, E): H^2 = 1, H.E = 0, E^2 = -1.
GeometryModel f1() {
  SymmetricTable top(2, 2);
  top.set({0, 0}, 1);
  top.set({1, 1}, -1);
  std::vector<SubvarietyRecord> subs{
      {"E", 1, linear({0, -1})}, {"F", 1, linear({1, 1})}, {"H", 1, linear({1, 0})}};
  std::vector<CurveRecord> curves{{"E", {0, -1}}, {"F", {1, 1}}, {"H", {1, 0}}};
  return GeometryModel(2, {"H", "E"}, top, subs, curves, ClassVector{-3, 1});
}

ClassVector cls(Rational h, Rational e) { return {h, e}; }

// Expansion oracle for F_1 pairings: (aH + bE).(cH + dE) = ac - bd.
Rational f1_pairing(const ClassVector& x, const ClassVector& y) { return x[0] * y[0] - x[1] * y[1]; }

Rational q(const char* s) { return parse_rational(s); }

const SlopeEntry& entry(const Verdict& v, const std::string& name) {
  for (const auto& e : v.per_z)
    if (e.name == name) return e;
  throw std::runtime_error("no entry " + name);
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("2.9") == Rational(29, 10));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK(format_rational(Rational(-7)) == "-7");
  CHECK_THROWS_AS(parse_rational("abc"), ArgumentError);
  CHECK_THROWS_AS(parse_rational("1/0"), ArgumentError);
  CHECK(rational_from_double(0.375) == Rational(3, 8));
}

TEST_CASE("intersect on F1") {
  const auto g = f1();
  const std::vector<ClassVector> hh{cls(1, 0), cls(1, 0)};
  CHECK(intersect(g, hh) == 1);
  const auto alpha = cls(2, -1);
  const std::vector<ClassVector> aa{alpha, alpha};
  CHECK(intersect(g, aa) == 3);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int i = 0; i < 50; ++i) {
    const auto x = cls(Rational(d(rng), 1 + (d(rng) + 9) % 4), d(rng));
    const auto y = cls(d(rng), Rational(d(rng), 3));
    const std::vector<ClassVector> xy{x, y}, yx{y, x};
    CHECK(intersect(g, xy) == intersect(g, yx));
    CHECK(intersect(g, xy) == f1_pairing(x, y));
  }
  const std::vector<ClassVector> one{alpha};
  CHECK_THROWS_AS(intersect(g, one), ArgumentError);
}

TEST_CASE("cap on F1") {
  const auto g = f1();
  const auto alpha = cls(2, -1);
  const std::vector<ClassVector> a{alpha};
  // fiber H - E: 2 H.H - 2 H.E - E.H + E.E expanded by the oracle
  CHECK(cap(g, g.subvarieties()[1], a) == f1_pairing(alpha, cls(1, -1)));
  CHECK(cap(g, g.subvarieties()[1], a) == 1);
  const std::vector<ClassVector> zero{cls(0, 0)};
  for (const auto& z : g.subvarieties()) CHECK(cap(g, z, zero) == 0);
  const std::vector<ClassVector> none;
  CHECK_THROWS_AS(cap(g, g.subvarieties()[0], none), ArgumentError);
}

TEST_CASE("normalization ratio") {
  const auto g = f1();
  const auto alpha = cls(2, -1);
  CHECK(normalization_ratio(g, alpha, alpha) == 1);
  CHECK(normalization_ratio(g, alpha, cls(1, 0)) == Rational(2, 3));
  CHECK(normalization_ratio(g, alpha, cls(3, q("-2.9"))) == q("3.1") / 3);
  CHECK(f1_pairing(alpha, cls(3, q("-2.9"))) / f1_pairing(alpha, alpha) == q("3.1") / 3);
  CHECK(normalization_bound_holds(g, alpha, cls(1, 0)));
  CHECK_FALSE(normalization_bound_holds(g, alpha, cls(3, q("-2.9"))));
  CHECK_THROWS_AS(normalization_ratio(g, cls(1, -1), alpha), DegenerateClassError);
}

TEST_CASE("kahler and nef tests") {
  const auto g = f1();
  CHECK(kahler_test(g, cls(2, -1)));
  CHECK_FALSE(kahler_test(g, cls(1, -2)));
  // (H - 2E).(H - E) = 1 - 2 = -1 by the oracle
  CHECK(f1_pairing(cls(1, -2), cls(1, -1)) == -1);
  CHECK_FALSE(kahler_test(g, cls(0, 0)));
  CHECK(nef_test(g, cls(1, 0)));
  CHECK(nef_test(g, cls(1, -1)));
  CHECK_FALSE(kahler_test(g, cls(1, 0)));
  CHECK_FALSE(nef_test(g, cls(0, 1)));
}

TEST_CASE("j verdict examples") {
  const auto g = f1();
  const auto alpha = cls(2, -1);
  SUBCASE("beta equal to alpha") {
    const auto v = j_verdict(g, alpha, alpha);
    CHECK(v.classification == Classification::kJPositive);
    CHECK(v.global_slope == 2);
    for (const auto& e : v.per_z) CHECK(*e.slope == 1);
  }
  SUBCASE("beta = H") {
    const auto v = j_verdict(g, alpha, cls(1, 0));
    CHECK(v.classification == Classification::kJPositive);
    CHECK(v.global_slope == Rational(4, 3));
    CHECK(*entry(v, "E").slope == 0);
    CHECK(*entry(v, "F").slope == 1);
    CHECK(*entry(v, "H").slope == Rational(1, 2));
    CHECK_FALSE(v.witness.has_value());
  }
  SUBCASE("beta = 3H - 2.9E") {
    const auto v = j_verdict(g, alpha, cls(3, q("-2.9")));
    CHECK(v.classification == Classification::kFails);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == "E");
    CHECK(*v.witness_slope == q("2.9"));
    CHECK(v.global_slope == 2 * q("3.1") / 3);
  }
  SUBCASE("slope equality is J-nef") {
    // beta = 5H - 4E: alpha.beta = 6, global slope 4, slope on E = 4
    const auto v = j_verdict(g, alpha, cls(5, -4));
    CHECK(v.global_slope == 4);
    CHECK(*entry(v, "E").slope == 4);
    CHECK(v.classification == Classification::kJNef);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(j_verdict(g, cls(1, -2), alpha), DomainError);
    CHECK_THROWS_AS(j_verdict(g, alpha, cls(0, 1)), DomainError);
    CHECK_THROWS_AS(j_verdict(g, alpha, alpha, Rational(-1)), ArgumentError);
  }
}

TEST_CASE("j verdict is invariant under rescaling alpha") {
  const auto g = f1();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(1, 40);
  int checked = 0;
  while (checked < 100) {
    // alpha = aH - bE is Kahler iff 0 < b < a; beta = cH - dE is nef iff 0 <= d <= c
    const Rational a(num(rng), 4), b(num(rng), 4), c(num(rng), 4), d(num(rng) - 1, 4);
    if (!(b < a) || !(d <= c)) continue;
    const auto alpha = cls(a, -b), beta = cls(c, -d);
    const auto base = j_verdict(g, alpha, beta).classification;
    for (const Rational t : {Rational(1, 2), Rational(2), Rational(10)})
      CHECK(j_verdict(g, scale(alpha, t), beta).classification == base);
    ++checked;
  }
}

TEST_CASE("uniform positivity is monotone in epsilon") {
  const auto g = f1();
  const auto alpha = cls(2, -1), beta = cls(1, 0);
  // max curve slope 1, c = 2/3: uniform iff 1 <= (2 - eps) 2/3, i.e. eps <= 1/2
  bool previous = true;
  for (const Rational eps : {Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(3, 5), Rational(1)}) {
    const auto v = j_verdict(g, alpha, beta, eps);
    REQUIRE(v.uniform.has_value());
    CHECK((*v.uniform == (eps <= Rational(1, 2))));
    if (!previous) CHECK_FALSE(*v.uniform);
    previous = *v.uniform;
  }
}

TEST_CASE("removing a subvariety never worsens the verdict") {
  const auto g = f1();
  const auto alpha = cls(2, -1), beta = cls(3, q("-2.9"));
  CHECK(j_verdict(g, alpha, beta).classification == Classification::kFails);
  std::vector<SubvarietyRecord> without_e;
  for (const auto& z : g.subvarieties())
    if (z.name != "E") without_e.push_back(z);
  const auto v = j_verdict(g.with_subvarieties(without_e), alpha, beta);
  CHECK(v.classification != Classification::kFails);
}

TEST_CASE("csck slope test") {
  SUBCASE("degenerate canonical class passes for every epsilon") {
    SymmetricTable top(2, 2);
    top.set({0, 0}, 1);
    top.set({1, 1}, 1);
    std::vector<SubvarietyRecord> subs{{"A", 1, linear({1, 0})}, {"B", 1, linear({0, 1})}};
    // K_X = 0
    const GeometryModel g(2, {"a", "b"}, top, subs, {}, ClassVector{0, 0});
    for (const Rational eps : {Rational(0), Rational(1, 2), Rational(5)})
      CHECK(csck_slope_test(g, {1, 1}, eps).passes);
  }
  SUBCASE("F1 with K = -3H + E and gamma = 3H - E") {
    const auto g = f1();
    const auto v = csck_slope_test(g, cls(3, -1), 0);
    // gamma.K / gamma^2 = (-9 + 1) / (9 - 1) = -1; lhs on E: K.E = -1; rhs 2 * (-1) * gamma.E = -2
    CHECK(v.ratio == -1);
    CHECK_FALSE(v.passes);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == "E");
  }
  SUBCASE("model sweep finds the threshold 1 + sqrt 5") {
    SymmetricTable top(2, 2);
    top.set({0, 0}, 2);
    top.set({1, 1}, -2);
    std::vector<SubvarietyRecord> subs{{"C", 1, linear({0, -2})}, {"D", 1, linear({2, 3})}};
    std::vector<CurveRecord> curves{{"C", {0, -2}}, {"D", {2, 3}}};
    const GeometryModel g(2, {"K", "C"}, top, subs, curves, ClassVector{1, 0});
    const ClassVector gamma{1, Rational(-1, 2)};
    const auto s = csck_sweep(g, gamma, Rational(1, 100), Rational(10), 0, 40);
    REQUIRE(s.largest_passing.has_value());
    REQUIRE(s.smallest_failing.has_value());
    const double threshold = 1.0 + std::sqrt(5.0);
    CHECK(to_double(*s.largest_passing) <= threshold);
    CHECK(to_double(*s.smallest_failing) >= threshold);
    CHECK(to_double(*s.smallest_failing - *s.largest_passing) < 1e-9);
    // gamma itself fails at D: lhs 4 against rhs 8/3
    CHECK_FALSE(csck_slope_test(g, gamma, 0).passes);
    CHECK_THROWS_AS(csck_sweep(g, gamma, 1, 1, 0, 10), ArgumentError);
  }
  SUBCASE("missing canonical class") {
    SymmetricTable top(2, 1);
    top.set({0, 0}, 1);
    const GeometryModel g(2, {"H"}, top, {}, {});
    CHECK_THROWS_AS(csck_slope_test(g, {1}, 0), ConfigurationError);
  }
}

TEST_CASE("symmetric table") {
  SymmetricTable t(2, 3);
  t.set({2, 0}, 5);
  CHECK(t.at({0, 2}) == 5);
  CHECK(t.at({1, 1}) == 0);
  CHECK_THROWS_AS(t.set({0}, 1), ArgumentError);
  CHECK_THROWS_AS(t.set({0, 3}, 1), ArgumentError);
  // dense expansion oracle
  std::vector<std::vector<double>> dense(3, std::vector<double>(3, 0.0));
  dense[0][2] = dense[2][0] = 5;
  t.set({1, 1}, -2);
  dense[1][1] = -2;
  const std::vector<ClassVector> xy{{1, 2, 3}, {Rational(1, 2), -1, 4}};
  CHECK(to_double(t.evaluate(xy)) == doctest::Approx(oracle::bilinear(dense, {1, 2, 3}, {0.5, -1, 4})));
}

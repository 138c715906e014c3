#include "doctest.h"

#include "jlab/errors.hpp"
#include "jlab/toric.hpp"

#include <random>

using namespace jlab;

namespace {

std::vector<ToricFan2D> bundled_fans() {
  return {ToricFan2D::projective_plane(), ToricFan2D::hirzebruch(0), ToricFan2D::hirzebruch(1),
          ToricFan2D::hirzebruch(2), ToricFan2D::hirzebruch(3)};
}

Rational pair(const ToricModel& m, const ClassVector& a, const ClassVector& b) {
  const std::vector<ClassVector> ab{a, b};
  return intersect(m.geometry, ab);
}

}  // namespace

TEST_CASE("projective plane") {
  const auto m = toric_to_geometry(ToricFan2D::projective_plane());
  CHECK(m.geometry.rank() == 1);
  CHECK(pair(m, {1}, {1}) == 1);
  for (int i = 0; i < 3; ++i) CHECK(class_from_support(m, {i == 0, i == 1, i == 2}) == ClassVector{1});
  CHECK(polygon_area(ToricFan2D::projective_plane(), {0, 0, 1}) == Rational(1, 2));
}

TEST_CASE("hirzebruch surfaces") {
  SUBCASE("F0 is P1 x P1") {
    const auto m = toric_to_geometry(ToricFan2D::hirzebruch(0));
    CHECK(pair(m, {1, 0}, {1, 0}) == 0);
    CHECK(pair(m, {0, 1}, {0, 1}) == 0);
    CHECK(pair(m, {1, 0}, {0, 1}) == 1);
    // unit square
    CHECK(polygon_area(ToricFan2D::hirzebruch(0), {0, 0, 1, 1}) == 1);
    CHECK(pair(m, {1, 1}, {1, 1}) == 2);
  }
  SUBCASE("F1 carries a -1 curve") {
    const auto fan = ToricFan2D::hirzebruch(1);
    CHECK(fan.self_intersection_coefficient(1) == 1);
    const auto m = toric_to_geometry(fan);
    CHECK(m.self_intersection[1] == -1);
    // D2 is a fiber, D3 the section at infinity, D1 = D3 - D2 the exceptional curve
    const ClassVector e = class_from_support(m, {0, 1, 0, 0});
    CHECK(e == ClassVector{-1, 1});
    CHECK(pair(m, e, e) == -1);
    CHECK(pair(m, {0, 1}, {0, 1}) == 1);
    CHECK(pair(m, {1, 0}, {1, 0}) == 0);
  }
  for (int a = 0; a <= 3; ++a) {
    const auto m = toric_to_geometry(ToricFan2D::hirzebruch(a));
    CHECK(m.self_intersection[1] == -a);
  }
}

TEST_CASE("invalid fans") {
  CHECK_THROWS_AS(ToricFan2D({{1, 0}, {1, 2}, {-1, -1}}), ValidationError);
  CHECK_THROWS_AS(ToricFan2D({{2, 0}, {0, 1}, {-1, -1}}), ValidationError);
  CHECK_THROWS_AS(ToricFan2D({{1, 0}, {0, 1}}), ValidationError);
  CHECK_THROWS_AS(ToricFan2D({{1, 0}, {-1, -1}, {0, 1}}), ValidationError);
}

TEST_CASE("nef tests agree") {
  for (const auto& fan : bundled_fans()) {
    const auto m = toric_to_geometry(fan);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int i = 0; i < 100; ++i) {
      std::vector<Rational> support(static_cast<std::size_t>(fan.size()));
      for (auto& x : support) x = d(rng);
      CHECK(support_is_nef(m, support) == fan_support_is_nef(fan, support));
    }
  }
}

TEST_CASE("intersection numbers match the mixed-volume oracle on nef pairs") {
  for (const auto& fan : bundled_fans()) {
    const auto m = toric_to_geometry(fan);
    const int rank = m.geometry.rank();
    std::vector<ClassVector> nef;
    for (int x = -3; x <= 3; ++x)
      for (int y = -3; y <= 3; ++y) {
        ClassVector c = rank == 1 ? ClassVector{x} : ClassVector{x, y};
        if (rank == 1 && y != 0) continue;
        if (fan_support_is_nef(fan, support_from_class(m, c))) nef.push_back(c);
      }
    CHECK(nef.size() >= 3);
    for (const auto& a : nef)
      for (const auto& b : nef)
        CHECK(pair(m, a, b) ==
              mixed_volume_oracle(fan, support_from_class(m, a), support_from_class(m, b)));
    // rational classes
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> num(0, 30);
    int checked = 0;
    while (checked < 50) {
      ClassVector a(static_cast<std::size_t>(rank)), b(a.size());
      for (auto& v : a) v = Rational(num(rng) - 10, 1 + num(rng) % 7);
      for (auto& v : b) v = Rational(num(rng) - 10, 1 + num(rng) % 5);
      const auto sa = support_from_class(m, a), sb = support_from_class(m, b);
      if (!fan_support_is_nef(fan, sa) || !fan_support_is_nef(fan, sb)) continue;
      CHECK(pair(m, a, b) == mixed_volume_oracle(fan, sa, sb));
      CHECK(pair(m, a, a) == 2 * polygon_area(fan, sa));
      ++checked;
    }
  }
}

TEST_CASE("oracle rejects non-nef input") {
  const auto fan = ToricFan2D::hirzebruch(1);
  CHECK_THROWS_AS(mixed_volume_oracle(fan, {0, 1, 0, 0}, {0, 0, 0, 1}), ArgumentError);
  CHECK_THROWS_AS(polygon_area(fan, {0, 0, 0}), ArgumentError);
  CHECK_THROWS_AS(polygon_area(ToricFan2D::projective_plane(), {0, 0, -1}), DegenerateClassError);
}

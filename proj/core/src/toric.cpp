#include "jlab/toric.hpp"

#include "jlab/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace jlab {

namespace {

long det(const ToricFan2D::Ray& u, const ToricFan2D::Ray& v) { return u[0] * v[1] - u[1] * v[0]; }

struct Point {
  Rational x;
  Rational y;
};

}  // namespace

ToricFan2D::ToricFan2D(std::vector<Ray> rays) : rays_(std::move(rays)) {
  const int d = size();
  if (d < 3) throw ValidationError("fan: a complete fan needs at least three rays");
  double winding = 0.0;
  for (int i = 0; i < d; ++i) {
    const Ray& u = rays_[static_cast<std::size_t>(i)];
    const Ray& v = rays_[static_cast<std::size_t>((i + 1) % d)];
    if (std::gcd(std::abs(u[0]), std::abs(u[1])) != 1) {
      throw ValidationError("fan: ray " + std::to_string(i) + " is not primitive");
    }
    if (det(u, v) != 1) {
      throw ValidationError("fan: rays " + std::to_string(i) + " and " + std::to_string((i + 1) % d) +
                            " do not span a smooth cone");
    }
    const double a = std::atan2(static_cast<double>(det(u, v)),
                                static_cast<double>(u[0] * v[0] + u[1] * v[1]));
    winding += a;
  }
  if (std::abs(winding - 2.0 * std::numbers::pi) > 1e-9) {
    throw ValidationError("fan: rays do not wind exactly once around the origin");
  }
}

int ToricFan2D::self_intersection_coefficient(int i) const {
  const int d = size();
  const Ray& prev = rays_[static_cast<std::size_t>((i + d - 1) % d)];
  const Ray& cur = rays_[static_cast<std::size_t>(i)];
  const Ray& next = rays_[static_cast<std::size_t>((i + 1) % d)];
  const long sx = prev[0] + next[0];
  const long sy = prev[1] + next[1];
  // prev + next is parallel to cur for a smooth fan; read off the multiple.
  if (cur[0] != 0) return static_cast<int>(sx / cur[0]);
  return static_cast<int>(sy / cur[1]);
}

ToricFan2D ToricFan2D::projective_plane() { return ToricFan2D({{1, 0}, {0, 1}, {-1, -1}}); }

ToricFan2D ToricFan2D::hirzebruch(int a) {
  if (a < 0) throw ArgumentError("hirzebruch: a must be non-negative");
  return ToricFan2D({{1, 0}, {0, 1}, {-1, a}, {0, -1}});
}

ToricModel toric_to_geometry(const ToricFan2D& fan) {
  const int d = fan.size();
  const int rank = d - 2;
  const auto& v = fan.rays();

  // <m, v_0> = 1, <m, v_1> = 0 and vice versa: rows of [v_0 v_1]^{-1} (det 1).
  const std::array<long, 2> m0{v[1][1], -v[1][0]};
  const std::array<long, 2> m1{-v[0][1], v[0][0]};
  auto pair = [](const std::array<long, 2>& m, const ToricFan2D::Ray& r) {
    return m[0] * r[0] + m[1] * r[1];
  };

  std::vector<ClassVector> basis_change(static_cast<std::size_t>(d), ClassVector(rank, Rational(0)));
  for (int j = 0; j < rank; ++j) {
    basis_change[static_cast<std::size_t>(j + 2)][static_cast<std::size_t>(j)] = 1;
    basis_change[0][static_cast<std::size_t>(j)] = -pair(m0, v[static_cast<std::size_t>(j + 2)]);
    basis_change[1][static_cast<std::size_t>(j)] = -pair(m1, v[static_cast<std::size_t>(j + 2)]);
  }

  std::vector<int> self(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) self[static_cast<std::size_t>(i)] = -fan.self_intersection_coefficient(i);

  auto divisor_pairing = [&](int i, int j) -> Rational {
    if (i == j) return self[static_cast<std::size_t>(i)];
    if ((i + 1) % d == j || (j + 1) % d == i) return 1;
    return 0;
  };

  SymmetricTable top(2, rank);
  std::vector<std::string> basis;
  for (int j = 0; j < rank; ++j) {
    basis.push_back("D" + std::to_string(j + 2));
    for (int k = j; k < rank; ++k) top.set({j, k}, divisor_pairing(j + 2, k + 2));
  }

  std::vector<SubvarietyRecord> subvarieties;
  std::vector<CurveRecord> curves;
  for (int i = 0; i < d; ++i) {
    // D . D_i for each basis divisor D = D_{j+2}.
    ClassVector dual(static_cast<std::size_t>(rank));
    for (int j = 0; j < rank; ++j) {
      dual[static_cast<std::size_t>(j)] = 0;
      for (int k = 0; k < rank; ++k) {
        dual[static_cast<std::size_t>(j)] +=
            top.at({j, k}) * basis_change[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      }
    }
    SymmetricTable cap_table(1, rank);
    for (int j = 0; j < rank; ++j) cap_table.set({j}, dual[static_cast<std::size_t>(j)]);
    const std::string name = "D" + std::to_string(i);
    subvarieties.push_back({name, 1, cap_table});
    curves.push_back({name, dual});
  }

  // Each D_i must pair with the basis exactly as the adjacency rules say.
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < rank; ++j) {
      if (curves[static_cast<std::size_t>(i)].dual[static_cast<std::size_t>(j)] != divisor_pairing(i, j + 2)) {
        throw ValidationError("fan: linear relations are inconsistent with the intersection rules");
      }
    }
  }

  ToricModel model{GeometryModel(2, basis, top, subvarieties, curves), basis_change, self};
  return model;
}

ClassVector class_from_support(const ToricModel& model, const std::vector<Rational>& support) {
  if (support.size() != model.change_of_basis.size()) {
    throw ArgumentError("support vector must have one entry per ray");
  }
  ClassVector out(static_cast<std::size_t>(model.geometry.rank()), Rational(0));
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += support[i] * model.change_of_basis[i][j];
  }
  return out;
}

std::vector<Rational> support_from_class(const ToricModel& model, const ClassVector& c) {
  model.geometry.check_class(c, "class");
  std::vector<Rational> support(model.change_of_basis.size(), Rational(0));
  for (std::size_t j = 0; j < c.size(); ++j) support[j + 2] = c[j];
  return support;
}

bool support_is_nef(const ToricModel& model, const std::vector<Rational>& support) {
  return nef_test(model.geometry, class_from_support(model, support));
}

bool fan_support_is_nef(const ToricFan2D& fan, const std::vector<Rational>& support) {
  const int d = fan.size();
  if (static_cast<int>(support.size()) != d) throw ArgumentError("support vector must have one entry per ray");
  for (int i = 0; i < d; ++i) {
    const Rational degree = support[static_cast<std::size_t>((i + d - 1) % d)] +
                            support[static_cast<std::size_t>((i + 1) % d)] -
                            fan.self_intersection_coefficient(i) * support[static_cast<std::size_t>(i)];
    if (degree < 0) return false;
  }
  return true;
}

Rational polygon_area(const ToricFan2D& fan, const std::vector<Rational>& support) {
  const auto& rays = fan.rays();
  if (support.size() != rays.size()) throw ArgumentError("support vector must have one entry per ray");

  // Every vertex of P lies on two facet lines, so a box around all pairwise
  // line intersections contains P.
  Rational bound = 1;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const long dt = det(rays[i], rays[j]);
      if (dt == 0) continue;
      // Solve <m, v_i> = -a_i, <m, v_j> = -a_j.
      const Rational x = (-support[i] * rays[j][1] + support[j] * rays[i][1]) / dt;
      const Rational y = (-support[j] * rays[i][0] + support[i] * rays[j][0]) / dt;
      bound = std::max(bound, Rational(abs(x) + 1));
      bound = std::max(bound, Rational(abs(y) + 1));
    }
  }
  std::vector<Point> poly{{-bound, -bound}, {bound, -bound}, {bound, bound}, {-bound, bound}};

  for (std::size_t i = 0; i < rays.size() && !poly.empty(); ++i) {
    const Rational vx = rays[i][0];
    const Rational vy = rays[i][1];
    auto value = [&](const Point& p) -> Rational { return vx * p.x + vy * p.y + support[i]; };
    std::vector<Point> next;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Point& p = poly[k];
      const Point& q = poly[(k + 1) % poly.size()];
      const Rational fp = value(p);
      const Rational fq = value(q);
      if (fp >= 0) next.push_back(p);
      if ((fp > 0 && fq < 0) || (fp < 0 && fq > 0)) {
        const Rational t = fp / (fp - fq);
        next.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    poly = std::move(next);
  }
  if (poly.empty()) throw DegenerateClassError("polygon_area: empty polytope");

  Rational twice = 0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point& p = poly[k];
    const Point& q = poly[(k + 1) % poly.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return Rational(abs(twice) / 2);
}

Rational mixed_volume_oracle(const ToricFan2D& fan, const std::vector<Rational>& a,
                             const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw ArgumentError("mixed_volume_oracle: support size mismatch");
  if (!fan_support_is_nef(fan, a) || !fan_support_is_nef(fan, b)) {
    throw ArgumentError("mixed_volume_oracle: classes must be nef");
  }
  std::vector<Rational> sum(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
  return polygon_area(fan, sum) - polygon_area(fan, a) - polygon_area(fan, b);
}

}  // namespace jlab

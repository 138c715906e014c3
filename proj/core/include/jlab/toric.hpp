#pragma once

#include "jlab/intersection.hpp"

#include <array>
#include <vector>

namespace jlab {

/// Smooth complete fan in Z^2, rays listed counterclockwise.
class ToricFan2D {
 public:
  using Ray = std::array<long, 2>;

  /// Throws ValidationError unless consecutive rays (cyclically) have
  /// determinant +1, every ray is primitive, and the rays wind once.
  explicit ToricFan2D(std::vector<Ray> rays);

  const std::vector<Ray>& rays() const { return rays_; }
  int size() const { return static_cast<int>(rays_.size()); }
  /// c_i with v_{i-1} + v_{i+1} = c_i v_i; D_i^2 = -c_i.
  int self_intersection_coefficient(int i) const;

  static ToricFan2D projective_plane();
  /// Hirzebruch surface F_a: (1,0), (0,1), (-1,a), (0,-1).
  static ToricFan2D hirzebruch(int a);

 private:
  std::vector<Ray> rays_;
};

/// Geometry of the toric surface with basis D_2 .. D_{d-1}.
struct ToricModel {
  GeometryModel geometry;
  /// Row i expresses D_i in the basis (d rows, d-2 columns).
  std::vector<ClassVector> change_of_basis;
  std::vector<int> self_intersection;
};

ToricModel toric_to_geometry(const ToricFan2D& fan);

/// Class of sum_i a_i D_i in the model's basis.
ClassVector class_from_support(const ToricModel& model, const std::vector<Rational>& support);
/// Support numbers (0, 0, x_0, x_1, ...) representing a basis class.
std::vector<Rational> support_from_class(const ToricModel& model, const ClassVector& c);

/// sum_i a_i D_i is nef iff its degree on every invariant curve is >= 0.
bool support_is_nef(const ToricModel& model, const std::vector<Rational>& support);

/// Same test read off the fan alone: a_{i-1} + a_{i+1} - c_i a_i >= 0.
bool fan_support_is_nef(const ToricFan2D& fan, const std::vector<Rational>& support);

/// Area of P_a = {m : <m, v_i> >= -a_i} by exact half-plane clipping.
Rational polygon_area(const ToricFan2D& fan, const std::vector<Rational>& support);

/// alpha.beta = Vol(P_{a+b}) - Vol(P_a) - Vol(P_b) for nef supports a, b.
Rational mixed_volume_oracle(const ToricFan2D& fan, const std::vector<Rational>& a,
                             const std::vector<Rational>& b);

}  // namespace jlab

#pragma once

#include "jlab/hermitian.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace jlab {

/// Discrete torus (R/Z)^{2n} used as a chart for pointwise computations.
///
/// Axis a < n is x_{a+1}, axis n + j is y_{j+1}. Nodes are stored row-major
/// with x_1 varying slowest. Every axis normally carries res >= 8 nodes; an
/// axis with a single node marks a direction along which fields are
/// translation invariant (its finite differences vanish identically).
class PeriodicGrid {
 public:
  static constexpr int kMinResolution = 8;
  static constexpr int kMaxDimension = 4;

  PeriodicGrid() = default;
  PeriodicGrid(int n, int res);
  PeriodicGrid(int n, std::vector<int> axis_res);

  int n() const { return n_; }
  int axes() const { return 2 * n_; }
  int res(int axis) const { return res_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& resolutions() const { return res_; }
  bool uniform() const;
  /// Resolution of a uniform grid; throws ArgumentError otherwise.
  int uniform_res() const;
  double spacing(int axis) const { return 1.0 / res(axis); }
  /// Largest spacing over resolved axes.
  double h() const;
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  int coordinate_index(std::size_t node, int axis) const {
    return static_cast<int>((node / stride(axis)) % static_cast<std::size_t>(res(axis)));
  }
  /// Periodic neighbour of `node` shifted by `delta` nodes along `axis`.
  std::size_t shift(std::size_t node, int axis, int delta) const;
  std::size_t index(std::span<const int> coords) const;
  /// Real coordinate in [0, 1) of the node along an axis.
  double coordinate(std::size_t node, int axis) const {
    return coordinate_index(node, axis) * spacing(axis);
  }
  /// Shortest periodic offset (in real units) from `from` to `to` along axis.
  double periodic_offset(std::size_t from, std::size_t to, int axis) const;
  double periodic_distance(std::size_t a, std::size_t b) const;

  bool operator==(const PeriodicGrid& other) const {
    return n_ == other.n_ && res_ == other.res_;
  }

 private:
  void init();

  int n_ = 0;
  std::vector<int> res_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

/// Real value per node.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(PeriodicGrid grid, double fill = 0.0);
  ScalarField(PeriodicGrid grid, std::vector<double> values);

  /// Samples fn(x) where x holds the 2n real coordinates of each node.
  static ScalarField sample(const PeriodicGrid& grid,
                            const std::function<double(std::span<const double>)>& fn);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool mean_zero() const { return mean_zero_; }
  double mean() const;
  /// Subtracts the mean and sets the mean-zero flag.
  void normalize_mean();
  bool all_finite() const;
  double max() const;
  double min() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
  bool mean_zero_ = false;
};

/// Hermitian n x n coefficient matrix per node, stored densely row-major.
class FormField {
 public:
  FormField() = default;
  explicit FormField(PeriodicGrid grid);
  /// Constant field equal to `form` at every node.
  FormField(PeriodicGrid grid, const HermitianForm& form);

  const PeriodicGrid& grid() const { return grid_; }
  int dim() const { return grid_.n(); }
  std::size_t size() const { return grid_.size(); }

  Complex entry(std::size_t node, int j, int k) const {
    return data_[node * stride_ + static_cast<std::size_t>(j * dim() + k)];
  }
  Complex& entry(std::size_t node, int j, int k) {
    return data_[node * stride_ + static_cast<std::size_t>(j * dim() + k)];
  }
  Matrix matrix_at(std::size_t node) const;
  HermitianForm form_at(std::size_t node) const { return HermitianForm(matrix_at(node)); }
  void set(std::size_t node, const Matrix& m);

  FormField operator+(const FormField& other) const;
  FormField scaled(double t) const;

 private:
  PeriodicGrid grid_;
  std::size_t stride_ = 0;
  std::vector<Complex> data_;
};

/// i d dbar phi at every node by second-order central differences:
/// entry (j,k) = 1/4 (d_xj d_xk + d_yj d_yk) phi + i/4 (d_xj d_yk - d_yj d_xk) phi.
FormField complex_hessian(const ScalarField& phi);

/// Same stencil evaluated at a single node; writes n*n entries row-major.
void complex_hessian_at(const ScalarField& phi, std::size_t node, std::span<Complex> out);
Matrix complex_hessian_at(const ScalarField& phi, std::size_t node);

/// Streams the complex Hessian of every node to `visit(node, entries)` without
/// materialising a FormField. Nodes are visited in chunks across workers, so
/// `visit` must be safe to call concurrently for distinct nodes.
void for_each_hessian(const ScalarField& phi,
                      const std::function<void(std::size_t, std::span<const Complex>)>& visit);

}  // namespace jlab

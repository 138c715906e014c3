#include "jlab/grid.hpp"

#include "jlab/errors.hpp"
#include "jlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace jlab {

PeriodicGrid::PeriodicGrid(int n, int res)
    : PeriodicGrid(n, std::vector<int>(static_cast<std::size_t>(std::max(n, 0) * 2), res)) {}

PeriodicGrid::PeriodicGrid(int n, std::vector<int> axis_res) : n_(n), res_(std::move(axis_res)) {
  if (n < 1 || n > kMaxDimension) {
    throw ArgumentError("PeriodicGrid: complex dimension must be in [1, " +
                        std::to_string(kMaxDimension) + "]");
  }
  if (res_.size() != static_cast<std::size_t>(2 * n)) {
    throw ArgumentError("PeriodicGrid: expected one resolution per real axis");
  }
  bool any_resolved = false;
  for (int r : res_) {
    if (r == 1) continue;
    if (r < kMinResolution) {
      throw ArgumentError("PeriodicGrid: resolution " + std::to_string(r) +
                          " below the minimum of " + std::to_string(kMinResolution));
    }
    any_resolved = true;
  }
  if (!any_resolved) throw ArgumentError("PeriodicGrid: no resolved axis");
  init();
}

void PeriodicGrid::init() {
  stride_.assign(res_.size(), 1);
  size_ = 1;
  for (int a = axes() - 1; a >= 0; --a) {
    stride_[static_cast<std::size_t>(a)] = size_;
    size_ *= static_cast<std::size_t>(res_[static_cast<std::size_t>(a)]);
  }
}

bool PeriodicGrid::uniform() const {
  return std::all_of(res_.begin(), res_.end(), [&](int r) { return r == res_.front(); });
}

int PeriodicGrid::uniform_res() const {
  if (!uniform()) throw ArgumentError("PeriodicGrid: operation requires a uniform grid");
  return res_.front();
}

double PeriodicGrid::h() const {
  double h = 0.0;
  for (int r : res_) {
    if (r > 1) h = std::max(h, 1.0 / r);
  }
  return h;
}

std::size_t PeriodicGrid::shift(std::size_t node, int axis, int delta) const {
  const int r = res(axis);
  const int c = coordinate_index(node, axis);
  int moved = (c + delta) % r;
  if (moved < 0) moved += r;
  return node + (static_cast<std::ptrdiff_t>(moved) - c) * static_cast<std::ptrdiff_t>(stride(axis));
}

std::size_t PeriodicGrid::index(std::span<const int> coords) const {
  if (coords.size() != res_.size()) throw ArgumentError("PeriodicGrid::index: arity");
  std::size_t idx = 0;
  for (int a = 0; a < axes(); ++a) {
    const int r = res(a);
    int c = coords[static_cast<std::size_t>(a)] % r;
    if (c < 0) c += r;
    idx += static_cast<std::size_t>(c) * stride(a);
  }
  return idx;
}

double PeriodicGrid::periodic_offset(std::size_t from, std::size_t to, int axis) const {
  const int r = res(axis);
  int d = coordinate_index(to, axis) - coordinate_index(from, axis);
  d %= r;
  if (d > r / 2) d -= r;
  if (d < -r / 2) d += r;
  return d * spacing(axis);
}

double PeriodicGrid::periodic_distance(std::size_t a, std::size_t b) const {
  double s = 0.0;
  for (int ax = 0; ax < axes(); ++ax) {
    const double d = periodic_offset(a, b, ax);
    s += d * d;
  }
  return std::sqrt(s);
}

ScalarField::ScalarField(PeriodicGrid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.size(), fill) {}

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ArgumentError("ScalarField: value count does not match the grid");
  }
}

ScalarField ScalarField::sample(const PeriodicGrid& grid,
                                const std::function<double(std::span<const double>)>& fn) {
  ScalarField field(grid);
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    std::array<double, 2 * PeriodicGrid::kMaxDimension> x{};
    for (std::size_t i = begin; i < end; ++i) {
      for (int a = 0; a < grid.axes(); ++a) x[static_cast<std::size_t>(a)] = grid.coordinate(i, a);
      field.values_[i] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(grid.axes())));
    }
  });
  return field;
}

double ScalarField::mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

void ScalarField::normalize_mean() {
  const double m = mean();
  for (double& v : values_) v -= m;
  mean_zero_ = true;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

FormField::FormField(PeriodicGrid grid)
    : grid_(std::move(grid)),
      stride_(static_cast<std::size_t>(grid_.n() * grid_.n())),
      data_(grid_.size() * stride_, Complex(0.0, 0.0)) {}

FormField::FormField(PeriodicGrid grid, const HermitianForm& form) : FormField(std::move(grid)) {
  if (form.dim() != dim()) throw ArgumentError("FormField: form dimension mismatch");
  for (std::size_t node = 0; node < size(); ++node) set(node, form.matrix());
}

Matrix FormField::matrix_at(std::size_t node) const {
  const int n = dim();
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = entry(node, j, k);
  return m;
}

void FormField::set(std::size_t node, const Matrix& m) {
  const int n = dim();
  if (m.rows() != n || m.cols() != n) throw ArgumentError("FormField::set: dimension mismatch");
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) entry(node, j, k) = m(j, k);
}

FormField FormField::operator+(const FormField& other) const {
  if (!(grid_ == other.grid_)) throw ArgumentError("FormField: grid mismatch");
  FormField out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

FormField FormField::scaled(double t) const {
  FormField out = *this;
  for (auto& v : out.data_) v *= t;
  return out;
}

namespace {

constexpr std::size_t kMaxAxes = 2 * PeriodicGrid::kMaxDimension;

// Signed index offsets of the +1 / -1 neighbours along every axis.
struct NeighbourOffsets {
  std::array<std::ptrdiff_t, kMaxAxes> plus{};
  std::array<std::ptrdiff_t, kMaxAxes> minus{};
};

void offsets_for(const PeriodicGrid& g, std::span<const int> coords, NeighbourOffsets& off) {
  for (int a = 0; a < g.axes(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const auto r = static_cast<std::ptrdiff_t>(g.res(a));
    const auto s = static_cast<std::ptrdiff_t>(g.stride(a));
    off.plus[ua] = coords[ua] == r - 1 ? -(r - 1) * s : s;
    off.minus[ua] = coords[ua] == 0 ? (r - 1) * s : -s;
  }
}

// Stencil coefficients per axis; zero on unresolved axes.
struct StencilScale {
  std::array<double, kMaxAxes> pure{};
  std::array<double, kMaxAxes> half{};
  int n = 0;

  explicit StencilScale(const PeriodicGrid& g) : n(g.n()) {
    for (int a = 0; a < g.axes(); ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const double inv = g.res(a) == 1 ? 0.0 : static_cast<double>(g.res(a));
      pure[ua] = inv * inv;
      half[ua] = 0.5 * inv;
    }
  }
};

void hessian_with_offsets(const StencilScale& sc, const double* v, std::size_t node,
                          const NeighbourOffsets& off, Complex* out) {
  const int n = sc.n;
  const double* p = v + node;
  const double centre = *p;
  const auto pure = [&](int a) {
    const auto ua = static_cast<std::size_t>(a);
    return (p[off.plus[ua]] - 2.0 * centre + p[off.minus[ua]]) * sc.pure[ua];
  };
  const auto mixed = [&](int a, int b) {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    const double num = p[off.plus[ua] + off.plus[ub]] - p[off.plus[ua] + off.minus[ub]] -
                       p[off.minus[ua] + off.plus[ub]] + p[off.minus[ua] + off.minus[ub]];
    return num * sc.half[ua] * sc.half[ub];
  };
  for (int j = 0; j < n; ++j) {
    out[j * n + j] = Complex(0.25 * (pure(j) + pure(n + j)), 0.0);
    for (int k = j + 1; k < n; ++k) {
      const double re = 0.25 * (mixed(j, k) + mixed(n + j, n + k));
      const double im = 0.25 * (mixed(j, n + k) - mixed(n + j, k));
      out[j * n + k] = Complex(re, im);
      out[k * n + j] = Complex(re, -im);
    }
  }
}

// Advances an odometer over the grid coordinates (last axis fastest).
void advance(const PeriodicGrid& g, std::array<int, kMaxAxes>& coords) {
  for (int a = g.axes() - 1; a >= 0; --a) {
    auto& c = coords[static_cast<std::size_t>(a)];
    if (++c < g.res(a)) return;
    c = 0;
  }
}

}  // namespace

void complex_hessian_at(const ScalarField& phi, std::size_t node, std::span<Complex> out) {
  const PeriodicGrid& g = phi.grid();
  const int n = g.n();
  if (out.size() < static_cast<std::size_t>(n * n)) {
    throw ArgumentError("complex_hessian_at: output span too small");
  }
  std::array<int, kMaxAxes> coords{};
  for (int a = 0; a < g.axes(); ++a) coords[static_cast<std::size_t>(a)] = g.coordinate_index(node, a);
  NeighbourOffsets off;
  offsets_for(g, std::span<const int>(coords.data(), static_cast<std::size_t>(g.axes())), off);
  hessian_with_offsets(StencilScale(g), phi.values().data(), node, off, out.data());
}

Matrix complex_hessian_at(const ScalarField& phi, std::size_t node) {
  const int n = phi.grid().n();
  std::array<Complex, PeriodicGrid::kMaxDimension * PeriodicGrid::kMaxDimension> buf{};
  complex_hessian_at(phi, node, std::span<Complex>(buf.data(), static_cast<std::size_t>(n * n)));
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = buf[static_cast<std::size_t>(j * n + k)];
  return m;
}

namespace {

// Fast path for n = 2 with every axis resolved: the Hessian of a whole line
// along the fastest axis is evaluated with the same operation order as
// hessian_with_offsets, then handed to `visit` node by node.
void for_each_hessian_2d(const ScalarField& phi,
                         const std::function<void(std::size_t, std::span<const Complex>)>& visit) {
  const PeriodicGrid& g = phi.grid();
  const int len = g.res(3);
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    const StencilScale sc(g);
    std::vector<double> h11(static_cast<std::size_t>(len)), h22(h11), re(h11), im(h11);
    std::array<int, kMaxAxes> coords{};
    NeighbourOffsets off;
    std::array<Complex, 4> buf{};
    const double* v = phi.values().data();
    std::size_t node = begin;
    while (node < end) {
      for (int a = 0; a < 4; ++a) coords[static_cast<std::size_t>(a)] = g.coordinate_index(node, a);
      const std::size_t line = node - static_cast<std::size_t>(coords[3]);
      const std::size_t stop = std::min(end, line + static_cast<std::size_t>(len));
      coords[3] = 0;
      offsets_for(g, std::span<const int>(coords.data(), 4), off);
      const double* c = v + line;
      const std::ptrdiff_t p0 = off.plus[0], m0 = off.minus[0], p1 = off.plus[1], m1 = off.minus[1];
      const std::ptrdiff_t p2 = off.plus[2], m2 = off.minus[2];
      for (int i = 0; i < len; ++i) {
        const std::ptrdiff_t ip = i + 1 == len ? -(len - 1) : 1;
        const std::ptrdiff_t im_ = i == 0 ? len - 1 : -1;
        const double* q = c + i;
        const double centre = *q;
        const double d00 = (q[p0] - 2.0 * centre + q[m0]) * sc.pure[0];
        const double d11 = (q[p1] - 2.0 * centre + q[m1]) * sc.pure[1];
        const double d22 = (q[p2] - 2.0 * centre + q[m2]) * sc.pure[2];
        const double d33 = (q[ip] - 2.0 * centre + q[im_]) * sc.pure[3];
        const double d01 = (q[p0 + p1] - q[p0 + m1] - q[m0 + p1] + q[m0 + m1]) * sc.half[0] * sc.half[1];
        const double d23 = (q[p2 + ip] - q[p2 + im_] - q[m2 + ip] + q[m2 + im_]) * sc.half[2] * sc.half[3];
        const double d03 = (q[p0 + ip] - q[p0 + im_] - q[m0 + ip] + q[m0 + im_]) * sc.half[0] * sc.half[3];
        const double d21 = (q[p2 + p1] - q[p2 + m1] - q[m2 + p1] + q[m2 + m1]) * sc.half[2] * sc.half[1];
        const auto ui = static_cast<std::size_t>(i);
        h11[ui] = 0.25 * (d00 + d22);
        h22[ui] = 0.25 * (d11 + d33);
        re[ui] = 0.25 * (d01 + d23);
        im[ui] = 0.25 * (d03 - d21);
      }
      for (; node < stop; ++node) {
        const auto ui = node - line;
        buf[0] = Complex(h11[ui], 0.0);
        buf[1] = Complex(re[ui], im[ui]);
        buf[2] = Complex(re[ui], -im[ui]);
        buf[3] = Complex(h22[ui], 0.0);
        visit(node, std::span<const Complex>(buf.data(), 4));
      }
    }
  });
}

}  // namespace

void for_each_hessian(const ScalarField& phi,
                      const std::function<void(std::size_t, std::span<const Complex>)>& visit) {
  const PeriodicGrid& g = phi.grid();
  const int n = g.n();
  if (n == 2 && g.stride(3) == 1 && g.res(0) > 1 && g.res(1) > 1 && g.res(2) > 1 && g.res(3) > 1) {
    for_each_hessian_2d(phi, visit);
    return;
  }
  const auto count = static_cast<std::size_t>(n * n);
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    std::array<int, kMaxAxes> coords{};
    for (int a = 0; a < g.axes(); ++a) coords[static_cast<std::size_t>(a)] = g.coordinate_index(begin, a);
    std::array<Complex, PeriodicGrid::kMaxDimension * PeriodicGrid::kMaxDimension> buf{};
    NeighbourOffsets off;
    const double* v = phi.values().data();
    const StencilScale scale(g);
    const int last = g.axes() - 1;
    const auto ul = static_cast<std::size_t>(last);
    const auto r_last = static_cast<std::ptrdiff_t>(g.res(last));
    const auto s_last = static_cast<std::ptrdiff_t>(g.stride(last));
    bool fresh = true;
    for (std::size_t node = begin; node < end; ++node) {
      // Only the fastest axis moves within a line, so the other offsets are
      // refreshed once per line.
      if (fresh || coords[ul] == 0) {
        offsets_for(g, std::span<const int>(coords.data(), static_cast<std::size_t>(g.axes())), off);
        fresh = false;
      } else {
        off.plus[ul] = coords[ul] == r_last - 1 ? -(r_last - 1) * s_last : s_last;
        off.minus[ul] = -s_last;
      }
      hessian_with_offsets(scale, v, node, off, buf.data());
      visit(node, std::span<const Complex>(buf.data(), count));
      advance(g, coords);
    }
  });
}

FormField complex_hessian(const ScalarField& phi) {
  FormField out(phi.grid());
  const int n = phi.grid().n();
  for_each_hessian(phi, [&](std::size_t node, std::span<const Complex> h) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.entry(node, j, k) = h[static_cast<std::size_t>(j * n + k)];
  });
  return out;
}

}  // namespace jlab

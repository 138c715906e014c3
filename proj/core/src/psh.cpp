#include "jlab/psh.hpp"

#include "jlab/errors.hpp"
#include "jlab/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace jlab {

namespace {

// Biweight CDF on [-1, 1].
double biweight_cdf(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double s2 = s * s;
  return 0.5 + (15.0 / 16.0) * s * (1.0 - 2.0 * s2 / 3.0 + s2 * s2 / 5.0);
}

}  // namespace

ScalarField max_glue(const ScalarField& u, const ScalarField& v) {
  if (!(u.grid() == v.grid())) {
    throw ArgumentError("max_glue: fields live on different grids");
  }
  ScalarField out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(u[i], v[i]);
  return out;
}

double regularized_max_value(std::span<const double> values, double eps) {
  if (values.empty()) throw ArgumentError("regularized_max: no values");
  if (!(eps > 0.0)) throw ArgumentError("regularized_max: eps must be positive");
  const double top = *std::max_element(values.begin(), values.end());
  const double lo = top - eps;
  const double hi = top + eps;

  // Entries entirely below lo never attain the maximum.
  std::vector<double> active;
  std::vector<double> breaks{lo, hi};
  for (double v : values) {
    if (v + eps > lo) {
      active.push_back(v);
      if (v - eps > lo) breaks.push_back(v - eps);
      if (v + eps < hi) breaks.push_back(v + eps);
    }
  }
  if (active.size() == 1) return top;
  std::sort(breaks.begin(), breaks.end());

  auto tail = [&](double x) {
    double cdf = 1.0;
    for (double v : active) cdf *= biweight_cdf((x - v) / eps);
    return 1.0 - cdf;
  };
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] > breaks[k]) {
      sum += boost::math::quadrature::gauss<double, 20>::integrate(tail, breaks[k], breaks[k + 1]);
    }
  }
  return lo + sum;
}

ScalarField regularized_max(std::span<const ScalarField> fields, std::span<const double> offsets,
                            double eps) {
  if (fields.empty()) throw ArgumentError("regularized_max: empty field list");
  if (offsets.size() != fields.size()) {
    throw ArgumentError("regularized_max: one offset per field is required");
  }
  if (!(eps > 0.0)) throw ArgumentError("regularized_max: eps must be positive");
  const PeriodicGrid& grid = fields.front().grid();
  for (const auto& f : fields) {
    if (!(f.grid() == grid)) throw ArgumentError("regularized_max: fields live on different grids");
  }
  ScalarField out(grid);
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> vals(fields.size());
    for (std::size_t node = begin; node < end; ++node) {
      for (std::size_t i = 0; i < fields.size(); ++i) vals[i] = fields[i][node] + offsets[i];
      out[node] = regularized_max_value(vals, eps);
    }
  });
  return out;
}

double ball_sup(const ScalarField& phi, std::size_t p, double r) {
  const PeriodicGrid& g = phi.grid();
  if (p >= g.size()) throw ArgumentError("ball_sup: node out of range");
  if (!(r >= g.h() * (1.0 - 1e-12))) throw ArgumentError("ball_sup: radius below grid spacing");
  const int axes = g.axes();
  std::vector<int> lo(static_cast<std::size_t>(axes)), hi(lo.size()), k(lo.size());
  for (int a = 0; a < axes; ++a) {
    const int res = g.res(a);
    const int reach = static_cast<int>(std::floor(r / g.spacing(a) + 1e-9));
    lo[a] = -std::min(reach, (res - 1) / 2);
    hi[a] = std::min(reach, res / 2);
    k[a] = lo[a];
  }
  const double r2 = r * r * (1.0 + 1e-12);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    double d2 = 0.0;
    for (int a = 0; a < axes; ++a) {
      const double d = k[a] * g.spacing(a);
      d2 += d * d;
    }
    if (d2 <= r2) {
      std::size_t node = p;
      for (int a = 0; a < axes; ++a) {
        if (k[a] != 0) node = g.shift(node, a, k[a]);
      }
      best = std::max(best, phi[node]);
    }
    int a = axes - 1;
    while (a >= 0 && k[a] == hi[a]) {
      k[a] = lo[a];
      --a;
    }
    if (a < 0) break;
    ++k[a];
  }
  return best;
}

double lelong_ratio(const ScalarField& phi, std::size_t p, double r, double R) {
  if (!(r < R)) throw ArgumentError("lelong_ratio: requires r < R");
  if (!(R < 0.25)) throw ArgumentError("lelong_ratio: requires R < 1/4");
  return (ball_sup(phi, p, R) - ball_sup(phi, p, r)) / (std::log(R) - std::log(r));
}

double default_log_floor(const PeriodicGrid& grid) { return 1e3 * std::abs(std::log(grid.h())); }

ScalarField log_singular_field(const PeriodicGrid& grid, std::size_t p, double gamma, double floor) {
  if (!(gamma >= 0.0)) throw ArgumentError("log_singular_field: gamma must be non-negative");
  ScalarField out(grid);
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const double d = grid.periodic_distance(p, node);
      out[node] = d > 0.0 ? std::max(gamma * std::log(d), -floor) : -floor;
    }
  });
  return out;
}

double log_sup_discretization_bound(const PeriodicGrid& grid, double gamma, double r) {
  const double delta = std::sqrt(static_cast<double>(grid.axes())) * grid.h();
  if (!(r > delta)) throw ArgumentError("log_sup_discretization_bound: radius too small");
  return gamma * std::log(r / (r - delta));
}

}  // namespace jlab

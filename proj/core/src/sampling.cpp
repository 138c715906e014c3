#include "jlab/sampling.hpp"

#include <cmath>
#include <numbers>

namespace jlab {

namespace {

Matrix gaussian(Rng& rng, int n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) m(j, k) = Complex(normal(rng), normal(rng));
  }
  return m;
}

}  // namespace

Matrix random_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, 1.0));
  return qr.householderQ() * Matrix::Identity(n, n);
}

HermitianForm random_positive_definite(Rng& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXcd d(n);
  for (int j = 0; j < n; ++j) d(j) = std::exp(u(rng));
  const Matrix q = random_unitary(rng, n);
  return HermitianForm(q * d.asDiagonal() * q.adjoint());
}

Matrix random_invertible(Rng& rng, int n) {
  return gaussian(rng, n, 0.5) + 2.0 * Matrix::Identity(n, n);
}

Matrix random_hermitian(Rng& rng, int n, double scale) {
  const Matrix g = gaussian(rng, n, scale);
  return 0.5 * (g + g.adjoint());
}

ScalarField random_trig_field(Rng& rng, const PeriodicGrid& grid, int modes, double amplitude,
                              int max_freq) {
  const int axes = grid.axes();
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> freq(0, max_freq);
  struct Mode {
    double a;
    std::vector<int> k;
    std::vector<double> p;
  };
  std::vector<Mode> ms;
  for (int m = 0; m < modes; ++m) {
    Mode mode{amp(rng), std::vector<int>(static_cast<std::size_t>(axes)),
              std::vector<double>(static_cast<std::size_t>(axes))};
    for (int a = 0; a < axes; ++a) {
      mode.k[static_cast<std::size_t>(a)] = grid.res(a) > 1 ? freq(rng) : 0;
      mode.p[static_cast<std::size_t>(a)] = phase(rng);
    }
    ms.push_back(std::move(mode));
  }
  // Per mode and axis the cosine factor only depends on the coordinate index.
  std::vector<std::vector<std::vector<double>>> table(ms.size());
  for (std::size_t m = 0; m < ms.size(); ++m) {
    table[m].resize(static_cast<std::size_t>(axes));
    for (int a = 0; a < axes; ++a) {
      const auto ia = static_cast<std::size_t>(a);
      auto& t = table[m][ia];
      t.assign(static_cast<std::size_t>(grid.res(a)), 1.0);
      if (ms[m].k[ia] == 0) continue;
      for (int i = 0; i < grid.res(a); ++i) {
        t[static_cast<std::size_t>(i)] =
            std::cos(2.0 * std::numbers::pi * ms[m].k[ia] * i * grid.spacing(a) + ms[m].p[ia]);
      }
    }
  }
  ScalarField out(grid);
  auto values = out.values();
  std::vector<int> coords(static_cast<std::size_t>(axes), 0);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    double sum = 0.0;
    for (std::size_t m = 0; m < ms.size(); ++m) {
      double v = ms[m].a;
      for (int a = 0; a < axes; ++a) {
        const auto ia = static_cast<std::size_t>(a);
        v *= table[m][ia][static_cast<std::size_t>(coords[ia])];
      }
      sum += v;
    }
    values[node] = sum;
    for (int a = axes - 1; a >= 0; --a) {
      auto& c = coords[static_cast<std::size_t>(a)];
      if (++c < grid.res(a)) break;
      c = 0;
    }
  }
  return out;
}

}  // namespace jlab

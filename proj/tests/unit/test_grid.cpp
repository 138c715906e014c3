#include "doctest.h"
#include "oracles.hpp"

#include "jlab/errors.hpp"
#include "jlab/grid.hpp"
#include "jlab/sampling.hpp"

#include <cmath>

using namespace jlab;

namespace {

// |z|^2 is not periodic, so the quadratic is checked away from the seam.
double quadratic(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += (v - 0.5) * (v - 0.5);
  return s;
}

bool interior(const PeriodicGrid& g, std::size_t node) {
  for (int a = 0; a < g.axes(); ++a) {
    const int i = g.coordinate_index(node, a);
    if (i == 0 || i == g.res(a) - 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("grid construction and indexing") {
  CHECK_THROWS_AS(PeriodicGrid(0, 8), ArgumentError);
  CHECK_THROWS_AS(PeriodicGrid(5, 8), ArgumentError);
  CHECK_THROWS_AS(PeriodicGrid(1, 4), ArgumentError);
  CHECK_THROWS_AS(PeriodicGrid(2, std::vector<int>{8, 8, 8}), ArgumentError);
  CHECK_THROWS_AS(PeriodicGrid(1, std::vector<int>{1, 1}), ArgumentError);
  const PeriodicGrid g(2, std::vector<int>{8, 1, 1, 16});
  CHECK(g.size() == 128);
  CHECK_FALSE(g.uniform());
  CHECK(g.h() == doctest::Approx(1.0 / 8));
  const std::vector<int> coords{3, 0, 0, 15};
  const auto node = g.index(coords);
  CHECK(g.coordinate_index(node, 3) == 15);
  CHECK(g.coordinate_index(g.shift(node, 3, 1), 3) == 0);
  CHECK(g.shift(node, 1, 1) == node);
}

TEST_CASE("complex hessian of a constant vanishes") {
  const PeriodicGrid g(2, 8);
  const ScalarField phi(g, 3.25);
  const auto h = complex_hessian(phi);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK(std::abs(h.entry(p, j, k)) == 0.0);
}

TEST_CASE("complex hessian of |z|^2 is the identity") {
  for (int n = 1; n <= 2; ++n) {
    const PeriodicGrid g(n, 10);
    const auto phi = ScalarField::sample(g, quadratic);
    const auto h = complex_hessian(phi);
    for (std::size_t p = 0; p < g.size(); ++p) {
      if (!interior(g, p)) continue;
      const Matrix m = h.matrix_at(p);
      CHECK((m - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("complex hessian of cos converges at second order") {
  std::vector<double> errors;
  for (int res : {16, 32, 64}) {
    const PeriodicGrid g(1, res);
    const auto phi = ScalarField::sample(g, [](std::span<const double> x) {
      return std::cos(2 * oracle::kPi * x[0]);
    });
    const auto h = complex_hessian(phi);
    double err = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double exact = -oracle::kPi * oracle::kPi * std::cos(2 * oracle::kPi * g.coordinate(p, 0));
      err = std::max(err, std::abs(h.entry(p, 0, 0) - exact));
    }
    errors.push_back(err);
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    CHECK(errors[i - 1] / errors[i] > 3.9);
    CHECK(errors[i - 1] / errors[i] < 4.1);
  }
}

TEST_CASE("complex hessian matches the analytic form on a trig field") {
  const std::vector<oracle::TrigTerm> terms{
      {0.3, {{false, 0, 1}, {true, 3, 1}}},
      {-0.2, {{true, 1, 2}, {false, 2, 1}}},
  };
  double prev = 0.0;
  for (int res : {16, 32}) {
    const PeriodicGrid g(2, res);
    const auto phi = ScalarField::sample(g, [&](std::span<const double> x) {
      return oracle::trig_value(terms, std::vector<double>(x.begin(), x.end()));
    });
    const auto h = complex_hessian(phi);
    double err = 0.0;
    for (std::size_t p = 0; p < g.size(); p += 7) {
      std::vector<double> x(4);
      for (int a = 0; a < 4; ++a) x[a] = g.coordinate(p, a);
      err = std::max(err, (h.matrix_at(p) - oracle::analytic_ddbar(terms, x, 2)).cwiseAbs().maxCoeff());
    }
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("complex hessian is linear and streams identically") {
  Rng rng(7);
  const PeriodicGrid g(2, std::vector<int>{8, 12, 8, 10});
  const auto u = random_trig_field(rng, g, 4, 1.0, 2);
  const auto v = random_trig_field(rng, g, 4, 1.0, 2);
  ScalarField w(g);
  for (std::size_t p = 0; p < g.size(); ++p) w[p] = 2.0 * u[p] - 0.5 * v[p];
  const auto hu = complex_hessian(u), hv = complex_hessian(v), hw = complex_hessian(w);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        CHECK(std::abs(hw.entry(p, j, k) - (2.0 * hu.entry(p, j, k) - 0.5 * hv.entry(p, j, k))) <
              1e-9);
  for (std::size_t p = 0; p < g.size(); p += 13) {
    const Matrix single = complex_hessian_at(u, p);
    CHECK((single - hu.matrix_at(p)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("streamed hessian on the line fast path matches the per-node stencil") {
  Rng rng(9);
  const PeriodicGrid g(2, 12);
  const auto u = random_trig_field(rng, g, 5, 1.0, 2);
  std::vector<Matrix> streamed(g.size());
  for_each_hessian(u, [&](std::size_t p, std::span<const Complex> e) {
    Matrix m(2, 2);
    m << e[0], e[1], e[2], e[3];
    streamed[p] = m;
  });
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    worst = std::max(worst, (streamed[p] - complex_hessian_at(u, p)).cwiseAbs().maxCoeff());
  CHECK(worst < 1e-10);
}

TEST_CASE("collapsed axes carry no derivative") {
  const PeriodicGrid full(2, 16);
  const PeriodicGrid thin(2, std::vector<int>{16, 1, 1, 16});
  const auto fn = [](std::span<const double> x) {
    return 0.1 * std::cos(2 * oracle::kPi * x[0]) * std::cos(2 * oracle::kPi * x[3]);
  };
  const auto hf = complex_hessian(ScalarField::sample(full, fn));
  const auto ht = complex_hessian(ScalarField::sample(thin, fn));
  for (std::size_t p = 0; p < thin.size(); ++p) {
    const int x1 = thin.coordinate_index(p, 0), y2 = thin.coordinate_index(p, 3);
    const std::vector<int> c{x1, 5, 9, y2};
    const auto q = full.index(c);
    CHECK((hf.matrix_at(q) - ht.matrix_at(p)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("field helpers") {
  const PeriodicGrid g(1, 8);
  ScalarField f = ScalarField::sample(g, [](std::span<const double> x) { return x[0] + 2 * x[1]; });
  CHECK(f.max() == doctest::Approx(3 * 7.0 / 8));
  CHECK(f.min() == 0.0);
  f.normalize_mean();
  CHECK(f.mean_zero());
  CHECK(std::abs(f.mean()) < 1e-15);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(3)), ArgumentError);
  FormField form(g, HermitianForm::identity(1));
  CHECK_THROWS_AS(form.set(0, Matrix::Identity(2, 2)), ArgumentError);
  CHECK_THROWS_AS(form + FormField(PeriodicGrid(1, 9)), ArgumentError);
}

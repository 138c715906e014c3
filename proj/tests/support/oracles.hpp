#pragma once

// Test-side reference computations. None of these call into the library code
// they are used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Coefficients c_0..c_n of det(lambda I - M) by Faddeev-LeVerrier.
inline std::vector<Complex> characteristic_polynomial(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<Complex> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0;
  Matrix mk = Matrix::Zero(n, n);
  const Matrix id = Matrix::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    mk = m * mk + c[static_cast<std::size_t>(n - k + 1)] * id;
    c[static_cast<std::size_t>(n - k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

/// Real parts of the roots of a monic polynomial, via its companion matrix.
inline std::vector<double> companion_roots(const std::vector<Complex>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  Matrix comp = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -coeffs[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Matrix> es(comp);
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i).real());
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// tr_{A|V}(B|V) for V = nu^perp, from an explicit orthonormal basis of V.
inline double explicit_hyperplane_trace(const Matrix& a, const Matrix& b, const Eigen::VectorXcd& nu) {
  const int n = static_cast<int>(a.rows());
  Eigen::HouseholderQR<Matrix> qr(nu);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix basis = q.rightCols(n - 1);
  const Matrix av = basis.adjoint() * a * basis;
  const Matrix bv = basis.adjoint() * b * basis;
  return av.inverse().cwiseProduct(bv.transpose()).sum().real();
}

/// Coefficient on e_{hat k} of w_1 ^ ... ^ w_{n-1} for diagonal (1,1)-forms,
/// summing over every assignment of the n-1 factors to the n-1 remaining indices.
inline std::vector<double> wedge_diagonal(const std::vector<std::vector<double>>& factors, int n) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (j != k) idx.push_back(j);
    do {
      double prod = 1.0;
      for (std::size_t f = 0; f < factors.size(); ++f)
        prod *= factors[f][static_cast<std::size_t>(idx[f])];
      out[static_cast<std::size_t>(k)] += prod;
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return out;
}

/// Smallest coefficient of level w^{n-1} - (n-1) w^{n-2} ^ chi (n >= 2) in a basis
/// where chi = I and w = diag(lambda); the factorials from the wedge are kept.
inline double subsolution_form_min(const std::vector<double>& lambda, double level) {
  const int n = static_cast<int>(lambda.size());
  const std::vector<double> ones(lambda.size(), 1.0);
  std::vector<std::vector<double>> w_only(static_cast<std::size_t>(n - 1), lambda);
  std::vector<std::vector<double>> mixed(static_cast<std::size_t>(n - 1), lambda);
  if (n >= 2) mixed.back() = ones;
  const auto a = wedge_diagonal(w_only, n);
  const auto b = wedge_diagonal(mixed, n);
  double lo = INFINITY;
  for (int k = 0; k < n; ++k)
    lo = std::min(lo, level * a[static_cast<std::size_t>(k)] - (n - 1) * b[static_cast<std::size_t>(k)]);
  return lo;
}

/// Dense bilinear evaluation sum_ij a_i b_j T_ij.
inline double bilinear(const std::vector<std::vector<double>>& t, const std::vector<double>& a,
                       const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * b[j] * t[i][j];
  return s;
}

/// amplitude * prod over factors of cos/sin(2 pi k x_axis), each axis at most once.
struct TrigTerm {
  struct Factor {
    bool is_sin;
    int axis;
    int freq;
  };
  double amplitude;
  std::vector<Factor> factors;

  /// d^{order} of one factor.
  static double factor_derivative(const Factor& f, double x, int order) {
    const double w = 2.0 * kPi * f.freq;
    const double th = w * x;
    const double c = std::cos(th), s = std::sin(th);
    const double vals_cos[3] = {c, -w * s, -w * w * c};
    const double vals_sin[3] = {s, w * c, -w * w * s};
    return f.is_sin ? vals_sin[order] : vals_cos[order];
  }

  /// Mixed partial along axes a and b (pass -1 to skip one or both).
  double partial(const std::vector<double>& x, int a, int b) const {
    const auto touches = [&](int axis) {
      return std::any_of(factors.begin(), factors.end(), [&](const Factor& f) { return f.axis == axis; });
    };
    if ((a >= 0 && !touches(a)) || (b >= 0 && !touches(b))) return 0.0;
    double v = amplitude;
    for (const auto& f : factors) {
      const int order = (a == f.axis) + (b == f.axis);
      v *= factor_derivative(f, x[static_cast<std::size_t>(f.axis)], order);
    }
    return v;
  }
};

/// i d dbar of a sum of trig terms at x, as an n x n matrix.
inline Matrix analytic_ddbar(const std::vector<TrigTerm>& terms, const std::vector<double>& x, int n) {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& t : terms)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double re = 0.25 * (t.partial(x, j, k) + t.partial(x, n + j, n + k));
        const double im = 0.25 * (t.partial(x, j, n + k) - t.partial(x, n + j, k));
        m(j, k) += Complex(re, im);
      }
  return m;
}

inline double trig_value(const std::vector<TrigTerm>& terms, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& t : terms) v += t.partial(x, -1, -1);
  return v;
}

}  // namespace oracle

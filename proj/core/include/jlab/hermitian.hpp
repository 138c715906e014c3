#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace jlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Relative eigenvalue floor used for every positive-definiteness decision:
/// a form is positive-definite when lambda_min > kPositiveFloor * lambda_max.
inline constexpr double kPositiveFloor = 1e-12;

/// Coefficient matrix of a (1,1)-form at a point. Construction enforces
/// Hermitian symmetry (up to a relative 1e-10 mismatch, which is averaged out).
class HermitianForm {
 public:
  HermitianForm() = default;
  explicit HermitianForm(Matrix entries);

  static HermitianForm identity(int dim);
  static HermitianForm diagonal(std::span<const double> values);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int j, int k) const { return entries_(j, k); }

  /// Real eigenvalues, ascending.
  std::vector<double> eigenvalues() const;
  bool is_positive_definite() const;

  HermitianForm operator+(const HermitianForm& other) const;
  HermitianForm operator-(const HermitianForm& other) const;
  HermitianForm scaled(double t) const;
  /// T* A T for an arbitrary square T.
  HermitianForm congruent(const Matrix& t) const;

 private:
  Matrix entries_;
};

/// Eigenvalues sorted ascending.
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

bool is_positive_definite(const Matrix& hermitian);

/// k-th elementary symmetric polynomial; sigma_0 = 1.
double sigma_k(std::span<const double> values, int k);
inline double sigma_k(const Spectrum& spectrum, int k) {
  return sigma_k(std::span<const double>(spectrum.values), k);
}

/// Roots of det(A - lambda B) = 0, computed by reducing B to the identity
/// with its Cholesky factor and diagonalising the resulting Hermitian matrix.
Spectrum generalized_spectrum(const HermitianForm& a, const HermitianForm& b);

/// tr_omega(chi): sum of the eigenvalues of chi relative to omega.
double hessian_quotient(const HermitianForm& omega, const HermitianForm& chi);

/// P_B(A): maximum over hyperplanes V of tr_{A|V}(B|V).
///
/// With lambda_j the eigenvalues of A relative to B this is
/// max_k sum_{j != k} 1/lambda_j, i.e. the reciprocal sum with the largest
/// eigenvalue dropped. For N = 1 the only hyperplane is {0} and the value is 0.
double p_operator(const HermitianForm& a, const HermitianForm& b);

/// P_I(A) from the eigenvalues of A alone.
double p_operator_from_spectrum(std::span<const double> ascending);

/// P_I(A) for a raw Hermitian matrix against the Euclidean form, with a
/// closed-form 2x2 path for grid loops. Throws DomainError when A is not
/// positive-definite.
double p_operator_euclidean(const Matrix& a);
double p_operator_euclidean_2x2(double a11, double a22, Complex a12);

/// level - P_chi(omega). Positive values certify
/// level * omega^{n-1} - (n-1) omega^{n-2} ^ chi > 0 at the point.
double subsolution_margin(const HermitianForm& omega, const HermitianForm& chi,
                          double level);

/// P_{I_2N}([[A, C], [C*, B]]) - P_{I_N}(A - C B^{-1} C*) - tr(B^{-1}).
/// Non-negative whenever the block matrix is positive-definite.
double schur_gap(const Matrix& a, const Matrix& b, const Matrix& c);

}  // namespace jlab

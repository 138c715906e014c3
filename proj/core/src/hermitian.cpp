#include "jlab/hermitian.hpp"

#include "jlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace jlab {

namespace {

std::vector<double> hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

bool spectrum_positive(const std::vector<double>& ascending) {
  if (ascending.empty()) return false;
  const double hi = ascending.back();
  return hi > 0.0 && ascending.front() > kPositiveFloor * hi;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ArgumentError(std::string(what) + ": expected a non-empty square matrix");
  }
}

}  // namespace

HermitianForm::HermitianForm(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "HermitianForm");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double mismatch = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (!(mismatch <= 1e-10 * scale)) {
    throw ArgumentError("HermitianForm: matrix is not Hermitian (mismatch " +
                        std::to_string(mismatch) + ")");
  }
  Matrix sym = 0.5 * (entries_ + entries_.adjoint());
  entries_ = std::move(sym);
}

HermitianForm HermitianForm::identity(int dim) {
  if (dim < 1) throw ArgumentError("HermitianForm::identity: dim must be >= 1");
  return HermitianForm(Matrix::Identity(dim, dim));
}

HermitianForm HermitianForm::diagonal(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("HermitianForm::diagonal: empty");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                          static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
  }
  return HermitianForm(std::move(m));
}

std::vector<double> HermitianForm::eigenvalues() const {
  return hermitian_eigenvalues(entries_);
}

bool HermitianForm::is_positive_definite() const {
  return spectrum_positive(eigenvalues());
}

HermitianForm HermitianForm::operator+(const HermitianForm& other) const {
  if (other.dim() != dim()) throw ArgumentError("HermitianForm: dimension mismatch");
  return HermitianForm(entries_ + other.entries_);
}

HermitianForm HermitianForm::operator-(const HermitianForm& other) const {
  if (other.dim() != dim()) throw ArgumentError("HermitianForm: dimension mismatch");
  return HermitianForm(entries_ - other.entries_);
}

HermitianForm HermitianForm::scaled(double t) const {
  return HermitianForm(entries_ * t);
}

HermitianForm HermitianForm::congruent(const Matrix& t) const {
  if (t.rows() != dim() || t.cols() != dim()) {
    throw ArgumentError("HermitianForm::congruent: dimension mismatch");
  }
  Matrix m = t.adjoint() * entries_ * t;
  return HermitianForm(0.5 * (m + m.adjoint()));
}

bool is_positive_definite(const Matrix& hermitian) {
  return spectrum_positive(hermitian_eigenvalues(hermitian));
}

double sigma_k(std::span<const double> values, int k) {
  const int n = static_cast<int>(values.size());
  if (k < 0 || k > n) {
    throw ArgumentError("sigma_k: k=" + std::to_string(k) + " outside [0, " +
                        std::to_string(n) + "]");
  }
  // e[j] holds sigma_j of the prefix processed so far.
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (double v : values) {
    for (int j = k; j >= 1; --j) e[j] += v * e[j - 1];
  }
  return e[k];
}

Spectrum generalized_spectrum(const HermitianForm& a, const HermitianForm& b) {
  if (a.dim() != b.dim()) {
    throw ArgumentError("generalized_spectrum: dimension mismatch");
  }
  if (!b.is_positive_definite()) {
    throw DomainError("generalized_spectrum: B is not positive-definite");
  }
  Eigen::LLT<Matrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) {
    throw DomainError("generalized_spectrum: Cholesky factorisation of B failed");
  }
  const auto lower = llt.matrixL();
  // C = L^{-1} A L^{-*}
  Matrix x = lower.solve(a.matrix());
  Matrix c = lower.solve(x.adjoint()).adjoint();
  c = 0.5 * (c + c.adjoint()).eval();
  return Spectrum{hermitian_eigenvalues(c)};
}

double hessian_quotient(const HermitianForm& omega, const HermitianForm& chi) {
  const Spectrum mu = generalized_spectrum(chi, omega);
  return std::accumulate(mu.values.begin(), mu.values.end(), 0.0);
}

double p_operator_from_spectrum(std::span<const double> ascending) {
  if (ascending.empty()) throw ArgumentError("p_operator: empty spectrum");
  if (!(ascending.front() > 0.0)) {
    throw DomainError("p_operator: non-positive eigenvalue");
  }
  if (ascending.size() == 1) return 0.0;
  double sum = 0.0;
  // Dropping the largest eigenvalue removes the smallest reciprocal.
  for (std::size_t j = 0; j + 1 < ascending.size(); ++j) sum += 1.0 / ascending[j];
  return sum;
}

double p_operator(const HermitianForm& a, const HermitianForm& b) {
  if (!a.is_positive_definite()) {
    throw DomainError("p_operator: A is not positive-definite");
  }
  const Spectrum lambda = generalized_spectrum(a, b);
  return p_operator_from_spectrum(lambda.values);
}

double p_operator_euclidean_2x2(double a11, double a22, Complex a12) {
  const double mean = 0.5 * (a11 + a22);
  const double half_gap = 0.5 * (a11 - a22);
  const double radius = std::sqrt(half_gap * half_gap + std::norm(a12));
  const double lo = mean - radius;
  const double hi = mean + radius;
  if (!(hi > 0.0 && lo > kPositiveFloor * hi)) {
    throw DomainError("p_operator: form is not positive-definite");
  }
  return 1.0 / lo;
}

double p_operator_euclidean(const Matrix& a) {
  require_square(a, "p_operator_euclidean");
  if (a.rows() == 1) {
    if (!(a(0, 0).real() > 0.0)) throw DomainError("p_operator: non-positive form");
    return 0.0;
  }
  if (a.rows() == 2) {
    return p_operator_euclidean_2x2(a(0, 0).real(), a(1, 1).real(), a(0, 1));
  }
  const auto ev = hermitian_eigenvalues(0.5 * (a + a.adjoint()));
  if (!spectrum_positive(ev)) throw DomainError("p_operator: form is not positive-definite");
  return p_operator_from_spectrum(ev);
}

double subsolution_margin(const HermitianForm& omega, const HermitianForm& chi,
                          double level) {
  if (!(level > 0.0)) throw ArgumentError("subsolution_margin: level must be > 0");
  return level - p_operator(omega, chi);
}

double schur_gap(const Matrix& a, const Matrix& b, const Matrix& c) {
  require_square(a, "schur_gap(A)");
  const Eigen::Index n = a.rows();
  if (b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n) {
    throw ArgumentError("schur_gap: A, B, C must share one dimension");
  }
  Matrix block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, n) = c;
  block.bottomLeftCorner(n, n) = c.adjoint();
  block.bottomRightCorner(n, n) = b;
  const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
  if ((block - block.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError("schur_gap: block matrix is not Hermitian");
  }
  const auto block_ev = hermitian_eigenvalues(0.5 * (block + block.adjoint()));
  if (!spectrum_positive(block_ev)) {
    throw DomainError("schur_gap: block matrix is not positive-definite");
  }
  Eigen::LLT<Matrix> b_llt(b);
  Matrix schur = a - c * b_llt.solve(c.adjoint());
  schur = 0.5 * (schur + schur.adjoint()).eval();
  const auto schur_ev = hermitian_eigenvalues(schur);
  const auto b_ev = hermitian_eigenvalues(0.5 * (b + b.adjoint()));
  double trace_b_inverse = 0.0;
  for (double v : b_ev) trace_b_inverse += 1.0 / v;
  return p_operator_from_spectrum(block_ev) - p_operator_from_spectrum(schur_ev) -
         trace_b_inverse;
}

}  // namespace jlab

#pragma once

#include "jlab/grid.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace jlab {

/// Radial smoothing profile rho on [0, 1] for charts of complex dimension m,
/// normalised so that the integral of rho(|y|) over the unit ball of C^m is 1.
///
/// The supplied raw profile must be non-negative, vanish on [1, inf) and be
/// constant on [0, 1/2]; construction checks these on a sample mesh and
/// computes the normalising constant by adaptive quadrature.
class MollifierKernel {
 public:
  using Profile = std::function<double(double)>;

  MollifierKernel(Profile raw_profile, int m);

  /// C exp(-1 / (1 - (2t - 1)^2)) on [1/2, 1), continued by its value at 1/2
  /// on [0, 1/2].
  static MollifierKernel standard(int m);

  int m() const { return m_; }
  /// Normalised profile value.
  double rho(double t) const;
  /// Integral of the raw profile over the unit ball (the normalising divisor).
  double raw_mass() const { return raw_mass_; }
  /// Integral of the normalised profile over the unit ball; 1 up to quadrature.
  double mass() const;

 private:
  Profile raw_;
  int m_;
  double raw_mass_ = 0.0;
};

/// Surface area of the unit sphere in R^{2m}.
double unit_sphere_area(int m);

/// eta = 2^{2m} - |S^{2m-1}| * int_0^1 t^{2m-1} log(t) rho(t) dt.
double eta_constant(const MollifierKernel& kernel);

/// One stencil entry of a discrete mollifier: a node offset and its weight.
struct StencilWeight {
  std::vector<int> offset;
  double weight;
};

/// Discrete mollifier on a uniform grid: weights rho(|y| / r) over offsets
/// with |y| < r, rescaled to sum to one.
std::vector<StencilWeight> mollifier_stencil(const PeriodicGrid& grid, double r,
                                             const MollifierKernel& kernel);

enum class ConvolutionMethod {
  kAuto,      ///< direct below a work threshold, spectral above
  kDirect,    ///< explicit summation over the stencil
  kSpectral,  ///< FFT-based circular convolution (same result up to rounding)
};

/// Discrete convolution with r^{-2m} rho(|y| / r). Requires a uniform grid,
/// kernel.m() == grid.n() and 0 < r < 1/4.
ScalarField mollify(const ScalarField& f, double r, const MollifierKernel& kernel,
                    ConvolutionMethod method = ConvolutionMethod::kAuto);
FormField mollify(const FormField& f, double r, const MollifierKernel& kernel,
                  ConvolutionMethod method = ConvolutionMethod::kAuto);

/// Mollified value at a single node by direct summation.
double mollify_at(const ScalarField& f, std::size_t node, double r, const MollifierKernel& kernel);

/// Spectral mollifier that keeps FFT plans and kernel transforms alive across
/// calls on one grid. Not thread-safe; use one instance per thread.
class Mollifier {
 public:
  Mollifier(PeriodicGrid grid, MollifierKernel kernel);
  ~Mollifier();
  Mollifier(const Mollifier&) = delete;
  Mollifier& operator=(const Mollifier&) = delete;

  /// Transforms `f` once; subsequent apply_loaded() calls reuse the spectrum.
  void load(const ScalarField& f);
  ScalarField apply_loaded(double r);
  ScalarField apply(const ScalarField& f, double r);

  /// Raw-array variants of load() / apply_loaded() for node-major buffers.
  void load_values(std::span<const double> values);
  void apply_into(double r, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace jlab

#include "jlab/mollify.hpp"

#include "jlab/errors.hpp"
#include "jlab/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace jlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

// Radial integral of g over [0, 1], split at the plateau edge.
template <class F>
double radial_integral(F g) {
  return integrate(g, 0.0, 0.5) + integrate(g, 0.5, 1.0);
}

void check_radius(const PeriodicGrid& grid, double r, const MollifierKernel& kernel) {
  grid.uniform_res();
  if (kernel.m() != grid.n()) {
    throw ArgumentError("mollify: kernel dimension does not match the grid");
  }
  if (!(r > 0.0 && r < 0.25)) {
    throw ArgumentError("mollify: radius " + std::to_string(r) + " outside (0, 1/4)");
  }
}

// Circular convolution of `in` with the stencil by direct summation.
void convolve_direct(const PeriodicGrid& grid, const std::vector<StencilWeight>& stencil,
                     std::span<const double> in, std::span<double> out) {
  const int axes = grid.axes();
  const int res = grid.uniform_res();
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<int> coords(static_cast<std::size_t>(axes));
    for (std::size_t node = begin; node < end; ++node) {
      for (int a = 0; a < axes; ++a) coords[static_cast<std::size_t>(a)] = grid.coordinate_index(node, a);
      double acc = 0.0;
      for (const auto& s : stencil) {
        std::size_t idx = 0;
        for (int a = 0; a < axes; ++a) {
          int c = coords[static_cast<std::size_t>(a)] + s.offset[static_cast<std::size_t>(a)];
          if (c < 0) c += res;
          else if (c >= res) c -= res;
          idx += static_cast<std::size_t>(c) * grid.stride(a);
        }
        acc += s.weight * in[idx];
      }
      out[node] = acc;
    }
  });
}

}  // namespace

MollifierKernel::MollifierKernel(Profile raw_profile, int m) : raw_(std::move(raw_profile)), m_(m) {
  if (m < 1) throw ArgumentError("MollifierKernel: m must be >= 1");
  if (!raw_) throw ArgumentError("MollifierKernel: empty profile");
  const double plateau = raw_(0.0);
  for (int i = 0; i <= 2000; ++i) {
    const double t = i / 2000.0;
    const double v = raw_(t);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("MollifierKernel: profile negative or non-finite at t=" + std::to_string(t));
    }
    if (t <= 0.5 && std::abs(v - plateau) > 1e-12 * std::max(1.0, std::abs(plateau))) {
      throw ValidationError("MollifierKernel: profile is not constant on [0, 1/2]");
    }
  }
  for (double t : {1.0, 1.25, 2.0}) {
    if (raw_(t) != 0.0) throw ValidationError("MollifierKernel: profile support exceeds [0, 1]");
  }
  const int power = 2 * m - 1;
  raw_mass_ = unit_sphere_area(m) *
              radial_integral([&](double t) { return std::pow(t, power) * raw_(t); });
  if (!(raw_mass_ > 0.0)) throw ValidationError("MollifierKernel: profile has zero mass");
}

MollifierKernel MollifierKernel::standard(int m) {
  return MollifierKernel(
      [](double t) {
        if (t >= 1.0) return 0.0;
        if (t <= 0.5) return std::exp(-1.0);
        const double s = 2.0 * t - 1.0;
        return std::exp(-1.0 / (1.0 - s * s));
      },
      m);
}

double MollifierKernel::rho(double t) const {
  if (t < 0.0 || t >= 1.0) return 0.0;
  return raw_(t) / raw_mass_;
}

double MollifierKernel::mass() const {
  const int power = 2 * m_ - 1;
  return unit_sphere_area(m_) * radial_integral([&](double t) { return std::pow(t, power) * rho(t); });
}

double unit_sphere_area(int m) {
  // |S^{2m-1}| = 2 pi^m / (m-1)!
  return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(static_cast<double>(m));
}

double eta_constant(const MollifierKernel& kernel) {
  const int m = kernel.m();
  const int power = 2 * m - 1;
  const double log_moment = radial_integral([&](double t) {
    return t > 0.0 ? std::pow(t, power) * std::log(t) * kernel.rho(t) : 0.0;
  });
  return std::pow(2.0, 2 * m) - unit_sphere_area(m) * log_moment;
}

std::vector<StencilWeight> mollifier_stencil(const PeriodicGrid& grid, double r,
                                             const MollifierKernel& kernel) {
  check_radius(grid, r, kernel);
  const int res = grid.uniform_res();
  const double h = 1.0 / res;
  const int axes = grid.axes();
  const int reach = static_cast<int>(std::floor(r / h));
  std::vector<StencilWeight> stencil;
  std::vector<int> offset(static_cast<std::size_t>(axes), -reach);
  double total = 0.0;
  while (true) {
    double dist2 = 0.0;
    for (int o : offset) dist2 += (o * h) * (o * h);
    if (dist2 < r * r) {
      const double w = kernel.rho(std::sqrt(dist2) / r);
      if (w > 0.0) {
        stencil.push_back({offset, w});
        total += w;
      }
    }
    int a = axes - 1;
    while (a >= 0 && ++offset[static_cast<std::size_t>(a)] > reach) {
      offset[static_cast<std::size_t>(a)] = -reach;
      --a;
    }
    if (a < 0) break;
  }
  for (auto& s : stencil) s.weight /= total;
  return stencil;
}

struct Mollifier::Impl {
  PeriodicGrid grid;
  MollifierKernel kernel;
  std::size_t real_size = 0;
  std::size_t spectral_size = 0;
  double* real_buf = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_complex* work = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::map<double, std::vector<double>> kernel_spectra;
  bool loaded = false;

  Impl(PeriodicGrid g, MollifierKernel k) : grid(std::move(g)), kernel(std::move(k)) {
    const int res = grid.uniform_res();
    if (kernel.m() != grid.n()) throw ArgumentError("Mollifier: kernel dimension mismatch");
    const int axes = grid.axes();
    real_size = grid.size();
    spectral_size = real_size / static_cast<std::size_t>(res) * static_cast<std::size_t>(res / 2 + 1);
    real_buf = fftw_alloc_real(real_size);
    spectrum = fftw_alloc_complex(spectral_size);
    work = fftw_alloc_complex(spectral_size);
    std::vector<int> dims(static_cast<std::size_t>(axes), res);
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c(axes, dims.data(), real_buf, spectrum, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r(axes, dims.data(), work, real_buf, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real_buf);
    fftw_free(spectrum);
    fftw_free(work);
  }

  const std::vector<double>& kernel_spectrum(double r) {
    auto it = kernel_spectra.find(r);
    if (it != kernel_spectra.end()) return it->second;
    const auto stencil = mollifier_stencil(grid, r, kernel);
    std::fill(real_buf, real_buf + real_size, 0.0);
    const int res = grid.uniform_res();
    for (const auto& s : stencil) {
      std::size_t idx = 0;
      for (int a = 0; a < grid.axes(); ++a) {
        int c = s.offset[static_cast<std::size_t>(a)] % res;
        if (c < 0) c += res;
        idx += static_cast<std::size_t>(c) * grid.stride(a);
      }
      real_buf[idx] += s.weight;
    }
    fftw_execute_dft_r2c(forward, real_buf, work);
    // The stencil is symmetric under y -> -y, so its transform is real.
    std::vector<double> re(spectral_size);
    for (std::size_t i = 0; i < spectral_size; ++i) re[i] = work[i][0];
    return kernel_spectra.emplace(r, std::move(re)).first->second;
  }

  void load(std::span<const double> values) {
    std::copy(values.begin(), values.end(), real_buf);
    fftw_execute_dft_r2c(forward, real_buf, spectrum);
    loaded = true;
  }

  void apply(double r, std::span<double> out) {
    const auto& k = kernel_spectrum(r);
    const double scale = 1.0 / static_cast<double>(real_size);
    for (std::size_t i = 0; i < spectral_size; ++i) {
      work[i][0] = spectrum[i][0] * k[i] * scale;
      work[i][1] = spectrum[i][1] * k[i] * scale;
    }
    fftw_execute_dft_c2r(backward, work, real_buf);
    std::copy(real_buf, real_buf + real_size, out.begin());
  }
};

Mollifier::Mollifier(PeriodicGrid grid, MollifierKernel kernel)
    : impl_(std::make_unique<Impl>(std::move(grid), std::move(kernel))) {}

Mollifier::~Mollifier() = default;

void Mollifier::load(const ScalarField& f) {
  if (!(f.grid() == impl_->grid)) throw ArgumentError("Mollifier: grid mismatch");
  impl_->load(f.values());
}

ScalarField Mollifier::apply_loaded(double r) {
  if (!impl_->loaded) throw ArgumentError("Mollifier: no field loaded");
  check_radius(impl_->grid, r, impl_->kernel);
  ScalarField out(impl_->grid);
  impl_->apply(r, out.values());
  return out;
}

ScalarField Mollifier::apply(const ScalarField& f, double r) {
  load(f);
  return apply_loaded(r);
}

void Mollifier::load_values(std::span<const double> values) {
  if (values.size() != impl_->real_size) throw ArgumentError("Mollifier: buffer size mismatch");
  impl_->load(values);
}

void Mollifier::apply_into(double r, std::span<double> out) {
  if (!impl_->loaded) throw ArgumentError("Mollifier: no field loaded");
  if (out.size() != impl_->real_size) throw ArgumentError("Mollifier: buffer size mismatch");
  check_radius(impl_->grid, r, impl_->kernel);
  impl_->apply(r, out);
}

namespace {

bool prefer_direct(const PeriodicGrid& grid, std::size_t stencil_size, ConvolutionMethod method) {
  switch (method) {
    case ConvolutionMethod::kDirect: return true;
    case ConvolutionMethod::kSpectral: return false;
    case ConvolutionMethod::kAuto: break;
  }
  return static_cast<double>(stencil_size) * static_cast<double>(grid.size()) <= 4e6;
}

void convolve(const PeriodicGrid& grid, double r, const MollifierKernel& kernel,
              ConvolutionMethod method, const std::vector<std::span<const double>>& inputs,
              const std::vector<std::span<double>>& outputs) {
  const auto stencil = mollifier_stencil(grid, r, kernel);
  if (prefer_direct(grid, stencil.size(), method)) {
    for (std::size_t i = 0; i < inputs.size(); ++i) convolve_direct(grid, stencil, inputs[i], outputs[i]);
    return;
  }
  Mollifier mollifier(grid, kernel);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    mollifier.load_values(inputs[i]);
    mollifier.apply_into(r, outputs[i]);
  }
}

}  // namespace

ScalarField mollify(const ScalarField& f, double r, const MollifierKernel& kernel,
                    ConvolutionMethod method) {
  check_radius(f.grid(), r, kernel);
  ScalarField out(f.grid());
  convolve(f.grid(), r, kernel, method, {f.values()}, {out.values()});
  return out;
}

FormField mollify(const FormField& f, double r, const MollifierKernel& kernel,
                  ConvolutionMethod method) {
  const PeriodicGrid& grid = f.grid();
  check_radius(grid, r, kernel);
  const int n = f.dim();
  const std::size_t size = grid.size();
  // Real and imaginary parts of the upper triangle, convolved independently.
  std::vector<std::vector<double>> in;
  std::vector<std::pair<int, int>> slots;
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      std::vector<double> re(size), im(size);
      for (std::size_t node = 0; node < size; ++node) {
        re[node] = f.entry(node, j, k).real();
        im[node] = f.entry(node, j, k).imag();
      }
      in.push_back(std::move(re));
      in.push_back(std::move(im));
      slots.emplace_back(j, k);
    }
  }
  std::vector<std::vector<double>> out(in.size(), std::vector<double>(size));
  std::vector<std::span<const double>> in_spans(in.begin(), in.end());
  std::vector<std::span<double>> out_spans(out.begin(), out.end());
  convolve(grid, r, kernel, method, in_spans, out_spans);
  FormField result(grid);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto [j, k] = slots[s];
    for (std::size_t node = 0; node < size; ++node) {
      const Complex v(out[2 * s][node], j == k ? 0.0 : out[2 * s + 1][node]);
      result.entry(node, j, k) = v;
      result.entry(node, k, j) = std::conj(v);
    }
  }
  return result;
}

double mollify_at(const ScalarField& f, std::size_t node, double r, const MollifierKernel& kernel) {
  const PeriodicGrid& grid = f.grid();
  const auto stencil = mollifier_stencil(grid, r, kernel);
  std::vector<int> coords(static_cast<std::size_t>(grid.axes()));
  for (int a = 0; a < grid.axes(); ++a) coords[static_cast<std::size_t>(a)] = grid.coordinate_index(node, a);
  std::vector<int> shifted(coords.size());
  double acc = 0.0;
  for (const auto& s : stencil) {
    for (std::size_t a = 0; a < coords.size(); ++a) shifted[a] = coords[a] + s.offset[a];
    acc += s.weight * f[grid.index(shifted)];
  }
  return acc;
}

}  // namespace jlab

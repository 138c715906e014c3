#pragma once

#include "jlab/grid.hpp"
#include "jlab/hermitian.hpp"

#include <random>

namespace jlab {

using Rng = std::mt19937_64;

/// Haar-like unitary from the QR factorisation of a complex Gaussian matrix.
Matrix random_unitary(Rng& rng, int n);

/// U diag(lambda) U* with lambda log-uniform in [lo, hi].
HermitianForm random_positive_definite(Rng& rng, int n, double lo = 0.1, double hi = 10.0);

/// Complex Gaussian matrix shifted by 2 I (invertible with probability one).
Matrix random_invertible(Rng& rng, int n);

/// Random Hermitian matrix with Gaussian entries of the given scale.
Matrix random_hermitian(Rng& rng, int n, double scale = 1.0);

/// sum over `modes` random low-frequency products of cosines with phases,
/// each with amplitude uniform in [-amplitude, amplitude] and frequencies in
/// {0, ..., max_freq} per axis.
ScalarField random_trig_field(Rng& rng, const PeriodicGrid& grid, int modes, double amplitude,
                              int max_freq = 1);

}  // namespace jlab

#pragma once

#include "jlab/grid.hpp"

#include <span>
#include <vector>

namespace jlab {

/// Pointwise maximum of two fields on the same grid.
ScalarField max_glue(const ScalarField& u, const ScalarField& v);

/// Smooth maximum: at each node the expectation of max_i(f_i + offset_i + s_i)
/// with independent shifts s_i drawn from the biweight density
/// (15/16)(1 - (s/eps)^2)^2 / eps on [-eps, eps].
///
/// The result is convex and non-decreasing in every f_i, lies in
/// [max_i(f_i + offset_i), max_i(f_i + offset_i) + eps], and equals the
/// dominant field wherever it exceeds all others by more than 2 eps.
ScalarField regularized_max(std::span<const ScalarField> fields, std::span<const double> offsets,
                            double eps);

/// Scalar kernel of regularized_max for one node.
double regularized_max_value(std::span<const double> values, double eps);

/// max of phi over nodes within periodic Euclidean distance r of p.
double ball_sup(const ScalarField& phi, std::size_t p, double r);

/// (ball_sup(phi, p, R) - ball_sup(phi, p, r)) / (log R - log r).
double lelong_ratio(const ScalarField& phi, std::size_t p, double r, double R);

/// Default floor magnitude M = 1e3 |log h| for log-singular samples.
double default_log_floor(const PeriodicGrid& grid);

/// max(gamma log|z - p|, -floor) using the periodic distance to node p.
ScalarField log_singular_field(const PeriodicGrid& grid, std::size_t p, double gamma, double floor);

/// Worst-case error of a discrete ball supremum of gamma log|z - p| at radius r:
/// gamma * log(r / (r - sqrt(2n) h)).
double log_sup_discretization_bound(const PeriodicGrid& grid, double gamma, double r);

}  // namespace jlab

#pragma once

#include "jlab/hermitian.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace jlab::props {

using nlohmann::json;

/// Randomised property suites shared by `jlab props` and the acceptance run.
///
/// Every instance is generated from its own seed, derived from the master
/// seed, the suite name and the instance index, and reduces to a single
/// statistic. An instance violates its property when statistic > tolerance,
/// so a stored (seed, parameters, tolerance) triple can be replayed.

struct Sizes {
  int p_operator_instances = 1000;
  int hyperplanes = 10000;
  int convexity_instances = 1000;
  int schur_instances = 1000;
  int gluing_pairs = 50;
  int gluing_res = 64;
  std::vector<double> gluing_radii = {6, 8, 10, 12, 14};  // in units of h
  double gluing_amplitude = 0.01;
  int gluing_modes = 4;
  int lelong_instances = 100;
};

struct Tolerances {
  double dominance = 1e-9;
  double sampled_sup = 1e-3;
  double convexity = 1e-9;
  double schur = 1e-9;
  double gluing = 1e-3;
  /// Extra slack on top of the per-instance discretisation bounds.
  double lelong = 1e-12;
};

json sizes_to_json(const Sizes& s);
json tolerances_to_json(const Tolerances& t);

struct Violation {
  std::string suite;
  std::uint64_t seed = 0;
  json params;
  double statistic = 0.0;
  double tolerance = 0.0;
  /// Human-readable description of the instance (matrices, fields summary).
  json instance;
};

json violation_to_json(const Violation& v);

struct SuiteResult {
  std::string name;
  std::string property;
  int instances = 0;
  int violations = 0;
  /// Largest statistic over all instances.
  double worst = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::vector<Violation> violating;
};

/// Result payload without timing (the determinism contract covers this part).
json suite_to_json(const SuiteResult& r, bool include_timing);

std::vector<std::string> suite_names();

/// Runs one suite by name; throws ArgumentError for an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t master_seed, const Sizes& sizes,
                      const Tolerances& tolerances);

/// Seed of instance `index` of `suite`.
std::uint64_t instance_seed(std::uint64_t master_seed, const std::string& suite, int index);

/// Re-evaluates the statistic of a serialised instance.
double evaluate_instance(const std::string& suite, std::uint64_t seed, const json& params);

struct ReplayOutcome {
  double statistic = 0.0;
  double tolerance = 0.0;
  bool violated = false;
  /// Recomputed statistic equals the stored one (up to 1e-12 relative).
  bool reproduced = false;
};

ReplayOutcome replay(const json& record);

// Oracles used by the suites.

/// tr_{A|V}(B|V) for the hyperplane V = nu^perp, computed from the inverse of
/// the compression: with M = A^{-1}, (A|V)^{-1} = M - M nu nu* M / (nu* M nu).
double hyperplane_trace(const Matrix& a_inverse, const Matrix& b, const Eigen::VectorXcd& nu);

/// Largest sampled hyperplane trace over `samples` uniformly random normals,
/// optionally refined by a shrinking random local search around the best one.
double sampled_hyperplane_sup(const Matrix& a, const Matrix& b, int samples, bool refine,
                              std::uint64_t seed);

}  // namespace jlab::props

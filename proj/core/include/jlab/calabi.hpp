#pragma once

#include "jlab/intersection.hpp"
#include "jlab/jflow.hpp"
#include "jlab/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jlab {

/// Class data of a Calabi-symmetric pair on the Hirzebruch surface F_a.
///
/// With E the curve of self-intersection -a and F a fiber:
///   alpha . F = m_alpha, alpha . E = s, alpha^2 = 2 s m_alpha + a m_alpha^2,
/// and likewise for beta with (t, m_beta). In the toric basis (D_2, D_3) of
/// F_a, where D_2 is a fiber and D_3 the section at infinity, alpha = (s, m_alpha).
struct CalabiProblem {
  int a = 1;
  Rational s;
  Rational t;
  Rational m_alpha;
  Rational m_beta;

  /// Throws ArgumentError unless a >= 1, s, m_alpha, m_beta > 0 and t >= 0.
  void validate() const;
  /// (s m_beta + t m_alpha + a m_alpha m_beta) / (2 s m_alpha + a m_alpha^2).
  Rational c() const;
  ClassVector alpha_class() const;
  ClassVector beta_class() const;
};

/// G(f) = [(c/a)((s + a f)^2 - s^2) - t f] / (s + a f) and its derivative
/// G'(f) = c + s (c s - t) / (s + a f)^2.
double calabi_g(const CalabiProblem& p, double f);
double calabi_g_prime(const CalabiProblem& p, double f);
/// Exact G' at an endpoint f in {0, m_alpha}.
Rational calabi_g_prime_exact(const CalabiProblem& p, const Rational& f);

/// Gate (i): (c/a)((s + a m_alpha)^2 - s^2) - t m_alpha - (s + a m_alpha) m_beta,
/// exactly. Zero on every valid problem.
Rational endpoint_identity_defect(const CalabiProblem& p);

enum class CalabiClass { kSolvable, kBoundary, kNotSolvable };
const char* to_string(CalabiClass c);

struct ProfileRow {
  double rho;
  double f;
  double g;
  double residual;
  double margin;
};

struct ChiProfile {
  std::function<double(double)> g;
  std::function<double(double)> g_prime;
};

/// m_beta e^rho / (1 + e^rho).
ChiProfile logistic_profile(const CalabiProblem& p);

struct CalabiOptions {
  double rho_min = -12.0;
  double rho_max = 12.0;
  double rho_step = 0.005;
  /// |min G'| below this is classified as boundary.
  double boundary_tol = 1e-12;
  double first_integral_tol = 1e-10;
  double ode_tol = 1e-8;
};

struct CalabiReport {
  CalabiClass classification = CalabiClass::kNotSolvable;
  SolveReport solve;
  Rational c;
  double min_g_prime = 0.0;
  /// Location in [0, m_alpha] of min G'.
  double argmin_f = 0.0;
  double endpoint_defect = 0.0;
  double max_first_integral = 0.0;
  double max_ode_residual = 0.0;
  bool gates_passed = false;
  std::vector<ProfileRow> profile;
};

/// Solves the reduced equation (s + a f) g' + (t + a g) f' = 2c (s + a f) f'
/// for the momentum profile f given g. Solvable iff G is strictly increasing
/// on [0, m_alpha]; then f = G^{-1}(g) is tabulated on the rho mesh together
/// with the first-integral and ODE residuals and the pointwise margin
/// 2c - P_chi(omega).
CalabiReport calabi_solve(const CalabiProblem& problem,
                          const std::optional<ChiProfile>& profile = std::nullopt,
                          const CalabiOptions& options = {});

struct DictionaryCheck {
  bool passed = false;
  std::string detail;
};

/// Gate (iii): pairings of alpha on the toric model of F_a match the class
/// dictionary and c equals the toric normalisation ratio, exactly.
DictionaryCheck validate_dictionary(const CalabiProblem& problem);

struct SweepConfig {
  Rational s = 1;
  Rational m_alpha = 1;
  std::vector<Rational> t;
  std::vector<Rational> m_beta;
  std::vector<int> a;

  /// t in {1/2, ..., 5}, m_beta in {1/4, ..., 5/2}, a in {1, 2, 3}.
  static SweepConfig standard();
};

struct SweepEntry {
  CalabiProblem problem;
  CalabiClass calabi = CalabiClass::kNotSolvable;
  Classification intersection = Classification::kFails;
  bool agree = false;
  double min_g_prime = 0.0;
  std::optional<std::string> witness;
  double max_first_integral = 0.0;
  double max_ode_residual = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  int agreements = 0;
  int boundary = 0;
  int non_boundary = 0;
  int non_boundary_agreements = 0;
  double max_endpoint_defect = 0.0;
  double max_first_integral = 0.0;
  double max_ode_residual = 0.0;
  bool dictionary_passed = false;
  bool gates_passed = false;
};

/// Runs calabi_solve and j_verdict on the toric F_a model for every grid
/// point. The dictionary gate runs first on three instances and throws
/// ValidationError on failure.
SweepResult verdict_sweep(const SweepConfig& config, const CalabiOptions& options = {});

/// Calabi classes and slope classes that should coincide.
bool verdicts_agree(CalabiClass calabi, Classification intersection);

}  // namespace jlab

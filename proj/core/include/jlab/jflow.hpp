#pragma once

#include "jlab/grid.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jlab {

/// constant + i d dbar(potential) by the discrete complex Hessian.
FormField background_form(const PeriodicGrid& grid, const HermitianForm& constant,
                          const ScalarField* potential = nullptr);

/// -1 / (2 n^{n+1} c^{n-1}).
double twist_lower_bound(int n, double c);

/// (integral F chi^n + integral chi ^ omega^{n-1}) / integral omega^n by
/// node-sum quadrature.
double compute_c(const FormField& omega, const FormField& chi, const ScalarField* twist = nullptr);

/// Data of c omega^n = chi ^ omega^{n-1} + F chi^n on the torus, omega in the
/// class of omega0.
class TorusProblem {
 public:
  /// Validates positivity of omega0 and chi at every node, the twist lower
  /// bound and, when both twist and c are supplied, the integral
  /// compatibility condition (relative tolerance compat_tol).
  TorusProblem(FormField omega0, FormField chi, std::optional<ScalarField> twist = std::nullopt,
               std::optional<double> c = std::nullopt, double compat_tol = 1e-8);

  const PeriodicGrid& grid() const { return omega0_.grid(); }
  int n() const { return omega0_.grid().n(); }
  const FormField& omega0() const { return omega0_; }
  const FormField& chi() const { return chi_; }
  const std::optional<ScalarField>& twist() const { return twist_; }
  double c() const { return c_; }

 private:
  FormField omega0_;
  FormField chi_;
  std::optional<ScalarField> twist_;
  double c_ = 0.0;
};

double compute_c(const TorusProblem& problem);

struct FlowState {
  ScalarField phi;
  double time = 0.0;
  std::vector<std::pair<double, double>> residual_history;
};

enum class SolveVerdict { kSolved, kDiverged, kNotSolvable };
const char* to_string(SolveVerdict v);

struct SolveReport {
  SolveVerdict verdict = SolveVerdict::kDiverged;
  std::string reason;
  double sup_residual = 0.0;
  /// min over nodes of n c - P_chi(omega).
  double min_margin = 0.0;
  std::size_t min_margin_node = 0;
  int iterations = 0;
  double wall_clock = 0.0;
  double final_dt = 0.0;
  /// Quadrature constant of the final representative (the discrete plateau
  /// value of omega^{n-1}^chi / omega^n) and its distance from c.
  double c_final = 0.0;
  double class_drift = 0.0;
};

struct FlowOptions {
  /// Fixed step; 0 selects 0.5 h^2 / max lambda_max(omega^{-1} chi omega^{-1}).
  double dt = 0.0;
  double tol = 1e-8;
  int max_steps = 200000;
  double dt_min = 1e-12;
  /// Record (time, residual) every this many steps.
  int history_every = 1;
};

/// Explicit Euler J-flow phi <- phi + dt (c - (chi^omega^{n-1} + F chi^n)/omega^n)
/// with the mean removed after every step. The residual is the sup-norm
/// distance of the flow speed from its omega^n-weighted mean.
std::pair<FlowState, SolveReport> jflow_run(const TorusProblem& problem,
                                            const FlowOptions& options = {},
                                            const ScalarField* initial = nullptr);

/// c omega^n - chi ^ omega^{n-1} - F chi^n at each node, in coefficients of
/// the Euclidean volume form (the common factor n! is divided out):
/// c det(omega) - det(omega) tr_omega(chi) / n - F det(chi).
ScalarField twisted_residual(const FlowState& state, const TorusProblem& problem);
ScalarField twisted_residual(const ScalarField& phi, const TorusProblem& problem);

/// F making omega (given as a form field) an exact solution at level c:
/// F = (c det omega - det omega tr_omega chi / n) / det chi.
ScalarField manufactured_twist(const FormField& omega, const FormField& chi, double c);

/// n c - P_chi(omega0 + i d dbar phi) at every node.
ScalarField subsolution_margins(const ScalarField& phi, const TorusProblem& problem);

}  // namespace jlab

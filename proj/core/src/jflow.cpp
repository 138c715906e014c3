#include "jlab/jflow.hpp"

#include "jlab/errors.hpp"
#include "jlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>

namespace jlab {

namespace {

// Pointwise quantities of omega against chi.
struct NodeEval {
  bool positive = false;
  double det_omega = 0.0;
  double trace = 0.0;      // tr_omega chi
  double lambda_max = 0.0; // largest eigenvalue of omega^{-1} chi omega^{-1}
};

Matrix omega_at(const FormField& omega0, std::size_t node, std::span<const Complex> h) {
  const int n = omega0.dim();
  Matrix w(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) w(j, k) = omega0.entry(node, j, k) + h[static_cast<std::size_t>(j * n + k)];
  }
  return w;
}

NodeEval evaluate(const Matrix& w, const Matrix& chi, bool want_lambda) {
  NodeEval e;
  const int n = static_cast<int>(w.rows());
  if (n == 1) {
    const double a = w(0, 0).real();
    e.positive = a > 0.0;
    if (!e.positive) return e;
    e.det_omega = a;
    e.trace = chi(0, 0).real() / a;
    e.lambda_max = chi(0, 0).real() / (a * a);
    return e;
  }
  if (n == 2) {
    const double a = w(0, 0).real();
    const double d = w(1, 1).real();
    const Complex b = w(0, 1);
    const double det = a * d - std::norm(b);
    const double tr = a + d;
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double lmax = 0.5 * tr + disc;
    const double lmin = det / lmax;
    e.positive = tr > 0.0 && lmin > kPositiveFloor * lmax;
    if (!e.positive) return e;
    e.det_omega = det;
    e.trace = (d * chi(0, 0).real() + a * chi(1, 1).real() - 2.0 * (std::conj(b) * chi(0, 1)).real()) / det;
    if (want_lambda) {
      Eigen::Matrix2cd inv;
      inv << d, -b, -std::conj(b), a;
      inv /= det;
      Eigen::Matrix2cd chi2 = chi;
      const Eigen::Matrix2cd m = inv * chi2 * inv;
      const double mt = m(0, 0).real() + m(1, 1).real();
      const double md = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
      e.lambda_max = 0.5 * mt + std::sqrt(std::max(0.0, 0.25 * mt * mt - md));
    }
    return e;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  e.positive = ev(n - 1) > 0.0 && ev(0) > kPositiveFloor * ev(n - 1);
  if (!e.positive) return e;
  Eigen::LLT<Matrix> llt(w);
  e.det_omega = ev.prod();
  const Matrix inv_chi = llt.solve(chi);
  e.trace = inv_chi.trace().real();
  if (want_lambda) {
    const Matrix m = llt.solve(inv_chi.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> ms(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    e.lambda_max = ms.eigenvalues()(n - 1);
  }
  return e;
}

double det_real(const Matrix& m) { return m.determinant().real(); }

void check_positive(const FormField& f, const char* what) {
  for (std::size_t node = 0; node < f.size(); ++node) {
    if (!is_positive_definite(f.matrix_at(node))) {
      throw ValidationError(std::string(what) + " is not positive-definite at node " +
                            std::to_string(node));
    }
  }
}

double min_spacing(const PeriodicGrid& g) {
  double h = 1.0;
  for (int a = 0; a < g.axes(); ++a) {
    if (g.res(a) > 1) h = std::min(h, g.spacing(a));
  }
  return h;
}

// Per-node flow data for the current potential.
struct Sweep {
  bool positive = true;
  std::size_t bad_node = 0;
  std::vector<double> det_omega;
  std::vector<double> ratio;  // tr/n + F det chi / det omega
  double lambda_max = 0.0;
};

}  // namespace

FormField background_form(const PeriodicGrid& grid, const HermitianForm& constant,
                          const ScalarField* potential) {
  if (constant.dim() != grid.n()) throw ArgumentError("background_form: dimension mismatch");
  FormField out(grid, constant);
  if (potential) {
    if (!(potential->grid() == grid)) throw ArgumentError("background_form: grid mismatch");
    out = out + complex_hessian(*potential);
  }
  return out;
}

double twist_lower_bound(int n, double c) {
  if (n < 1 || !(c > 0.0)) throw ArgumentError("twist_lower_bound: needs n >= 1 and c > 0");
  return -1.0 / (2.0 * std::pow(n, n + 1) * std::pow(c, n - 1));
}

double compute_c(const FormField& omega, const FormField& chi, const ScalarField* twist) {
  if (!(omega.grid() == chi.grid())) throw ArgumentError("compute_c: grid mismatch");
  if (twist && !(twist->grid() == omega.grid())) throw ArgumentError("compute_c: twist grid mismatch");
  const int n = omega.dim();
  double top = 0.0;
  double mixed = 0.0;
  double twisted = 0.0;
  for (std::size_t node = 0; node < omega.size(); ++node) {
    const Matrix w = omega.matrix_at(node);
    const Matrix x = chi.matrix_at(node);
    const NodeEval e = evaluate(w, x, false);
    if (!e.positive) throw DomainError("compute_c: omega is not positive-definite");
    top += e.det_omega;
    mixed += e.det_omega * e.trace / n;
    if (twist) twisted += (*twist)[node] * det_real(x);
  }
  return (mixed + twisted) / top;
}

TorusProblem::TorusProblem(FormField omega0, FormField chi, std::optional<ScalarField> twist,
                           std::optional<double> c, double compat_tol)
    : omega0_(std::move(omega0)), chi_(std::move(chi)), twist_(std::move(twist)) {
  if (!(omega0_.grid() == chi_.grid())) throw ValidationError("torus problem: grid mismatch");
  if (twist_ && !(twist_->grid() == omega0_.grid())) {
    throw ValidationError("torus problem: twist grid mismatch");
  }
  check_positive(omega0_, "omega0");
  check_positive(chi_, "chi");
  if (twist_ && !twist_->all_finite()) throw ValidationError("torus problem: twist is not finite");

  const double quadrature_c = compute_c(omega0_, chi_, twist_ ? &*twist_ : nullptr);
  if (c) {
    if (!(*c > 0.0)) throw ValidationError("torus problem: c must be positive");
    if (twist_ && std::abs(*c - quadrature_c) > compat_tol * std::max(1.0, std::abs(*c))) {
      throw ValidationError("torus problem: twist violates the integral compatibility condition");
    }
    c_ = *c;
  } else {
    c_ = quadrature_c;
    if (!(c_ > 0.0)) throw ValidationError("torus problem: computed c is not positive");
  }
  if (twist_) {
    const double bound = twist_lower_bound(n(), c_);
    for (std::size_t node = 0; node < twist_->size(); ++node) {
      if (!((*twist_)[node] > bound)) {
        throw ValidationError("torus problem: twist violates the lower bound " +
                              std::to_string(bound) + " at node " + std::to_string(node));
      }
    }
  }
}

double compute_c(const TorusProblem& problem) {
  return compute_c(problem.omega0(), problem.chi(), problem.twist() ? &*problem.twist() : nullptr);
}

const char* to_string(SolveVerdict v) {
  switch (v) {
    case SolveVerdict::kSolved: return "solved";
    case SolveVerdict::kDiverged: return "diverged";
    case SolveVerdict::kNotSolvable: return "not-solvable";
  }
  return "diverged";
}

namespace {

Sweep sweep(const ScalarField& phi, const TorusProblem& problem, const std::vector<double>& det_chi,
            bool want_lambda) {
  const std::size_t size = phi.size();
  const int n = problem.n();
  Sweep s;
  s.det_omega.assign(size, 0.0);
  s.ratio.assign(size, 0.0);
  std::vector<char> bad(size, 0);
  std::vector<double> lambda(want_lambda ? size : 0, 0.0);
  const FormField& chi = problem.chi();
  const ScalarField* twist = problem.twist() ? &*problem.twist() : nullptr;
  for_each_hessian(phi, [&](std::size_t node, std::span<const Complex> h) {
    const NodeEval e = evaluate(omega_at(problem.omega0(), node, h), chi.matrix_at(node), want_lambda);
    if (!e.positive) {
      bad[node] = 1;
      return;
    }
    s.det_omega[node] = e.det_omega;
    s.ratio[node] = e.trace / n + (twist ? (*twist)[node] * det_chi[node] / e.det_omega : 0.0);
    if (want_lambda) lambda[node] = e.lambda_max;
  });
  for (std::size_t node = 0; node < size; ++node) {
    if (bad[node]) {
      s.positive = false;
      s.bad_node = node;
      return s;
    }
  }
  if (want_lambda) s.lambda_max = *std::max_element(lambda.begin(), lambda.end());
  return s;
}

// Weighted plateau constant and sup-norm residual of the flow speed.
std::pair<double, double> residual_of(const Sweep& s) {
  double top = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < s.ratio.size(); ++i) {
    top += s.det_omega[i];
    weighted += s.det_omega[i] * s.ratio[i];
  }
  const double level = weighted / top;
  double sup = 0.0;
  for (double r : s.ratio) sup = std::max(sup, std::abs(level - r));
  return {level, sup};
}

}  // namespace

std::pair<FlowState, SolveReport> jflow_run(const TorusProblem& problem, const FlowOptions& options,
                                            const ScalarField* initial) {
  if (!(options.tol > 0.0) || options.max_steps < 0 || !(options.dt >= 0.0)) {
    throw ArgumentError("jflow_run: invalid options");
  }
  const auto start = std::chrono::steady_clock::now();
  const PeriodicGrid& grid = problem.grid();
  const std::size_t size = grid.size();
  std::vector<double> det_chi(size);
  for (std::size_t node = 0; node < size; ++node) det_chi[node] = det_real(problem.chi().matrix_at(node));

  FlowState state;
  if (initial) {
    if (!(initial->grid() == grid)) throw ArgumentError("jflow_run: initial potential grid mismatch");
    state.phi = *initial;
  } else {
    state.phi = ScalarField(grid, 0.0);
  }
  state.phi.normalize_mean();

  const bool auto_dt = options.dt == 0.0;
  const double h2 = std::pow(min_spacing(grid), 2);
  Sweep current = sweep(state.phi, problem, det_chi, auto_dt);
  if (!current.positive) throw ValidationError("jflow_run: initial omega is not positive-definite");

  SolveReport report;
  double dt = auto_dt ? 0.5 * h2 / current.lambda_max : options.dt;
  double shrink = 1.0;  // accumulated step halving
  auto [level, residual] = residual_of(current);
  state.residual_history.emplace_back(0.0, residual);

  int step = 0;
  bool done = residual < options.tol;
  std::vector<double> next_phi(size);
  while (!done && step < options.max_steps) {
    if (!std::isfinite(residual) || residual > 1e12) {
      report.reason = "residual blow-up";
      break;
    }
    const double step_dt = (auto_dt ? 0.5 * h2 / current.lambda_max : options.dt) * shrink;
    if (step_dt < options.dt_min) {
      report.reason = "time step fell below dt_min after positivity loss";
      break;
    }
    for (std::size_t i = 0; i < size; ++i) next_phi[i] = state.phi[i] + step_dt * (level - current.ratio[i]);
    ScalarField candidate(grid, next_phi);
    candidate.normalize_mean();
    Sweep trial = sweep(candidate, problem, det_chi, auto_dt);
    if (!trial.positive) {
      shrink *= 0.5;
      continue;
    }
    state.phi = std::move(candidate);
    current = std::move(trial);
    state.time += step_dt;
    dt = step_dt;
    ++step;
    std::tie(level, residual) = residual_of(current);
    if (options.history_every > 0 && step % options.history_every == 0) {
      state.residual_history.emplace_back(state.time, residual);
    }
    done = residual < options.tol;
  }
  if (state.residual_history.back().first != state.time) {
    state.residual_history.emplace_back(state.time, residual);
  }

  const ScalarField margins = subsolution_margins(state.phi, problem);
  const auto min_it = std::min_element(margins.values().begin(), margins.values().end());
  report.min_margin = *min_it;
  report.min_margin_node = static_cast<std::size_t>(min_it - margins.values().begin());
  report.sup_residual = residual;
  report.iterations = step;
  report.final_dt = dt;
  report.c_final = level;
  report.class_drift = std::abs(level - problem.c());
  if (done && report.min_margin > 0.0) {
    report.verdict = SolveVerdict::kSolved;
  } else {
    report.verdict = SolveVerdict::kDiverged;
    if (report.reason.empty()) {
      report.reason = done ? "converged without a positive subsolution margin"
                           : "no convergence within max_steps";
    }
  }
  report.wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(state), report};
}

ScalarField twisted_residual(const FlowState& state, const TorusProblem& problem) {
  return twisted_residual(state.phi, problem);
}

ScalarField twisted_residual(const ScalarField& phi, const TorusProblem& problem) {
  if (!(phi.grid() == problem.grid())) throw ArgumentError("twisted_residual: grid mismatch");
  const int n = problem.n();
  const double c = problem.c();
  const ScalarField* twist = problem.twist() ? &*problem.twist() : nullptr;
  ScalarField out(problem.grid());
  std::atomic<bool> positive{true};
  for_each_hessian(phi, [&](std::size_t node, std::span<const Complex> h) {
    const Matrix chi = problem.chi().matrix_at(node);
    const NodeEval e = evaluate(omega_at(problem.omega0(), node, h), chi, false);
    if (!e.positive) {
      positive = false;
      return;
    }
    const double f = twist ? (*twist)[node] : 0.0;
    out[node] = c * e.det_omega - e.det_omega * e.trace / n - f * det_real(chi);
  });
  if (!positive) throw DomainError("twisted_residual: omega is not positive-definite");
  return out;
}

ScalarField manufactured_twist(const FormField& omega, const FormField& chi, double c) {
  if (!(omega.grid() == chi.grid())) throw ArgumentError("manufactured_twist: grid mismatch");
  const int n = omega.dim();
  ScalarField out(omega.grid());
  for (std::size_t node = 0; node < omega.size(); ++node) {
    const Matrix x = chi.matrix_at(node);
    const NodeEval e = evaluate(omega.matrix_at(node), x, false);
    if (!e.positive) throw DomainError("manufactured_twist: omega is not positive-definite");
    out[node] = (c * e.det_omega - e.det_omega * e.trace / n) / det_real(x);
  }
  return out;
}

ScalarField subsolution_margins(const ScalarField& phi, const TorusProblem& problem) {
  if (!(phi.grid() == problem.grid())) throw ArgumentError("subsolution_margins: grid mismatch");
  const int n = problem.n();
  const double level = n * problem.c();
  ScalarField out(problem.grid());
  for_each_hessian(phi, [&](std::size_t node, std::span<const Complex> h) {
    const Matrix w = omega_at(problem.omega0(), node, h);
    if (!is_positive_definite(w)) {
      out[node] = -std::numeric_limits<double>::infinity();
      return;
    }
    out[node] = subsolution_margin(HermitianForm(w), HermitianForm(problem.chi().matrix_at(node)), level);
  });
  return out;
}

}  // namespace jlab

#include "jlab/calabi.hpp"

#include "jlab/errors.hpp"
#include "jlab/parallel.hpp"
#include "jlab/toric.hpp"

#include <boost/math/tools/roots.hpp>

#include <chrono>
#include <cmath>
#include <utility>

namespace jlab {

void CalabiProblem::validate() const {
  if (a < 1) throw ArgumentError("calabi: a must be a positive integer");
  if (!(s > 0) || !(m_alpha > 0) || !(m_beta > 0)) {
    throw ArgumentError("calabi: s, m_alpha and m_beta must be positive");
  }
  if (t < 0) throw ArgumentError("calabi: t must be non-negative");
}

Rational CalabiProblem::c() const {
  return (s * m_beta + t * m_alpha + a * m_alpha * m_beta) / (2 * s * m_alpha + a * m_alpha * m_alpha);
}

ClassVector CalabiProblem::alpha_class() const { return {s, m_alpha}; }
ClassVector CalabiProblem::beta_class() const { return {t, m_beta}; }

double calabi_g(const CalabiProblem& p, double f) {
  const double c = to_double(p.c());
  const double s = to_double(p.s);
  const double t = to_double(p.t);
  const double u = s + p.a * f;
  return ((c / p.a) * (u * u - s * s) - t * f) / u;
}

double calabi_g_prime(const CalabiProblem& p, double f) {
  const double c = to_double(p.c());
  const double s = to_double(p.s);
  const double t = to_double(p.t);
  const double u = s + p.a * f;
  return c + s * (c * s - t) / (u * u);
}

Rational calabi_g_prime_exact(const CalabiProblem& p, const Rational& f) {
  const Rational c = p.c();
  const Rational u = p.s + p.a * f;
  return c + p.s * (c * p.s - p.t) / (u * u);
}

Rational endpoint_identity_defect(const CalabiProblem& p) {
  const Rational c = p.c();
  const Rational u = p.s + p.a * p.m_alpha;
  return c / p.a * (u * u - p.s * p.s) - p.t * p.m_alpha - u * p.m_beta;
}

const char* to_string(CalabiClass c) {
  switch (c) {
    case CalabiClass::kSolvable: return "solvable";
    case CalabiClass::kBoundary: return "boundary";
    case CalabiClass::kNotSolvable: return "not-solvable";
  }
  return "not-solvable";
}

ChiProfile logistic_profile(const CalabiProblem& p) {
  const double mb = to_double(p.m_beta);
  return {[mb](double rho) { return mb / (1.0 + std::exp(-rho)); },
          [mb](double rho) {
            const double e = std::exp(-std::abs(rho));
            return mb * e / ((1.0 + e) * (1.0 + e));
          }};
}

CalabiReport calabi_solve(const CalabiProblem& problem, const std::optional<ChiProfile>& profile,
                          const CalabiOptions& options) {
  problem.validate();
  if (!(options.rho_step > 0.0) || !(options.rho_max > options.rho_min)) {
    throw ArgumentError("calabi_solve: invalid rho mesh");
  }
  const auto start = std::chrono::steady_clock::now();
  CalabiReport report;
  report.c = problem.c();
  report.endpoint_defect = std::abs(to_double(endpoint_identity_defect(problem)));

  // G' is monotone in f, so its minimum over [0, m_alpha] sits at an endpoint.
  const Rational gp0 = calabi_g_prime_exact(problem, Rational(0));
  const Rational gp1 = calabi_g_prime_exact(problem, problem.m_alpha);
  const bool left = gp0 <= gp1;
  report.min_g_prime = to_double(left ? gp0 : gp1);
  report.argmin_f = left ? 0.0 : to_double(problem.m_alpha);

  report.solve.iterations = 0;
  if (std::abs(report.min_g_prime) < options.boundary_tol) {
    report.classification = CalabiClass::kBoundary;
    report.solve.verdict = SolveVerdict::kNotSolvable;
    report.solve.reason = "boundary: min G' vanishes at f = " + std::to_string(report.argmin_f);
  } else if (report.min_g_prime < 0.0) {
    report.classification = CalabiClass::kNotSolvable;
    report.solve.verdict = SolveVerdict::kNotSolvable;
    report.solve.reason = "G is not increasing: min G' = " + std::to_string(report.min_g_prime) +
                          " at f = " + std::to_string(report.argmin_f);
  } else {
    report.classification = CalabiClass::kSolvable;
  }

  if (report.classification == CalabiClass::kSolvable) {
    const ChiProfile chi = profile ? *profile : logistic_profile(problem);
    const double s = to_double(problem.s);
    const double t = to_double(problem.t);
    const double c = to_double(report.c);
    const double ma = to_double(problem.m_alpha);
    const int a = problem.a;
    const double h = options.rho_step;
    const int count = static_cast<int>(std::floor((options.rho_max - options.rho_min) / h + 1e-9)) + 1;

    // Two extra mesh points on each side give central stencils everywhere.
    std::vector<double> f(static_cast<std::size_t>(count + 4));
    int evaluations = 0;
    for (int i = 0; i < count + 4; ++i) {
      const double rho = options.rho_min + (i - 2) * h;
      const double target = chi.g(rho);
      auto equation = [&](double x) {
        const double u = s + a * x;
        return ((c / a) * (u * u - s * s) - t * x) / u - target;
      };
      boost::uintmax_t iters = 200;
      const auto bracket = boost::math::tools::toms748_solve(
          equation, 0.0, ma, equation(0.0), equation(ma), boost::math::tools::eps_tolerance<double>(52),
          iters);
      evaluations += static_cast<int>(iters);
      f[static_cast<std::size_t>(i)] = 0.5 * (bracket.first + bracket.second);
    }

    report.profile.reserve(static_cast<std::size_t>(count));
    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      const std::size_t k = static_cast<std::size_t>(i + 2);
      const double rho = options.rho_min + i * h;
      const double fv = f[k];
      const double g = chi.g(rho);
      const double gp = chi.g_prime(rho);
      const double fp = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
      const double u = s + a * fv;
      const double first = std::abs(u * g - (c / a) * (u * u - s * s) + t * fv);
      const double ode = std::abs(u * gp + (t + a * g) * fp - 2.0 * c * u * fp);
      double margin = -std::numeric_limits<double>::infinity();
      if (fp > 0.0 && gp > 0.0) {
        // Diagonal pair: the relative eigenvalues are the entrywise ratios.
        double lambda[2] = {u / (t + a * g), fp / gp};
        if (lambda[0] > lambda[1]) std::swap(lambda[0], lambda[1]);
        margin = 2.0 * c - p_operator_from_spectrum(lambda);
      }
      report.max_first_integral = std::max(report.max_first_integral, first);
      report.max_ode_residual = std::max(report.max_ode_residual, ode);
      min_margin = std::min(min_margin, margin);
      report.profile.push_back({rho, fv, g, ode, margin});
    }
    report.solve.iterations = evaluations;
    report.solve.sup_residual = report.max_ode_residual;
    report.solve.min_margin = min_margin;
    const bool ok = report.max_ode_residual < options.ode_tol && min_margin > 0.0;
    report.solve.verdict = ok ? SolveVerdict::kSolved : SolveVerdict::kDiverged;
    if (!ok) report.solve.reason = "profile residual or margin check failed";
  }
  report.gates_passed = report.endpoint_defect < 1e-12 &&
                        report.max_first_integral < options.first_integral_tol &&
                        report.max_ode_residual < options.ode_tol;
  report.solve.wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

DictionaryCheck validate_dictionary(const CalabiProblem& problem) {
  problem.validate();
  const ToricModel model = toric_to_geometry(ToricFan2D::hirzebruch(problem.a));
  const GeometryModel& g = model.geometry;
  const ClassVector alpha = problem.alpha_class();
  const ClassVector beta = problem.beta_class();
  auto pairing = [&](const ClassVector& x, int divisor) {
    const ClassVector d = model.change_of_basis[static_cast<std::size_t>(divisor)];
    const std::vector<ClassVector> pair{x, d};
    return intersect(g, pair);
  };
  DictionaryCheck out;
  const std::vector<ClassVector> aa{alpha, alpha};
  if (model.self_intersection[1] != -problem.a) {
    out.detail = "D1 is not the negative section";
  } else if (pairing(alpha, 0) != problem.m_alpha || pairing(alpha, 2) != problem.m_alpha) {
    out.detail = "alpha . fiber != m_alpha";
  } else if (pairing(alpha, 1) != problem.s) {
    out.detail = "alpha . E != s";
  } else if (pairing(beta, 1) != problem.t || pairing(beta, 0) != problem.m_beta) {
    out.detail = "beta pairings disagree with (t, m_beta)";
  } else if (intersect(g, aa) != 2 * problem.s * problem.m_alpha + problem.a * problem.m_alpha * problem.m_alpha) {
    out.detail = "alpha^2 disagrees";
  } else if (normalization_ratio(g, alpha, beta) != problem.c()) {
    out.detail = "c disagrees with the toric normalisation ratio";
  } else {
    out.passed = true;
    out.detail = "ok";
  }
  return out;
}

SweepConfig SweepConfig::standard() {
  SweepConfig cfg;
  for (int k = 1; k <= 10; ++k) cfg.t.push_back(Rational(k, 2));
  for (int j = 1; j <= 10; ++j) cfg.m_beta.push_back(Rational(j, 4));
  cfg.a = {1, 2, 3};
  return cfg;
}

bool verdicts_agree(CalabiClass calabi, Classification intersection) {
  switch (calabi) {
    case CalabiClass::kSolvable:
      return intersection == Classification::kJPositive ||
             intersection == Classification::kUniformlyJPositive;
    case CalabiClass::kBoundary: return intersection == Classification::kJNef;
    case CalabiClass::kNotSolvable: return intersection == Classification::kFails;
  }
  return false;
}

SweepResult verdict_sweep(const SweepConfig& config, const CalabiOptions& options) {
  if (config.t.empty() || config.m_beta.empty() || config.a.empty()) {
    throw ArgumentError("verdict_sweep: empty parameter grid");
  }
  std::vector<CalabiProblem> problems;
  for (int a : config.a) {
    for (const auto& t : config.t) {
      for (const auto& mb : config.m_beta) {
        CalabiProblem p{a, config.s, t, config.m_alpha, mb};
        p.validate();
        problems.push_back(p);
      }
    }
  }

  SweepResult result;
  // Dictionary gate on three instances spread over the grid.
  for (std::size_t k : {std::size_t{0}, problems.size() / 2, problems.size() - 1}) {
    const DictionaryCheck d = validate_dictionary(problems[k]);
    if (!d.passed) throw ValidationError("dictionary gate failed: " + d.detail);
  }
  result.dictionary_passed = true;

  int max_a = 0;
  for (int a : config.a) max_a = std::max(max_a, a);
  std::vector<std::optional<ToricModel>> by_a(static_cast<std::size_t>(max_a + 1));
  for (int a : config.a) {
    if (!by_a[static_cast<std::size_t>(a)]) by_a[static_cast<std::size_t>(a)] = toric_to_geometry(ToricFan2D::hirzebruch(a));
  }

  result.entries.resize(problems.size());
  parallel_for(problems.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CalabiProblem& p = problems[i];
      const CalabiReport r = calabi_solve(p, std::nullopt, options);
      const Verdict v = j_verdict(by_a[static_cast<std::size_t>(p.a)]->geometry, p.alpha_class(), p.beta_class());
      SweepEntry& e = result.entries[i];
      e.problem = p;
      e.calabi = r.classification;
      e.intersection = v.classification;
      e.agree = verdicts_agree(e.calabi, e.intersection);
      e.min_g_prime = r.min_g_prime;
      e.witness = v.witness;
      e.max_first_integral = r.max_first_integral;
      e.max_ode_residual = r.max_ode_residual;
    }
  });

  bool gates = true;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const SweepEntry& e = result.entries[i];
    const double defect = std::abs(to_double(endpoint_identity_defect(e.problem)));
    result.max_endpoint_defect = std::max(result.max_endpoint_defect, defect);
    result.max_first_integral = std::max(result.max_first_integral, e.max_first_integral);
    result.max_ode_residual = std::max(result.max_ode_residual, e.max_ode_residual);
    if (e.agree) ++result.agreements;
    if (e.calabi == CalabiClass::kBoundary) {
      ++result.boundary;
    } else {
      ++result.non_boundary;
      if (e.agree) ++result.non_boundary_agreements;
    }
  }
  gates = result.max_endpoint_defect < 1e-12 && result.max_first_integral < options.first_integral_tol &&
          result.max_ode_residual < options.ode_tol;
  result.gates_passed = gates && result.dictionary_passed;
  return result;
}

}  // namespace jlab

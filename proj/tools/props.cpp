#include "props.hpp"

#include "digest.hpp"

#include "jlab/errors.hpp"
#include "jlab/grid.hpp"
#include "jlab/mollify.hpp"
#include "jlab/parallel.hpp"
#include "jlab/psh.hpp"
#include "jlab/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

namespace jlab::props {

namespace {

struct Evaluation {
  double statistic = 0.0;
  json instance;
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int j = 0; j < m.rows(); ++j) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back({m(j, k).real(), m(j, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXcd random_direction(Rng& rng, int n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (int j = 0; j < n; ++j) v(j) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

// Largest sampled trace minus the closed formula.
Evaluation eval_dominance(std::uint64_t seed, const json& params) {
  Rng rng(seed);
  const int n = params.at("n").get<int>();
  const int samples = params.at("hyperplanes").get<int>();
  const Matrix a = random_positive_definite(rng, n).matrix();
  const Matrix b = random_positive_definite(rng, n).matrix();
  const double formula = p_operator(HermitianForm(a), HermitianForm(b));
  const double sampled = sampled_hyperplane_sup(a, b, samples, false, rng());
  return {sampled - formula,
          {{"A", matrix_json(a)}, {"B", matrix_json(b)}, {"formula", formula}, {"sampled", sampled}}};
}

// Closed formula minus the refined sampled supremum.
Evaluation eval_sampled_sup(std::uint64_t seed, const json& params) {
  Rng rng(seed);
  const int n = params.at("n").get<int>();
  const int samples = params.at("hyperplanes").get<int>();
  const Matrix a = random_positive_definite(rng, n).matrix();
  const Matrix b = random_positive_definite(rng, n).matrix();
  const double formula = p_operator(HermitianForm(a), HermitianForm(b));
  const double sampled = sampled_hyperplane_sup(a, b, samples, true, rng());
  return {formula - sampled,
          {{"A", matrix_json(a)}, {"B", matrix_json(b)}, {"formula", formula}, {"sampled", sampled}}};
}

Evaluation eval_convexity(std::uint64_t seed, const json& params) {
  Rng rng(seed);
  const int n = params.at("n").get<int>();
  const HermitianForm a = random_positive_definite(rng, n);
  const HermitianForm b = random_positive_definite(rng, n);
  const HermitianForm c = random_positive_definite(rng, n);
  const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double lhs = p_operator(a.scaled(t) + b.scaled(1.0 - t), c);
  const double rhs = t * p_operator(a, c) + (1.0 - t) * p_operator(b, c);
  return {lhs - rhs,
          {{"A", matrix_json(a.matrix())},
           {"B", matrix_json(b.matrix())},
           {"C", matrix_json(c.matrix())},
           {"t", t},
           {"lhs", lhs},
           {"rhs", rhs}}};
}

Evaluation eval_schur(std::uint64_t seed, const json& params) {
  Rng rng(seed);
  const int n = params.at("n").get<int>();
  const Matrix block = random_positive_definite(rng, 2 * n).matrix();
  const Matrix a = block.topLeftCorner(n, n);
  const Matrix b = block.bottomRightCorner(n, n);
  const Matrix c = block.topRightCorner(n, n);
  const double gap = schur_gap(a, b, c);
  return {-gap, {{"block", matrix_json(block)}, {"gap", gap}}};
}

// max over nodes of P_I(I + i d dbar f).
double max_p_operator(const ScalarField& f) {
  std::atomic<double> worst{-std::numeric_limits<double>::infinity()};
  for_each_hessian(f, [&](std::size_t, std::span<const Complex> h) {
    const double p = p_operator_euclidean_2x2(1.0 + h[0].real(), 1.0 + h[3].real(), h[1]);
    double cur = worst.load(std::memory_order_relaxed);
    while (p > cur && !worst.compare_exchange_weak(cur, p, std::memory_order_relaxed)) {
    }
  });
  return worst.load();
}

// Two fields u = |z|^2/2 + u~, v = |z|^2/2 + v~ with periodic u~, v~. The
// quadratic part contributes the identity to every Hessian and only a
// constant after mollification, so the check runs on the periodic parts.
Evaluation eval_gluing(std::uint64_t seed, const json& params) {
  Rng rng(seed);
  const int res = params.at("res").get<int>();
  const int modes = params.at("modes").get<int>();
  const double amplitude = params.at("amplitude").get<double>();
  const auto radii = params.at("radii").get<std::vector<double>>();
  const PeriodicGrid grid(2, res);

  ScalarField glued(grid);
  double c = 0.0;
  {
    const ScalarField u = random_trig_field(rng, grid, modes, amplitude);
    ScalarField v = random_trig_field(rng, grid, modes, amplitude);
    const double shift = u.mean() - v.mean();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift;
    c = std::max(max_p_operator(u), max_p_operator(v));
    glued = max_glue(u, v);
  }
  // Kernel transforms depend only on the grid and radius, so the mollifier and
  // its output buffer are kept across instances of the same resolution.
  static std::unique_ptr<Mollifier> cached;
  static ScalarField smoothed;
  if (!cached || !(smoothed.grid() == grid)) {
    cached.reset();
    cached = std::make_unique<Mollifier>(grid, MollifierKernel::standard(2));
    smoothed = ScalarField(grid);
  }
  cached->load(glued);
  glued = ScalarField();
  double worst = -std::numeric_limits<double>::infinity();
  json per_radius = json::array();
  for (double k : radii) {
    const double r = k * grid.h();
    cached->apply_into(r, smoothed.values());
    const double p = max_p_operator(smoothed);
    worst = std::max(worst, p - c);
    per_radius.push_back({{"r", r}, {"max_P", p}});
  }
  return {worst, {{"c", c}, {"per_radius", per_radius}}};
}

struct TruncatedLog {
  double gamma;
  double radius;
};

// Sum of gamma_i log max(rho, r_i): exact radial supremum of the family.
double radial_profile(const std::vector<TruncatedLog>& terms, double rho) {
  double v = 0.0;
  for (const auto& t : terms) v += t.gamma * std::log(std::max(rho, t.radius));
  return v;
}

// Worst shortfall of a discrete ball supremum: the farthest node in B_rho(p)
// lies at distance >= rho - sqrt(2n) h.
double radial_shortfall(const std::vector<TruncatedLog>& terms, const PeriodicGrid& grid,
                        double rho) {
  const double inner = std::max(0.0, rho - std::sqrt(2.0 * grid.n()) * grid.h());
  double v = 0.0;
  for (const auto& t : terms) {
    v += t.gamma * (std::log(std::max(rho, t.radius)) - std::log(std::max(inner, t.radius)));
  }
  return v;
}

Evaluation eval_lelong(std::uint64_t seed, const json& params) {
  Rng rng(seed);
  const int n = params.at("n").get<int>();
  const int res = params.at("res").get<int>();
  const double big_r = params.at("R").get<double>();
  const PeriodicGrid grid(n, res);
  const double h = grid.h();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t p = std::uniform_int_distribution<std::size_t>(0, grid.size() - 1)(rng);
  const int count = 1 + static_cast<int>(rng() % 3);
  std::vector<TruncatedLog> terms;
  json terms_json = json::array();
  for (int i = 0; i < count; ++i) {
    const double gamma = 0.25 + 1.75 * unit(rng);
    const double radius = std::exp(std::log(0.5 * h) + unit(rng) * (std::log(0.15) - std::log(0.5 * h)));
    terms.push_back({gamma, radius});
    terms_json.push_back({{"gamma", gamma}, {"truncation", radius}});
  }
  double gamma_total = 0.0;
  for (const auto& t : terms) gamma_total += t.gamma;

  ScalarField phi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    phi[i] = radial_profile(terms, grid.periodic_distance(i, p));
  }
  const ScalarField pure = log_singular_field(grid, p, gamma_total, default_log_floor(grid));

  const MollifierKernel kernel = MollifierKernel::standard(n);
  const double eta = eta_constant(kernel);
  double worst = std::pow(4.0, n) - eta;  // eta > 2^{2m}

  const double short_big = radial_shortfall(terms, grid, big_r);
  const std::vector<TruncatedLog> pure_terms{{gamma_total, 0.0}};
  const double pure_big = ball_sup(pure, p, big_r);
  json checks = json::array();
  for (double r = 4.0 * h; r < big_r / 1.2; r *= 1.5) {
    const double log_ratio = std::log(big_r) - std::log(r);
    const double sup_r = ball_sup(phi, p, r);
    const double sup_half = ball_sup(phi, p, r / 2.0);
    const double nu = lelong_ratio(phi, p, r, big_r);
    const double mollified = mollify_at(phi, p, r, kernel);

    const double first = sup_r - sup_half;
    const double tol_first = radial_shortfall(terms, grid, r / 2.0) + std::log(2.0) * short_big / log_ratio;
    const double second = sup_r - mollified;
    const double tol_second = radial_shortfall(terms, grid, r) + eta * short_big / log_ratio;
    worst = std::max({worst, -first, first - std::log(2.0) * nu - tol_first, -second,
                      second - eta * nu - tol_second});

    const double pure_nu = (pure_big - ball_sup(pure, p, r)) / log_ratio;
    const double pure_tol = (radial_shortfall(pure_terms, grid, big_r) +
                             radial_shortfall(pure_terms, grid, r)) / log_ratio;
    worst = std::max(worst, std::abs(pure_nu - gamma_total) - pure_tol);

    checks.push_back({{"r", r},
                      {"nu", nu},
                      {"sup_r_minus_sup_half", first},
                      {"sup_r_minus_mollified", second},
                      {"pure_log_nu", pure_nu}});
  }
  return {worst,
          {{"node", p}, {"terms", terms_json}, {"eta", eta}, {"checks", checks}}};
}

struct SuiteSpec {
  const char* property;
  std::function<Evaluation(std::uint64_t, const json&)> evaluate;
};

const std::map<std::string, SuiteSpec>& registry() {
  static const std::map<std::string, SuiteSpec> r = {
      {"hyperplane-dominance",
       {"closed formula for P dominates every sampled hyperplane trace", eval_dominance}},
      {"hyperplane-sup",
       {"refined sampled supremum of hyperplane traces reaches the formula", eval_sampled_sup}},
      {"convexity", {"P_C(tA + (1-t)B) <= t P_C(A) + (1-t) P_C(B)", eval_convexity}},
      {"schur-gap", {"P(block) - P(Schur complement) - tr(B^-1) >= 0", eval_schur}},
      {"max-gluing", {"max P over nodes after max + mollify stays below c", eval_gluing}},
      {"lelong", {"ball-sup and mollifier bounds against the Lelong ratio", eval_lelong}},
  };
  return r;
}

const SuiteSpec& lookup(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw ArgumentError("unknown property suite '" + name + "'");
  return it->second;
}

double suite_tolerance(const std::string& name, const Tolerances& t) {
  if (name == "hyperplane-dominance") return t.dominance;
  if (name == "hyperplane-sup") return t.sampled_sup;
  if (name == "convexity") return t.convexity;
  if (name == "schur-gap") return t.schur;
  if (name == "max-gluing") return t.gluing;
  return t.lelong;
}

std::vector<json> suite_params(const std::string& name, const Sizes& s) {
  std::vector<json> out;
  if (name == "hyperplane-dominance") {
    for (int i = 0; i < s.p_operator_instances; ++i) {
      out.push_back({{"n", 1 + i % 5}, {"hyperplanes", s.hyperplanes}});
    }
  } else if (name == "hyperplane-sup") {
    const int count = std::max(1, s.p_operator_instances / 10);
    for (int i = 0; i < count; ++i) out.push_back({{"n", 2 + i % 2}, {"hyperplanes", s.hyperplanes}});
  } else if (name == "convexity") {
    for (int i = 0; i < s.convexity_instances; ++i) out.push_back({{"n", 1 + i % 5}});
  } else if (name == "schur-gap") {
    for (int i = 0; i < s.schur_instances; ++i) out.push_back({{"n", 2 + i % 2}});
  } else if (name == "max-gluing") {
    for (int i = 0; i < s.gluing_pairs; ++i) {
      out.push_back({{"res", s.gluing_res},
                     {"modes", s.gluing_modes},
                     {"amplitude", s.gluing_amplitude},
                     {"radii", s.gluing_radii}});
    }
  } else if (name == "lelong") {
    for (int i = 0; i < s.lelong_instances; ++i) {
      const int n = 1 + i % 2;
      out.push_back({{"n", n}, {"res", n == 1 ? 256 : 40}, {"R", 0.24}});
    }
  }
  return out;
}

}  // namespace

json sizes_to_json(const Sizes& s) {
  return {{"p_operator_instances", s.p_operator_instances},
          {"hyperplanes", s.hyperplanes},
          {"convexity_instances", s.convexity_instances},
          {"schur_instances", s.schur_instances},
          {"gluing_pairs", s.gluing_pairs},
          {"gluing_res", s.gluing_res},
          {"gluing_radii_h", s.gluing_radii},
          {"gluing_amplitude", s.gluing_amplitude},
          {"gluing_modes", s.gluing_modes},
          {"lelong_instances", s.lelong_instances}};
}

json tolerances_to_json(const Tolerances& t) {
  return {{"dominance", t.dominance}, {"sampled_sup", t.sampled_sup}, {"convexity", t.convexity},
          {"schur", t.schur},         {"gluing", t.gluing},           {"lelong", t.lelong}};
}

json violation_to_json(const Violation& v) {
  return {{"suite", v.suite},         {"seed", v.seed},         {"params", v.params},
          {"statistic", v.statistic}, {"tolerance", v.tolerance}, {"instance", v.instance}};
}

json suite_to_json(const SuiteResult& r, bool include_timing) {
  json j = {{"name", r.name},           {"property", r.property},   {"instances", r.instances},
            {"violations", r.violations}, {"worst_statistic", r.worst}, {"tolerance", r.tolerance},
            {"passed", r.violations == 0}};
  if (include_timing) j["seconds"] = r.seconds;
  return j;
}

std::vector<std::string> suite_names() {
  return {"hyperplane-dominance", "hyperplane-sup", "convexity", "schur-gap", "max-gluing", "lelong"};
}

std::uint64_t instance_seed(std::uint64_t master_seed, const std::string& suite, int index) {
  return tools::splitmix64(master_seed ^ tools::fnv1a(suite) ^
                           tools::splitmix64(static_cast<std::uint64_t>(index)));
}

double evaluate_instance(const std::string& suite, std::uint64_t seed, const json& params) {
  return lookup(suite).evaluate(seed, params).statistic;
}

SuiteResult run_suite(const std::string& name, std::uint64_t master_seed, const Sizes& sizes,
                      const Tolerances& tolerances) {
  const SuiteSpec& spec = lookup(name);
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  result.name = name;
  result.property = spec.property;
  result.tolerance = suite_tolerance(name, tolerances);
  result.worst = -std::numeric_limits<double>::infinity();
  const std::vector<json> params = suite_params(name, sizes);
  result.instances = static_cast<int>(params.size());
  for (int i = 0; i < result.instances; ++i) {
    const std::uint64_t seed = instance_seed(master_seed, name, i);
    Evaluation e;
    try {
      e = spec.evaluate(seed, params[static_cast<std::size_t>(i)]);
    } catch (const std::exception& ex) {
      e.statistic = std::numeric_limits<double>::infinity();
      e.instance = {{"error", ex.what()}};
    }
    result.worst = std::max(result.worst, e.statistic);
    if (!(e.statistic <= result.tolerance)) {
      ++result.violations;
      result.violating.push_back({name, seed, params[static_cast<std::size_t>(i)], e.statistic,
                                  result.tolerance, std::move(e.instance)});
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ReplayOutcome replay(const json& record) {
  const std::string suite = record.at("suite").get<std::string>();
  const auto seed = record.at("seed").get<std::uint64_t>();
  ReplayOutcome out;
  out.tolerance = record.at("tolerance").get<double>();
  out.statistic = evaluate_instance(suite, seed, record.at("params"));
  out.violated = !(out.statistic <= out.tolerance);
  if (record.contains("statistic")) {
    const double stored = record.at("statistic").get<double>();
    out.reproduced = std::abs(stored - out.statistic) <= 1e-12 * std::max(1.0, std::abs(stored));
  }
  return out;
}

double hyperplane_trace(const Matrix& a_inverse, const Matrix& b, const Eigen::VectorXcd& nu) {
  const Eigen::VectorXcd m_nu = a_inverse * nu;
  const double denom = nu.dot(m_nu).real();
  const double full = (a_inverse * b).trace().real();
  return full - m_nu.dot(b * m_nu).real() / denom;
}

double sampled_hyperplane_sup(const Matrix& a, const Matrix& b, int samples, bool refine,
                              std::uint64_t seed) {
  Rng rng(seed);
  const int n = static_cast<int>(a.rows());
  const Matrix a_inverse = a.inverse();
  Eigen::VectorXcd best = random_direction(rng, n);
  double best_value = hyperplane_trace(a_inverse, b, best);
  for (int i = 1; i < samples; ++i) {
    const Eigen::VectorXcd nu = random_direction(rng, n);
    const double v = hyperplane_trace(a_inverse, b, nu);
    if (v > best_value) {
      best_value = v;
      best = nu;
    }
  }
  if (!refine) return best_value;
  double step = 0.25;
  int misses = 0;
  while (step > 1e-7) {
    Eigen::VectorXcd trial = best + step * random_direction(rng, n);
    trial /= trial.norm();
    const double v = hyperplane_trace(a_inverse, b, trial);
    if (v > best_value) {
      best_value = v;
      best = trial;
      misses = 0;
    } else if (++misses >= 40) {
      step *= 0.5;
      misses = 0;
    }
  }
  return best_value;
}

}  // namespace jlab::props

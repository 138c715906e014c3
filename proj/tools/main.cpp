#include "digest.hpp"
#include "props.hpp"

#include "jlab/calabi.hpp"
#include "jlab/errors.hpp"
#include "jlab/intersection.hpp"
#include "jlab/io.hpp"
#include "jlab/jflow.hpp"
#include "jlab/parallel.hpp"
#include "jlab/toric.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using jlab::io::json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNefOnly = 2,
  kFails = 3,
  kDiverged = 4,
};

struct Defaults {
  static constexpr double flow_tol = 1e-8;
  static constexpr double boundary_tol = 1e-12;
  static constexpr double first_integral_tol = 1e-10;
  static constexpr double ode_tol = 1e-8;
};

struct Global {
  std::uint64_t seed = 20240611;
  std::optional<double> tol;
  std::string out = "jlab-out";
  unsigned threads = 1;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw jlab::ConfigurationError("cannot open " + path.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_text(const std::string& text, const fs::path& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw jlab::ValidationError(path.string() + ": " + e.what());
  }
}

class Digest {
 public:
  void add(std::string_view bytes) {
    state_ = jlab::tools::fnv1a(bytes, state_);
    state_ = jlab::tools::fnv1a(std::string_view("\x1f", 1), state_);
  }
  std::string hex() const { return jlab::tools::hex64(state_); }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

json metadata(const std::string& command, const Global& g, const Digest& digest, json tolerances) {
  return {{"tool", "jlab"},
          {"version", JLAB_VERSION},
          {"command", command},
          {"seed", g.seed},
          {"input_digest", digest.hex()},
          {"tolerances", std::move(tolerances)}};
}

void write_json(const fs::path& path, const json& j) { jlab::io::write_text_file(path, j.dump(2) + "\n"); }

jlab::ClassVector class_arg(const std::string& text, const json* scenario_value) {
  if (scenario_value) {
    if (scenario_value->is_string()) return jlab::io::parse_class_text(scenario_value->get<std::string>());
    return jlab::io::class_from_json(*scenario_value);
  }
  return jlab::io::parse_class_text(text);
}

// A geometry document, or a fan {rays: [...]} converted through the toric front-end.
struct LoadedGeometry {
  jlab::GeometryModel geometry;
  std::optional<json> toric;
};

LoadedGeometry load_geometry(const json& doc) {
  if (doc.contains("rays")) {
    const jlab::ToricModel model = jlab::toric_to_geometry(jlab::io::fan_from_json(doc));
    return {model.geometry, jlab::io::toric_model_to_json(model)};
  }
  return {jlab::io::geometry_from_json(doc), std::nullopt};
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string geometry;
  std::string scenario;
  std::string alpha;
  std::string beta;
  std::string eps = "0";
};

int run_check(const CheckArgs& args, const Global& g) {
  Digest digest;
  json scenario;
  fs::path geometry_path = args.geometry;
  if (!args.scenario.empty()) {
    const std::string text = slurp(args.scenario);
    digest.add(text);
    scenario = parse_text(text, args.scenario);
  }
  json geometry_doc;
  if (scenario.is_object() && scenario.contains("geometry") && scenario.at("geometry").is_object()) {
    geometry_doc = scenario.at("geometry");
  } else {
    if (scenario.is_object() && scenario.contains("geometry")) {
      geometry_path = fs::path(args.scenario).parent_path() / scenario.at("geometry").get<std::string>();
    }
    if (geometry_path.empty()) throw jlab::ConfigurationError("check: a geometry file or --scenario is required");
    const std::string text = slurp(geometry_path);
    digest.add(text);
    geometry_doc = parse_text(text, geometry_path);
  }
  const auto find = [&](const char* key) -> const json* {
    return scenario.is_object() && scenario.contains(key) ? &scenario.at(key) : nullptr;
  };
  if (!find("alpha") && args.alpha.empty()) throw jlab::ConfigurationError("check: --alpha is required");
  if (!find("beta") && args.beta.empty()) throw jlab::ConfigurationError("check: --beta is required");
  const jlab::ClassVector alpha = class_arg(args.alpha, find("alpha"));
  const jlab::ClassVector beta = class_arg(args.beta, find("beta"));
  const jlab::Rational eps = find("eps") ? jlab::io::rational_from_json(*find("eps")) : jlab::parse_rational(args.eps);
  digest.add(args.alpha);
  digest.add(args.beta);
  digest.add(args.eps);

  const LoadedGeometry loaded = load_geometry(geometry_doc);
  const jlab::Verdict v = jlab::j_verdict(loaded.geometry, alpha, beta, eps);

  std::printf("%s  %s  %-12s  %s\n", pad("Z", 10).c_str(), "m", "slope", "margin");
  for (const auto& e : v.per_z) {
    const std::string slope = e.slope ? jlab::format_rational(*e.slope) : "kahler-violation";
    const std::string margin = e.margin ? jlab::format_rational(*e.margin) : "-";
    std::printf("%s  %d  %-12s  %s\n", pad(e.name, 10).c_str(), e.m, slope.c_str(), margin.c_str());
  }
  std::printf("global slope n c = %s (c = %s)\n", jlab::format_rational(v.global_slope).c_str(),
              jlab::format_rational(v.c).c_str());
  std::printf("classification: %s, relative to the supplied subvariety list", jlab::to_string(v.classification));
  if (v.witness) std::printf(" (witness %s)", v.witness->c_str());
  std::printf("\n");

  json out = metadata("check", g, digest, json::object());
  out["alpha"] = jlab::io::class_to_json(alpha);
  out["beta"] = jlab::io::class_to_json(beta);
  out["basis"] = loaded.geometry.basis();
  if (loaded.toric) out["toric_model"] = *loaded.toric;
  out["verdict"] = jlab::io::verdict_to_json(v);
  write_json(fs::path(g.out) / "check.json", out);

  switch (v.classification) {
    case jlab::Classification::kUniformlyJPositive:
    case jlab::Classification::kJPositive: return kOk;
    case jlab::Classification::kJNef: return kNefOnly;
    case jlab::Classification::kFails: return kFails;
  }
  return kFails;
}

// ---------------------------------------------------------------- csck

struct CsckArgs {
  std::string geometry;
  std::string gamma;
  std::string eps = "0";
  std::string alpha_invariant;
  std::string t_lo;
  std::string t_hi;
  int iterations = 40;
};

int run_csck(const CsckArgs& args, const Global& g) {
  Digest digest;
  const std::string text = slurp(args.geometry);
  digest.add(text);
  for (const auto* s : {&args.gamma, &args.eps, &args.alpha_invariant, &args.t_lo, &args.t_hi}) digest.add(*s);
  digest.add(std::to_string(args.iterations));
  const LoadedGeometry loaded = load_geometry(parse_text(text, args.geometry));
  const jlab::ClassVector gamma = jlab::io::parse_class_text(args.gamma);
  const jlab::Rational eps = jlab::parse_rational(args.eps);
  std::optional<jlab::Rational> alpha_inv;
  if (!args.alpha_invariant.empty()) alpha_inv = jlab::parse_rational(args.alpha_invariant);

  json out = metadata("csck", g, digest, json::object());
  out["gamma"] = jlab::io::class_to_json(gamma);
  int code = kOk;
  if (!args.t_lo.empty() || !args.t_hi.empty()) {
    if (args.t_lo.empty() || args.t_hi.empty()) throw jlab::ConfigurationError("csck: --t-lo and --t-hi go together");
    const jlab::CsckSweep sweep = jlab::csck_sweep(loaded.geometry, gamma, jlab::parse_rational(args.t_lo),
                                                   jlab::parse_rational(args.t_hi), eps, args.iterations);
    json s{{"t_lo", args.t_lo}, {"t_hi", args.t_hi}, {"iterations", args.iterations},
           {"evaluations", sweep.evaluations}};
    s["largest_passing"] = sweep.largest_passing ? json(jlab::format_rational(*sweep.largest_passing)) : json();
    s["smallest_failing"] = sweep.smallest_failing ? json(jlab::format_rational(*sweep.smallest_failing)) : json();
    if (sweep.largest_passing) s["largest_passing_value"] = jlab::to_double(*sweep.largest_passing);
    out["sweep"] = s;
    std::printf("largest passing t: %s\n",
                sweep.largest_passing ? jlab::format_rational(*sweep.largest_passing).c_str() : "none");
    if (!sweep.largest_passing) code = kFails;
  } else {
    const jlab::CsckVerdict v = jlab::csck_slope_test(loaded.geometry, gamma, eps, alpha_inv);
    for (const auto& e : v.per_z) {
      std::printf("%s  %d  lhs %-12s  rhs %s\n", pad(e.name, 10).c_str(), e.m,
                  e.lhs ? jlab::format_rational(*e.lhs).c_str() : "kahler-violation",
                  jlab::format_rational(e.rhs).c_str());
    }
    std::printf("cscK slope test: %s", v.passes ? "passes" : "fails");
    if (v.witness) std::printf(" at %s", v.witness->c_str());
    std::printf("\n");
    out["verdict"] = jlab::io::csck_to_json(v);
    code = v.passes ? kOk : kFails;
  }
  write_json(fs::path(g.out) / "csck.json", out);
  return code;
}

// ---------------------------------------------------------------- solve-torus

struct TorusArgs {
  std::string problem;
  double dt = 0.0;
  int max_steps = 200000;
  int history_every = 10;
  std::string field_format = "binary";
};

int run_solve_torus(const TorusArgs& args, const Global& g) {
  Digest digest;
  const std::string text = slurp(args.problem);
  digest.add(text);
  digest.add(std::to_string(args.dt));
  digest.add(std::to_string(args.max_steps));
  const jlab::TorusProblem problem =
      jlab::io::torus_problem_from_json(parse_text(text, args.problem), fs::path(args.problem).parent_path());
  jlab::FlowOptions options;
  options.dt = args.dt;
  options.tol = g.tol.value_or(Defaults::flow_tol);
  options.max_steps = args.max_steps;
  options.history_every = args.history_every;
  const auto [state, report] = jlab::jflow_run(problem, options);

  const fs::path out_dir(g.out);
  const auto format = args.field_format == "csv" ? jlab::io::FieldFormat::kCsv : jlab::io::FieldFormat::kBinary;
  jlab::io::write_field(out_dir / "phi", state.phi, format);
  std::ostringstream history;
  history << "time,residual\n";
  history.precision(17);
  for (const auto& [t, r] : state.residual_history) history << t << ',' << r << '\n';
  jlab::io::write_text_file(out_dir / "residual_history.csv", history.str());

  json out = metadata("solve-torus", g, digest,
                      {{"residual", options.tol}, {"dt_min", options.dt_min}, {"max_steps", options.max_steps}});
  out["problem"] = {{"n", problem.n()}, {"res", jlab::io::grid_res_to_json(problem.grid())}, {"c", problem.c()}};
  out["report"] = jlab::io::solve_report_to_json(report, false);
  out["timing"] = {{"wall_clock", report.wall_clock}};
  write_json(out_dir / "solve_torus.json", out);
  std::printf("verdict: %s  sup-residual %.3e  min margin %.6f  steps %d  (%.2f s)\n",
              jlab::to_string(report.verdict), report.sup_residual, report.min_margin, report.iterations,
              report.wall_clock);
  if (!report.reason.empty()) std::printf("reason: %s\n", report.reason.c_str());
  return report.verdict == jlab::SolveVerdict::kSolved ? kOk : kDiverged;
}

// ---------------------------------------------------------------- solve-calabi

struct CalabiArgs {
  std::string config;
  int a = 1;
  std::string s = "1";
  std::string t;
  std::string m_alpha = "1";
  std::string m_beta;
  double rho_step = 0.005;
};

jlab::CalabiOptions calabi_options(const Global& g, double rho_step) {
  jlab::CalabiOptions o;
  o.rho_step = rho_step;
  if (g.tol) o.ode_tol = *g.tol;
  return o;
}

json calabi_tolerances(const jlab::CalabiOptions& o) {
  return {{"boundary", o.boundary_tol}, {"first_integral", o.first_integral_tol}, {"ode", o.ode_tol},
          {"rho_step", o.rho_step}};
}

int run_solve_calabi(const CalabiArgs& args, const Global& g) {
  Digest digest;
  jlab::CalabiProblem problem;
  if (!args.config.empty()) {
    const std::string text = slurp(args.config);
    digest.add(text);
    problem = jlab::io::calabi_problem_from_json(parse_text(text, args.config));
  } else {
    if (args.t.empty() || args.m_beta.empty()) throw jlab::ConfigurationError("solve-calabi: --t and --m-beta are required");
    problem.a = args.a;
    problem.s = jlab::parse_rational(args.s);
    problem.t = jlab::parse_rational(args.t);
    problem.m_alpha = jlab::parse_rational(args.m_alpha);
    problem.m_beta = jlab::parse_rational(args.m_beta);
  }
  problem.validate();
  digest.add(jlab::io::calabi_problem_to_json(problem).dump());
  digest.add(std::to_string(args.rho_step));
  const jlab::CalabiOptions options = calabi_options(g, args.rho_step);
  const jlab::CalabiReport report = jlab::calabi_solve(problem, std::nullopt, options);
  const jlab::DictionaryCheck dictionary = jlab::validate_dictionary(problem);

  const fs::path out_dir(g.out);
  json out = metadata("solve-calabi", g, digest, calabi_tolerances(options));
  out["problem"] = jlab::io::calabi_problem_to_json(problem);
  out["report"] = jlab::io::calabi_report_to_json(report, false);
  out["dictionary"] = {{"passed", dictionary.passed}, {"detail", dictionary.detail}};
  out["timing"] = {{"wall_clock", report.solve.wall_clock}};
  write_json(out_dir / "calabi.json", out);
  if (!report.profile.empty()) jlab::io::write_text_file(out_dir / "profile.csv", jlab::io::profile_to_csv(report));

  std::printf("classification: %s  c = %s  min G' = %.6g at f = %.6g\n", jlab::to_string(report.classification),
              jlab::format_rational(report.c).c_str(), report.min_g_prime, report.argmin_f);
  if (!report.profile.empty()) {
    std::printf("profile: %zu rows, first integral %.2e, ODE residual %.2e, min margin %.6f\n",
                report.profile.size(), report.max_first_integral, report.max_ode_residual, report.solve.min_margin);
  }
  if (!dictionary.passed) {
    std::printf("dictionary gate failed: %s\n", dictionary.detail.c_str());
    return kDiverged;
  }
  switch (report.classification) {
    case jlab::CalabiClass::kSolvable: return report.gates_passed ? kOk : kDiverged;
    case jlab::CalabiClass::kBoundary: return kNefOnly;
    case jlab::CalabiClass::kNotSolvable: return kFails;
  }
  return kFails;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  double rho_step = 0.005;
};

int run_sweep(const SweepArgs& args, const Global& g) {
  Digest digest;
  jlab::SweepConfig config = jlab::SweepConfig::standard();
  if (!args.config.empty()) {
    const std::string text = slurp(args.config);
    config = jlab::io::sweep_config_from_json(parse_text(text, args.config));
  }
  digest.add(jlab::io::sweep_config_to_json(config).dump());
  digest.add(std::to_string(args.rho_step));
  const jlab::CalabiOptions options = calabi_options(g, args.rho_step);
  const auto start = std::chrono::steady_clock::now();
  const jlab::SweepResult result = jlab::verdict_sweep(config, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path out_dir(g.out);
  jlab::io::write_text_file(out_dir / "sweep.csv", jlab::io::sweep_to_csv(result));
  json out = metadata("sweep", g, digest, calabi_tolerances(options));
  out["config"] = jlab::io::sweep_config_to_json(config);
  out["summary"] = jlab::io::sweep_summary_to_json(result);
  out["timing"] = {{"wall_clock", seconds}};
  write_json(out_dir / "sweep_summary.json", out);

  std::printf("instances %zu  agreement %d/%zu  non-boundary %d/%d  boundary %d  gates %s\n", result.entries.size(),
              result.agreements, result.entries.size(), result.non_boundary_agreements, result.non_boundary,
              result.boundary, result.gates_passed ? "passed" : "FAILED");
  const bool ok = result.gates_passed && result.non_boundary_agreements == result.non_boundary;
  return ok ? kOk : kFails;
}

// ---------------------------------------------------------------- props

struct PropsArgs {
  std::vector<std::string> suites;
  std::string replay;
  jlab::props::Sizes sizes;
};

int run_props(const PropsArgs& args, const Global& g) {
  Digest digest;
  const fs::path out_dir(g.out);
  if (!args.replay.empty()) {
    const std::string text = slurp(args.replay);
    const json record = parse_text(text, args.replay);
    const jlab::props::ReplayOutcome r = jlab::props::replay(record);
    std::printf("replay %s seed %s: statistic %.6e tolerance %.6e -> %s%s\n",
                record.at("suite").get<std::string>().c_str(),
                std::to_string(record.at("seed").get<std::uint64_t>()).c_str(), r.statistic, r.tolerance,
                r.violated ? "VIOLATION" : "ok", r.reproduced ? "" : " (statistic differs from the record)");
    return r.violated ? kFails : kOk;
  }

  jlab::props::Tolerances tolerances;
  std::vector<std::string> suites = args.suites.empty() ? jlab::props::suite_names() : args.suites;
  digest.add(jlab::props::sizes_to_json(args.sizes).dump());
  for (const auto& s : suites) digest.add(s);

  json results = json::array();
  json timing = json::object();
  int violations = 0;
  for (const auto& name : suites) {
    const jlab::props::SuiteResult r = jlab::props::run_suite(name, g.seed, args.sizes, tolerances);
    violations += r.violations;
    results.push_back(jlab::props::suite_to_json(r, false));
    timing[name] = r.seconds;
    std::printf("%s  %d instances  %d violations  worst %.3e (tol %.1e)  %.1f s\n", pad(name, 22).c_str(),
                r.instances, r.violations, r.worst, r.tolerance, r.seconds);
    for (const auto& v : r.violating) {
      const fs::path file = out_dir / "props_violations" / (name + "-" + std::to_string(v.seed) + ".json");
      write_json(file, jlab::props::violation_to_json(v));
      std::printf("  violation serialized to %s\n", file.string().c_str());
    }
  }
  json out = metadata("props", g, digest, jlab::props::tolerances_to_json(tolerances));
  out["sizes"] = jlab::props::sizes_to_json(args.sizes);
  out["suites"] = results;
  out["violations"] = violations;
  out["timing"] = timing;
  write_json(out_dir / "props.json", out);
  return violations == 0 ? kOk : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jlab: J-equation laboratory"};
  app.set_version_flag("--version", std::string(JLAB_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Random seed recorded in every output")->capture_default_str();
  app.add_option("--tol", g.tol, "Override the primary tolerance of the command");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for node loops and sweeps")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();

  CheckArgs check;
  auto* cmd_check = app.add_subcommand("check", "Slope classification of (alpha, beta)");
  cmd_check->add_option("geometry", check.geometry, "Geometry or fan JSON");
  cmd_check->add_option("--scenario", check.scenario, "Scenario JSON {geometry, alpha, beta, eps?}");
  cmd_check->add_option("--alpha", check.alpha, "Class of alpha, e.g. \"2,-1\"");
  cmd_check->add_option("--beta", check.beta, "Class of beta");
  cmd_check->add_option("--eps", check.eps, "Uniformity parameter epsilon >= 0")->capture_default_str();

  CsckArgs csck;
  auto* cmd_csck = app.add_subcommand("csck", "cscK slope test, optionally along K_X + t gamma");
  cmd_csck->add_option("geometry", csck.geometry, "Geometry JSON with K_X")->required();
  cmd_csck->add_option("--gamma", csck.gamma, "Class gamma")->required();
  cmd_csck->add_option("--eps", csck.eps, "epsilon >= 0")->capture_default_str();
  cmd_csck->add_option("--alpha-invariant", csck.alpha_invariant, "alpha(X, gamma) supplied as a datum");
  cmd_csck->add_option("--t-lo", csck.t_lo, "Lower end of the t range for K_X + t gamma");
  cmd_csck->add_option("--t-hi", csck.t_hi, "Upper end of the t range");
  cmd_csck->add_option("--iterations", csck.iterations, "Bisection steps")->capture_default_str();

  TorusArgs torus;
  auto* cmd_torus = app.add_subcommand("solve-torus", "J-flow on the periodic torus");
  cmd_torus->add_option("problem", torus.problem, "Torus problem JSON")->required()->check(CLI::ExistingFile);
  cmd_torus->add_option("--dt", torus.dt, "Fixed time step (0 = automatic)")->capture_default_str();
  cmd_torus->add_option("--max-steps", torus.max_steps, "Step limit")->capture_default_str();
  cmd_torus->add_option("--history-every", torus.history_every, "Residual history stride")->capture_default_str();
  cmd_torus->add_option("--field-format", torus.field_format, "binary or csv")
      ->check(CLI::IsMember({"binary", "csv"}))
      ->capture_default_str();

  CalabiArgs calabi;
  auto* cmd_calabi = app.add_subcommand("solve-calabi", "Calabi-symmetric J-equation on F_a");
  cmd_calabi->add_option("config", calabi.config, "CalabiProblem JSON {a, s, t, m_alpha, m_beta}");
  cmd_calabi->add_option("--a", calabi.a, "Twist a of F_a")->capture_default_str();
  cmd_calabi->add_option("--s", calabi.s, "alpha . E")->capture_default_str();
  cmd_calabi->add_option("--t", calabi.t, "beta . E");
  cmd_calabi->add_option("--m-alpha", calabi.m_alpha, "alpha . fiber")->capture_default_str();
  cmd_calabi->add_option("--m-beta", calabi.m_beta, "beta . fiber");
  cmd_calabi->add_option("--rho-step", calabi.rho_step, "Profile mesh step")->capture_default_str();

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "Calabi versus intersection verdict sweep");
  cmd_sweep->add_option("config", sweep.config, "Sweep JSON {s, m_alpha, t: [...], m_beta: [...], a: [...]}");
  cmd_sweep->add_option("--rho-step", sweep.rho_step, "Profile mesh step")->capture_default_str();

  PropsArgs props;
  auto* cmd_props = app.add_subcommand("props", "Randomised property suites");
  cmd_props->add_option("--suite", props.suites, "Suite name (repeatable)")
      ->check(CLI::IsMember(jlab::props::suite_names()));
  cmd_props->add_option("--replay", props.replay, "Re-evaluate a serialized instance");
  cmd_props->add_option("--instances", props.sizes.p_operator_instances, "Hyperplane-dominance instances")
      ->capture_default_str();
  cmd_props->add_option("--hyperplanes", props.sizes.hyperplanes, "Sampled hyperplanes per instance")
      ->capture_default_str();
  cmd_props->add_option("--convexity-instances", props.sizes.convexity_instances)->capture_default_str();
  cmd_props->add_option("--schur-instances", props.sizes.schur_instances)->capture_default_str();
  cmd_props->add_option("--gluing-pairs", props.sizes.gluing_pairs)->capture_default_str();
  cmd_props->add_option("--gluing-res", props.sizes.gluing_res)->check(CLI::Range(8, 128))->capture_default_str();
  cmd_props->add_option("--gluing-radii", props.sizes.gluing_radii, "Mollifier radii in units of h (each below res/4)")
      ->expected(1, -1);
  cmd_props->add_option("--lelong-instances", props.sizes.lelong_instances)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  jlab::set_thread_count(g.threads);
  try {
    if (*cmd_check) return run_check(check, g);
    if (*cmd_csck) return run_csck(csck, g);
    if (*cmd_torus) return run_solve_torus(torus, g);
    if (*cmd_calabi) return run_solve_calabi(calabi, g);
    if (*cmd_sweep) return run_sweep(sweep, g);
    if (*cmd_props) return run_props(props, g);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}

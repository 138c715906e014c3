#include "jlab/io.hpp"

#include "jlab/errors.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace jlab::io {

namespace fs = std::filesystem;

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_unsigned()) return Rational(j.get<unsigned long long>());
  if (j.is_number_float()) {
    // The shortest round-trip text of the double is the decimal the user wrote.
    return parse_rational(j.dump());
  }
  throw ValidationError("expected a number or a rational string, got " + j.dump());
}

json rational_to_json(const Rational& q) { return format_rational(q); }

ClassVector class_from_json(const json& j) {
  if (j.is_string()) return parse_class_text(j.get<std::string>());
  if (!j.is_array()) throw ValidationError("class must be an array of coefficients");
  ClassVector out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

json class_to_json(const ClassVector& c) {
  json out = json::array();
  for (const auto& q : c) out.push_back(format_rational(q));
  return out;
}

ClassVector parse_class_text(const std::string& text) {
  ClassVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw ArgumentError("empty class '" + text + "'");
  return out;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("matrix must be a list of [re, im] pairs");
  const std::size_t count = j.size();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
  if (n < 1 || static_cast<std::size_t>(n * n) != count) {
    throw ValidationError("matrix entry count " + std::to_string(count) + " is not a square");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const json& e = j[static_cast<std::size_t>(r * n + c)];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError("matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return out;
}

namespace {

int basis_index(const json& x, const std::vector<std::string>& basis) {
  if (x.is_number_integer()) {
    const int i = x.get<int>();
    if (i < 0 || i >= static_cast<int>(basis.size())) {
      throw ValidationError("basis index " + std::to_string(i) + " out of range");
    }
    return i;
  }
  if (x.is_string()) {
    const auto name = x.get<std::string>();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i] == name) return static_cast<int>(i);
    }
    throw ValidationError("unknown basis label '" + name + "'");
  }
  throw ValidationError("basis index must be an integer or a label");
}

SymmetricTable table_from_json(const json& j, int arity, const std::vector<std::string>& basis) {
  SymmetricTable t(arity, static_cast<int>(basis.size()));
  if (arity == 1 && j.is_array() && (j.empty() || !j.front().is_object())) {
    // Dense vector form for curves: [v_0, v_1, ...].
    if (j.size() != basis.size()) throw ValidationError("cap vector has wrong length");
    for (std::size_t i = 0; i < j.size(); ++i) t.set({static_cast<int>(i)}, rational_from_json(j[i]));
    return t;
  }
  if (!j.is_array()) throw ValidationError("table must be a list of {index, value} entries");
  for (const auto& e : j) {
    const json& idx = e.at("index");
    if (!idx.is_array() || static_cast<int>(idx.size()) != arity) {
      throw ValidationError("table index must list " + std::to_string(arity) + " entries");
    }
    std::vector<int> index;
    for (const auto& x : idx) index.push_back(basis_index(x, basis));
    const Rational value = rational_from_json(e.at("value"));
    const Rational existing = t.at(index);
    if (existing != 0 && existing != value) {
      throw ValidationError("table lists conflicting values for a symmetric index");
    }
    t.set(index, value);
  }
  return t;
}

json table_to_json(const SymmetricTable& t) {
  json out = json::array();
  for (const auto& [index, value] : t.entries()) {
    out.push_back({{"index", index}, {"value", format_rational(value)}});
  }
  return out;
}

}  // namespace

GeometryModel geometry_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const auto basis = j.at("basis").get<std::vector<std::string>>();
    SymmetricTable top = table_from_json(j.at("top"), n, basis);
    std::vector<SubvarietyRecord> subs;
    for (const auto& z : j.value("subvarieties", json::array())) {
      const int m = z.at("m").get<int>();
      subs.push_back({z.at("name").get<std::string>(), m, table_from_json(z.at("cap"), m, basis)});
    }
    std::vector<CurveRecord> curves;
    if (j.contains("curves")) {
      for (const auto& c : j.at("curves")) {
        curves.push_back({c.at("name").get<std::string>(), class_from_json(c.at("dual"))});
      }
    } else {
      for (const auto& z : subs) {
        if (z.m != 1) continue;
        ClassVector dual(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) dual[i] = z.cap.at({static_cast<int>(i)});
        curves.push_back({z.name, dual});
      }
    }
    std::optional<ClassVector> k;
    if (j.contains("K_X") && !j.at("K_X").is_null()) k = class_from_json(j.at("K_X"));
    return GeometryModel(n, basis, std::move(top), std::move(subs), std::move(curves), std::move(k));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("geometry: ") + e.what());
  }
}

json geometry_to_json(const GeometryModel& g) {
  json out;
  out["n"] = g.n();
  out["basis"] = g.basis();
  out["top"] = table_to_json(g.top());
  json subs = json::array();
  for (const auto& z : g.subvarieties()) {
    subs.push_back({{"name", z.name}, {"m", z.m}, {"cap", table_to_json(z.cap)}});
  }
  out["subvarieties"] = subs;
  json curves = json::array();
  for (const auto& c : g.curves()) curves.push_back({{"name", c.name}, {"dual", class_to_json(c.dual)}});
  out["curves"] = curves;
  if (g.canonical()) out["K_X"] = class_to_json(*g.canonical());
  return out;
}

ToricFan2D fan_from_json(const json& j) {
  try {
    std::vector<ToricFan2D::Ray> rays;
    for (const auto& r : j.at("rays")) {
      if (!r.is_array() || r.size() != 2) throw ValidationError("fan: each ray must be [x, y]");
      rays.push_back({r[0].get<long>(), r[1].get<long>()});
    }
    return ToricFan2D(std::move(rays));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fan: ") + e.what());
  }
}

json fan_to_json(const ToricFan2D& fan) {
  json rays = json::array();
  for (const auto& r : fan.rays()) rays.push_back({r[0], r[1]});
  return {{"rays", rays}};
}

json toric_model_to_json(const ToricModel& model) {
  json out = geometry_to_json(model.geometry);
  json basis_change = json::array();
  for (std::size_t i = 0; i < model.change_of_basis.size(); ++i) {
    basis_change.push_back({{"divisor", "D" + std::to_string(i)}, {"class", class_to_json(model.change_of_basis[i])}});
  }
  out["change_of_basis"] = basis_change;
  out["self_intersection"] = model.self_intersection;
  return out;
}

json verdict_to_json(const Verdict& v) {
  json per_z = json::array();
  for (const auto& e : v.per_z) {
    json z{{"name", e.name}, {"m", e.m}};
    if (e.kahler_violation) {
      z["kahler_violation"] = true;
      z["slope"] = nullptr;
      z["margin"] = nullptr;
    } else {
      z["slope"] = format_rational(*e.slope);
      z["slope_value"] = to_double(*e.slope);
      z["margin"] = format_rational(*e.margin);
    }
    per_z.push_back(z);
  }
  json out{{"classification", to_string(v.classification)},
           {"relative_to", "supplied subvariety list"},
           {"c", format_rational(v.c)},
           {"global_slope", format_rational(v.global_slope)},
           {"global_slope_value", to_double(v.global_slope)},
           {"epsilon", format_rational(v.epsilon)},
           {"per_Z", per_z}};
  if (v.uniform) out["uniform"] = *v.uniform;
  if (v.witness) {
    json w{{"name", *v.witness}};
    if (v.witness_slope) w["slope"] = format_rational(*v.witness_slope);
    out["witness"] = w;
  }
  return out;
}

json csck_to_json(const CsckVerdict& v) {
  json per_z = json::array();
  for (const auto& e : v.per_z) {
    json z{{"name", e.name}, {"m", e.m}, {"rhs", format_rational(e.rhs)}};
    if (e.lhs) {
      z["lhs"] = format_rational(*e.lhs);
    } else {
      z["lhs"] = nullptr;
      z["kahler_violation"] = true;
    }
    per_z.push_back(z);
  }
  json out{{"passes", v.passes},
           {"epsilon", format_rational(v.epsilon)},
           {"ratio", format_rational(v.ratio)},
           {"per_Z", per_z}};
  if (v.witness) out["witness"] = *v.witness;
  if (v.alpha_gate) out["alpha_gate"] = *v.alpha_gate;
  return out;
}

json solve_report_to_json(const SolveReport& r, bool include_wall_clock) {
  json out{{"verdict", to_string(r.verdict)},
           {"reason", r.reason},
           {"sup_residual", r.sup_residual},
           {"min_margin", r.min_margin},
           {"min_margin_node", r.min_margin_node},
           {"iterations", r.iterations},
           {"final_dt", r.final_dt},
           {"c_final", r.c_final},
           {"class_drift", r.class_drift}};
  if (include_wall_clock) out["wall_clock"] = r.wall_clock;
  return out;
}

json calabi_report_to_json(const CalabiReport& r, bool include_wall_clock) {
  return {{"classification", to_string(r.classification)},
          {"c", format_rational(r.c)},
          {"min_g_prime", r.min_g_prime},
          {"argmin_f", r.argmin_f},
          {"endpoint_defect", r.endpoint_defect},
          {"max_first_integral", r.max_first_integral},
          {"max_ode_residual", r.max_ode_residual},
          {"gates_passed", r.gates_passed},
          {"profile_points", r.profile.size()},
          {"solve", solve_report_to_json(r.solve, include_wall_clock)}};
}

json sweep_summary_to_json(const SweepResult& r) {
  const double pct = r.non_boundary == 0 ? 100.0 : 100.0 * r.non_boundary_agreements / r.non_boundary;
  json disagreements = json::array();
  for (const auto& e : r.entries) {
    if (e.agree) continue;
    disagreements.push_back({{"problem", calabi_problem_to_json(e.problem)},
                             {"calabi", to_string(e.calabi)},
                             {"intersection", to_string(e.intersection)},
                             {"min_g_prime", e.min_g_prime}});
  }
  return {{"instances", r.entries.size()},
          {"agreements", r.agreements},
          {"boundary", r.boundary},
          {"non_boundary", r.non_boundary},
          {"non_boundary_agreements", r.non_boundary_agreements},
          {"agreement_percent", pct},
          {"gates",
           {{"dictionary", r.dictionary_passed},
            {"max_endpoint_defect", r.max_endpoint_defect},
            {"max_first_integral", r.max_first_integral},
            {"max_ode_residual", r.max_ode_residual},
            {"passed", r.gates_passed}}},
          {"disagreements", disagreements}};
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "a,s,t,m_alpha,m_beta,calabi,intersection,agree,min_g_prime\n";
  out.precision(17);
  for (const auto& e : r.entries) {
    const auto& p = e.problem;
    out << p.a << ',' << format_rational(p.s) << ',' << format_rational(p.t) << ','
        << format_rational(p.m_alpha) << ',' << format_rational(p.m_beta) << ',' << to_string(e.calabi)
        << ',' << to_string(e.intersection) << ',' << (e.agree ? 1 : 0) << ',' << e.min_g_prime << '\n';
  }
  return out.str();
}

std::string profile_to_csv(const CalabiReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "rho,f,g,residual,margin\n";
  for (const auto& row : r.profile) {
    out << row.rho << ',' << row.f << ',' << row.g << ',' << row.residual << ',' << row.margin << '\n';
  }
  return out.str();
}

CalabiProblem calabi_problem_from_json(const json& j) {
  try {
    CalabiProblem p{j.at("a").get<int>(), rational_from_json(j.at("s")), rational_from_json(j.at("t")),
                    rational_from_json(j.at("m_alpha")), rational_from_json(j.at("m_beta"))};
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("calabi problem: ") + e.what());
  }
}

json calabi_problem_to_json(const CalabiProblem& p) {
  return {{"a", p.a},
          {"s", format_rational(p.s)},
          {"t", format_rational(p.t)},
          {"m_alpha", format_rational(p.m_alpha)},
          {"m_beta", format_rational(p.m_beta)}};
}

SweepConfig sweep_config_from_json(const json& j) {
  try {
    SweepConfig cfg = SweepConfig::standard();
    if (j.contains("s")) cfg.s = rational_from_json(j.at("s"));
    if (j.contains("m_alpha")) cfg.m_alpha = rational_from_json(j.at("m_alpha"));
    if (j.contains("t")) cfg.t = class_from_json(j.at("t"));
    if (j.contains("m_beta")) cfg.m_beta = class_from_json(j.at("m_beta"));
    if (j.contains("a")) cfg.a = j.at("a").get<std::vector<int>>();
    return cfg;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sweep config: ") + e.what());
  }
}

json sweep_config_to_json(const SweepConfig& c) {
  return {{"s", format_rational(c.s)},
          {"m_alpha", format_rational(c.m_alpha)},
          {"t", class_to_json(c.t)},
          {"m_beta", class_to_json(c.m_beta)},
          {"a", c.a}};
}

PeriodicGrid grid_from_json(const json& n, const json& res) {
  const int dim = n.get<int>();
  if (res.is_array()) return PeriodicGrid(dim, res.get<std::vector<int>>());
  return PeriodicGrid(dim, res.get<int>());
}

json grid_res_to_json(const PeriodicGrid& g) {
  if (g.uniform()) return g.res(0);
  return g.resolutions();
}

namespace {

const char* format_name(FieldFormat f) { return f == FieldFormat::kBinary ? "binary" : "csv"; }

fs::path write_header(const fs::path& stem, const PeriodicGrid& grid, const char* kind, FieldFormat format) {
  const fs::path data = stem.string() + (format == FieldFormat::kBinary ? ".bin" : ".csv");
  const fs::path header = stem.string() + ".json";
  json h{{"n", grid.n()},
         {"res", grid_res_to_json(grid)},
         {"kind", kind},
         {"format", format_name(format)},
         {"data", data.filename().string()}};
  write_text_file(header, h.dump(2) + "\n");
  return header;
}

void write_doubles(const fs::path& path, const std::vector<double>& values, int per_row, FieldFormat format) {
  if (format == FieldFormat::kBinary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigurationError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    return;
  }
  std::ostringstream text;
  text.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    text << values[i] << (((i + 1) % static_cast<std::size_t>(per_row)) == 0 ? '\n' : ',');
  }
  write_text_file(path, text.str());
}

std::vector<double> read_doubles(const fs::path& path, std::size_t count, FieldFormat format) {
  std::vector<double> values;
  if (format == FieldFormat::kBinary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigurationError("cannot read " + path.string());
    values.resize(count);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double)) {
      throw ValidationError("field data " + path.string() + " is truncated");
    }
    return values;
  }
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("field data " + path.string() + ": bad value '" + cell + "'");
      }
    }
  }
  if (values.size() != count) {
    throw ValidationError("field data " + path.string() + " has " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(count));
  }
  return values;
}

}  // namespace

fs::path write_field(const fs::path& stem, const ScalarField& f, FieldFormat format) {
  const fs::path header = write_header(stem, f.grid(), "scalar", format);
  write_doubles(stem.string() + (format == FieldFormat::kBinary ? ".bin" : ".csv"),
                std::vector<double>(f.values().begin(), f.values().end()), 1, format);
  return header;
}

fs::path write_field(const fs::path& stem, const FormField& f, FieldFormat format) {
  const fs::path header = write_header(stem, f.grid(), "form", format);
  const int n = f.dim();
  std::vector<double> values;
  values.reserve(f.size() * static_cast<std::size_t>(2 * n * n));
  for (std::size_t node = 0; node < f.size(); ++node) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        values.push_back(f.entry(node, j, k).real());
        values.push_back(f.entry(node, j, k).imag());
      }
    }
  }
  write_doubles(stem.string() + (format == FieldFormat::kBinary ? ".bin" : ".csv"), values, 2 * n * n,
                format);
  return header;
}

AnyField read_field(const fs::path& header_path) {
  const json h = read_json_file(header_path);
  try {
    const PeriodicGrid grid = grid_from_json(h.at("n"), h.at("res"));
    const std::string kind = h.at("kind").get<std::string>();
    const std::string fmt = h.value("format", "binary");
    if (fmt != "binary" && fmt != "csv") throw ValidationError("field: unknown format '" + fmt + "'");
    const FieldFormat format = fmt == "binary" ? FieldFormat::kBinary : FieldFormat::kCsv;
    const fs::path data = header_path.parent_path() / h.at("data").get<std::string>();
    if (kind == "scalar") {
      ScalarField f(grid, read_doubles(data, grid.size(), format));
      if (!f.all_finite()) throw ValidationError("field: non-finite values");
      return f;
    }
    if (kind == "form") {
      const int n = grid.n();
      const auto values = read_doubles(data, grid.size() * static_cast<std::size_t>(2 * n * n), format);
      FormField f(grid);
      std::size_t i = 0;
      for (std::size_t node = 0; node < grid.size(); ++node) {
        Matrix m(n, n);
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k, i += 2) m(j, k) = Complex(values[i], values[i + 1]);
        }
        f.set(node, HermitianForm(m).matrix());
      }
      return f;
    }
    throw ValidationError("field: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ValidationError("field header " + header_path.string() + ": " + e.what());
  }
}

ScalarField read_scalar_field(const fs::path& header) {
  AnyField f = read_field(header);
  if (!std::holds_alternative<ScalarField>(f)) {
    throw ValidationError(header.string() + " does not hold a scalar field");
  }
  return std::get<ScalarField>(std::move(f));
}

ScalarField trig_potential(const PeriodicGrid& grid, const json& terms) {
  if (!terms.is_array()) throw ValidationError("trig potential must be a list of terms");
  struct Factor {
    bool cosine;
    int axis;
    double freq;
  };
  struct Term {
    double amplitude;
    std::vector<Factor> factors;
  };
  std::vector<Term> parsed;
  for (const auto& t : terms) {
    Term term{t.at("amplitude").get<double>(), {}};
    for (const auto& f : t.value("factors", json::array())) {
      const std::string kind = f.at(0).get<std::string>();
      if (kind != "cos" && kind != "sin") throw ValidationError("trig factor must be cos or sin");
      const int axis = f.at(1).get<int>();
      if (axis < 0 || axis >= grid.axes()) throw ValidationError("trig factor axis out of range");
      term.factors.push_back({kind == "cos", axis, f.at(2).get<double>()});
    }
    parsed.push_back(std::move(term));
  }
  return ScalarField::sample(grid, [&](std::span<const double> x) {
    double sum = 0.0;
    for (const auto& t : parsed) {
      double v = t.amplitude;
      for (const auto& f : t.factors) {
        const double arg = 2.0 * std::numbers::pi * f.freq * x[static_cast<std::size_t>(f.axis)];
        v *= f.cosine ? std::cos(arg) : std::sin(arg);
      }
      sum += v;
    }
    return sum;
  });
}

namespace {

FormField form_from_json(const PeriodicGrid& grid, const json& j, const fs::path& base) {
  const HermitianForm constant(matrix_from_json(j.at("constant")));
  if (!j.contains("potential")) return background_form(grid, constant);
  const json& p = j.at("potential");
  ScalarField potential;
  if (p.contains("field")) {
    potential = read_scalar_field(base / p.at("field").get<std::string>());
    if (!(potential.grid() == grid)) throw ValidationError("potential field grid does not match the problem");
  } else if (p.contains("trig")) {
    potential = trig_potential(grid, p.at("trig"));
  } else {
    throw ValidationError("potential must contain 'field' or 'trig'");
  }
  return background_form(grid, constant, &potential);
}

}  // namespace

TorusProblem torus_problem_from_json(const json& j, const fs::path& base_dir) {
  try {
    const PeriodicGrid grid = grid_from_json(j.at("n"), j.at("res"));
    FormField omega0 = form_from_json(grid, j.at("omega0"), base_dir);
    FormField chi = form_from_json(grid, j.at("chi"), base_dir);
    std::optional<ScalarField> twist;
    if (j.contains("twist")) {
      const json& t = j.at("twist");
      if (t.contains("field")) {
        twist = read_scalar_field(base_dir / t.at("field").get<std::string>());
      } else if (t.contains("trig")) {
        twist = trig_potential(grid, t.at("trig"));
      } else {
        throw ValidationError("twist must contain 'field' or 'trig'");
      }
    }
    std::optional<double> c;
    if (j.contains("c")) c = j.at("c").get<double>();
    return TorusProblem(std::move(omega0), std::move(chi), std::move(twist), c);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("torus problem: ") + e.what());
  }
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out << text;
}

}  // namespace jlab::io

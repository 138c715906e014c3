#pragma once

#include "jlab/calabi.hpp"
#include "jlab/grid.hpp"
#include "jlab/intersection.hpp"
#include "jlab/jflow.hpp"
#include "jlab/toric.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <variant>

namespace jlab::io {

using nlohmann::json;

/// Exact value of a JSON number (read from its decimal text) or of a string
/// such as "29/10".
Rational rational_from_json(const json& j);
/// "p/q" string form.
json rational_to_json(const Rational& q);
ClassVector class_from_json(const json& j);
json class_to_json(const ClassVector& c);
/// Comma-separated coefficients, e.g. "2,-1" or "3, -29/10".
ClassVector parse_class_text(const std::string& text);

/// Row-major list of [re, im] pairs; the dimension is inferred.
Matrix matrix_from_json(const json& j);
json matrix_to_json(const Matrix& m);

/// {n, basis, top: [{index, value}], subvarieties: [{name, m, cap: [{index, value}]}],
///  curves: [{name, dual}], K_X?}. Indices may be integers or basis labels.
/// Curves default to the m = 1 subvarieties when omitted.
GeometryModel geometry_from_json(const json& j);
json geometry_to_json(const GeometryModel& g);

ToricFan2D fan_from_json(const json& j);
json fan_to_json(const ToricFan2D& fan);
json toric_model_to_json(const ToricModel& model);

json verdict_to_json(const Verdict& v);
json csck_to_json(const CsckVerdict& v);
json solve_report_to_json(const SolveReport& r, bool include_wall_clock = true);
json calabi_report_to_json(const CalabiReport& r, bool include_wall_clock = true);
json sweep_summary_to_json(const SweepResult& r);
/// One row per instance: a,s,t,m_alpha,m_beta,calabi,intersection,agree,min_g_prime.
std::string sweep_to_csv(const SweepResult& r);
/// rho,f,g,residual,margin.
std::string profile_to_csv(const CalabiReport& r);

CalabiProblem calabi_problem_from_json(const json& j);
json calabi_problem_to_json(const CalabiProblem& p);
SweepConfig sweep_config_from_json(const json& j);
json sweep_config_to_json(const SweepConfig& c);

// Fields: a JSON header {n, res, kind, format, data} next to a flat data file
// in node-major order (axis order x_1..x_n, y_1..y_n, x_1 slowest).

enum class FieldFormat { kBinary, kCsv };

using AnyField = std::variant<ScalarField, FormField>;

PeriodicGrid grid_from_json(const json& n, const json& res);
json grid_res_to_json(const PeriodicGrid& g);

/// Writes `<stem>.json` and `<stem>.bin` or `<stem>.csv`; returns the header path.
std::filesystem::path write_field(const std::filesystem::path& stem, const ScalarField& f,
                                  FieldFormat format);
std::filesystem::path write_field(const std::filesystem::path& stem, const FormField& f,
                                  FieldFormat format);
/// Reads a header and its data file (resolved relative to the header).
AnyField read_field(const std::filesystem::path& header);
ScalarField read_scalar_field(const std::filesystem::path& header);

/// Torus problem document:
/// {n, res, omega0: {constant, potential?}, chi: {constant, potential?},
///  twist?: {field} , c?}. A potential is {field: header-path} or
/// {trig: [{amplitude, factors: [["cos"|"sin", axis, frequency], ...]}]}.
TorusProblem torus_problem_from_json(const json& j, const std::filesystem::path& base_dir);

/// sum of amplitude * prod cos/sin(2 pi k x_axis).
ScalarField trig_potential(const PeriodicGrid& grid, const json& terms);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace jlab::io

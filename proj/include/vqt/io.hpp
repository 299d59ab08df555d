#pragma once

// CSV and JSON serialization for curves, datasets, matrices and VQT results.
// Numbers are printed with 15 significant digits so outputs are reproducible
// byte for byte.

#include "vqt/optimizer.hpp"
#include "vqt/qcore.hpp"
#include "vqt/thermo.hpp"
#include "vqt/vqt.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace vqt::io {

using Json = nlohmann::ordered_json;

/// "%.15g"; nan/inf are printed as "nan", "inf", "-inf".
std::string format_number(double v);

/// Parses a number as printed by format_number; throws InputError on junk.
double parse_number(const std::string& text);

/// Dataset CSV: header `T_K,value,sigma` (sigma column optional). Lines
/// starting with '#' are comments; `# quantity: <name>` and `# source: <text>`
/// set metadata. `origin` prefixes error messages, which name the line.
thermo::ExperimentalDataset read_dataset(std::istream& in, const std::string& origin = "<stream>");
thermo::ExperimentalDataset read_dataset_file(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const thermo::ExperimentalDataset& ds);

/// Property CSV: `T_K,value,uncertainty,provenance` preceded by `# quantity: <name>`.
void write_curve(std::ostream& out, const thermo::PropertyCurve& curve);
thermo::PropertyCurve read_curve(std::istream& in, const std::string& origin = "<stream>");

/// iteration,cost,best_cost,radius,params_hash
void write_trace(std::ostream& out, const opt::OptimizationTrace& trace);

Json matrix_json(const qcore::Matrix& m);
Json vqt_result_json(const VqtResult& r, const VqtProblem& prob);
Json fit_result_json(const thermo::FitResult& r, const thermo::ExperimentalDataset& data);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// JSON dump with two-space indentation and a trailing newline; doubles go
/// through format_number.
std::string dump_json(const Json& j);

}  // namespace vqt::io

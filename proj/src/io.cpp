#include "vqt/io.hpp"

#include "vqt/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vqt::io {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

// "# key: value" -> (key, value)
bool comment_field(const std::string& line, std::string& key, std::string& value) {
    const std::string body = trim(line.substr(1));
    const auto colon = body.find(':');
    if (colon == std::string::npos) {
        return false;
    }
    key = trim(body.substr(0, colon));
    value = trim(body.substr(colon + 1));
    return true;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
    throw InputError(origin + ":" + std::to_string(line) + ": " + msg);
}

double number_at(const std::string& text, const std::string& origin, std::size_t line, const char* column) {
    try {
        return parse_number(text);
    } catch (const InputError&) {
        fail(origin, line, std::string("bad ") + column + " '" + text + "'");
    }
}

// Rounds through the printed form so JSON carries 15 significant digits.
Json num(double v) {
    if (!std::isfinite(v)) {
        return Json(nullptr);
    }
    return Json(std::strtod(format_number(v).c_str(), nullptr));
}

Json vector_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) {
        a.push_back(num(x));
    }
    return a;
}

Json curve_points_json(const thermo::PropertyCurve& c) {
    Json a = Json::array();
    for (const auto& p : c.points) {
        a.push_back(Json{{"T_K", num(p.temperature)}, {"value", num(p.value)}});
    }
    return a;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
    return buf;
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) {
        throw InputError("empty number");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw InputError("not a number: '" + t + "'");
    }
    return v;
}

thermo::ExperimentalDataset read_dataset(std::istream& in, const std::string& origin) {
    thermo::ExperimentalDataset ds;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    bool has_sigma = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t[0] == '#') {
            std::string key, value;
            if (comment_field(t, key, value)) {
                if (key == "quantity") {
                    try {
                        ds.quantity = thermo::parse_quantity(value);
                    } catch (const ConfigError& e) {
                        fail(origin, lineno, e.what());
                    }
                } else if (key == "source") {
                    ds.source = value;
                }
            }
            continue;
        }
        const auto cells = split(t);
        if (!header_seen) {
            if (cells.size() < 2 || cells.size() > 3 || cells[0] != "T_K" || cells[1] != "value" ||
                (cells.size() == 3 && cells[2] != "sigma")) {
                fail(origin, lineno, "expected header 'T_K,value[,sigma]'");
            }
            has_sigma = cells.size() == 3;
            header_seen = true;
            continue;
        }
        if (cells.size() < 2 || cells.size() > (has_sigma ? 3u : 2u)) {
            fail(origin, lineno, "wrong number of columns");
        }
        thermo::DatasetRecord r;
        r.temperature = number_at(cells[0], origin, lineno, "T_K");
        r.value = number_at(cells[1], origin, lineno, "value");
        if (cells.size() == 3 && !cells[2].empty()) {
            r.sigma = number_at(cells[2], origin, lineno, "sigma");
            if (!(*r.sigma > 0.0)) {
                fail(origin, lineno, "sigma must be positive");
            }
        }
        if (!(r.temperature > 0.0) || !std::isfinite(r.temperature)) {
            fail(origin, lineno, "temperature must be positive");
        }
        if (!std::isfinite(r.value)) {
            fail(origin, lineno, "value must be finite");
        }
        ds.records.push_back(r);
    }
    if (!header_seen) {
        throw InputError(origin + ": missing header");
    }
    return ds;
}

thermo::ExperimentalDataset read_dataset_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open dataset '" + path.string() + "'");
    }
    return read_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const thermo::ExperimentalDataset& ds) {
    out << "# quantity: " << thermo::quantity_name(ds.quantity) << '\n';
    if (!ds.source.empty()) {
        out << "# source: " << ds.source << '\n';
    }
    out << "T_K,value,sigma\n";
    for (const auto& r : ds.records) {
        out << format_number(r.temperature) << ',' << format_number(r.value) << ','
            << (r.sigma ? format_number(*r.sigma) : std::string()) << '\n';
    }
}

void write_curve(std::ostream& out, const thermo::PropertyCurve& curve) {
    out << "# quantity: " << thermo::quantity_name(curve.quantity) << '\n';
    out << "T_K,value,uncertainty,provenance\n";
    const auto prov = thermo::provenance_name(curve.provenance);
    for (const auto& p : curve.points) {
        out << format_number(p.temperature) << ',' << format_number(p.value) << ','
            << (p.uncertainty ? format_number(*p.uncertainty) : std::string()) << ',' << prov << '\n';
    }
}

thermo::PropertyCurve read_curve(std::istream& in, const std::string& origin) {
    thermo::PropertyCurve c;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    bool provenance_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t[0] == '#') {
            std::string key, value;
            if (comment_field(t, key, value) && key == "quantity") {
                try {
                    c.quantity = thermo::parse_quantity(value);
                } catch (const ConfigError& e) {
                    fail(origin, lineno, e.what());
                }
            }
            continue;
        }
        const auto cells = split(t);
        if (!header_seen) {
            if (cells != std::vector<std::string>{"T_K", "value", "uncertainty", "provenance"}) {
                fail(origin, lineno, "expected header 'T_K,value,uncertainty,provenance'");
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != 4) {
            fail(origin, lineno, "wrong number of columns");
        }
        thermo::CurvePoint p;
        p.temperature = number_at(cells[0], origin, lineno, "T_K");
        p.value = number_at(cells[1], origin, lineno, "value");
        if (!cells[2].empty()) {
            p.uncertainty = number_at(cells[2], origin, lineno, "uncertainty");
        }
        thermo::Provenance prov;
        try {
            prov = thermo::parse_provenance(cells[3]);
        } catch (const ConfigError& e) {
            fail(origin, lineno, e.what());
        }
        if (provenance_seen && prov != c.provenance) {
            fail(origin, lineno, "mixed provenance in one curve");
        }
        c.provenance = prov;
        provenance_seen = true;
        c.points.push_back(p);
    }
    if (!header_seen) {
        throw InputError(origin + ": missing header");
    }
    c.validate();
    return c;
}

void write_trace(std::ostream& out, const opt::OptimizationTrace& trace) {
    out << "iteration,cost,best_cost,radius,params_hash\n";
    for (const auto& r : trace.records) {
        char hash[24];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.params_hash));
        out << r.iteration << ',' << format_number(r.cost) << ',' << format_number(r.best_cost) << ','
            << format_number(r.radius) << ',' << hash << '\n';
    }
}

Json matrix_json(const qcore::Matrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        Json row_re = Json::array();
        Json row_im = Json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) {
            row_re.push_back(num(m(r, c).real()));
            row_im.push_back(num(m(r, c).imag()));
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    return Json{{"dim", m.dim()}, {"basis", {"00", "01", "10", "11"}}, {"real", std::move(re)}, {"imag", std::move(im)}};
}

Json vqt_result_json(const VqtResult& r, const VqtProblem& prob) {
    const auto& t = r.trace;
    Json j;
    j["j_over_kb"] = num(prob.model.j_over_kb);
    j["g_factor"] = num(prob.model.g_factor);
    j["temperature"] = num(r.temperature);
    j["mode"] = std::string(estimator::mode_name(prob.mode));
    j["shots_per_term"] = prob.shots.shots_per_term;
    j["seed"] = prob.optimizer.seed;
    j["layers"] = prob.layers;
    j["optimizer"] = Json{{"method", std::string(opt::method_name(prob.optimizer.method))},
                          {"max_iterations", prob.optimizer.max_iterations},
                          {"restarts", prob.optimizer.restarts},
                          {"polish_passes", prob.optimizer.polish_passes},
                          {"initial_step", num(prob.optimizer.initial_step)},
                          {"final_step", num(prob.optimizer.final_step)}};
    j["params"] = Json{{"theta", vector_json({r.params.latent.theta.begin(), r.params.latent.theta.end()})},
                       {"phi", vector_json(r.params.circuit.phi())}};
    j["cost"] = num(r.cost);
    j["exact_cost"] = num(r.exact_cost);
    j["minus_log_z"] = num(-r.log_partition);
    j["cost_gap"] = num(r.exact_cost + r.log_partition);
    j["fidelity_vs_gibbs"] = num(r.fidelity_vs_gibbs);
    j["state"] = matrix_json(r.state.matrix());
    j["trace"] = Json{{"evaluations", t.evaluations},
                      {"primary_evaluations", t.primary_evaluations},
                      {"best_restart", t.best_restart},
                      {"converged", t.converged},
                      {"best_cost", num(t.best_cost)},
                      {"restart_failures", t.restart_failures}};
    return j;
}

Json fit_result_json(const thermo::FitResult& r, const thermo::ExperimentalDataset& data) {
    Json scan = Json::array();
    for (const auto& [jv, res] : r.scan) {
        scan.push_back(Json{{"j_over_kb", num(jv)}, {"residual", num(res)}});
    }
    return Json{{"engine", std::string(thermo::engine_name(r.engine))},
                {"quantity", std::string(thermo::quantity_name(data.quantity))},
                {"source", data.source},
                {"records", data.records.size()},
                {"j_over_kb", num(r.j_over_kb)},
                {"residual", num(r.residual)},
                {"curve", curve_points_json(r.curve)},
                {"scan", std::move(scan)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw std::runtime_error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace vqt::io

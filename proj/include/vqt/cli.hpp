#pragma once

// Command-line front end. Commands live in the library so tests can drive
// them without spawning processes.

#include "vqt/estimator.hpp"
#include "vqt/optimizer.hpp"
#include "vqt/thermo.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vqt::cli {

enum class Format { csv, json };

struct RunConfig {
    std::string command;
    std::vector<double> j_over_kb{1.0};  // K; several values only for `sweep`
    double g_factor = 2.0;
    std::vector<double> temperatures;    // K
    estimator::Mode mode = estimator::Mode::exact;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    std::size_t depth = 2;
    std::size_t max_iterations = 400;
    std::size_t restarts = 4;
    std::size_t polish_passes = 3;
    opt::Method method = opt::Method::linear_approx;
    bool warm_start = false;
    std::filesystem::path out_dir = "out";
    Format format = Format::csv;
    // fit
    std::filesystem::path dataset;
    thermo::FitEngine engine = thermo::FitEngine::analytic;
    double j_min = 0.5;
    double j_max = 20.0;
    std::size_t scan_points = 25;
};

/// "start:stop:n[:log|lin]" or a comma-separated list. Throws ConfigError.
std::vector<double> parse_temperatures(const std::string& spec);

/// 40 log-spaced points in [5e-4, 350] K.
std::vector<double> default_temperatures();

/// Each writes its artifacts under cfg.out_dir and a short summary to `log`.
void cmd_gibbs(const RunConfig& cfg, std::ostream& log);
void cmd_thermalize(const RunConfig& cfg, std::ostream& log);
void cmd_sweep(const RunConfig& cfg, std::ostream& log);
void cmd_fit(const RunConfig& cfg, std::ostream& log);

/// Full entry point. Returns 0 on success, 1 on runtime failure, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vqt::cli

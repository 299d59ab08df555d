#pragma once

// Derivative-free minimization: a linear-interpolation trust-region method in
// the COBYLA family (unconstrained) and a Nelder-Mead simplex fallback.

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vqt::opt {

enum class Method { linear_approx, simplex };

std::string_view method_name(Method method);
Method parse_method(std::string_view name);

struct OptimizerConfig {
    Method method = Method::linear_approx;
    std::size_t max_iterations = 400;  // objective evaluations per start
    double initial_step = 0.5;         // initial trust-region radius (rad)
    double final_step = 1e-4;
    std::size_t restarts = 1;
    std::uint64_t seed = 0;
    // Nelder-Mead passes started from the incumbent after the random starts.
    std::size_t polish_passes = 0;

    void validate() const;
};

struct IterationRecord {
    std::size_t iteration = 0;  // 1-based evaluation counter
    double cost = 0.0;
    double best_cost = 0.0;
    std::uint64_t params_hash = 0;
    double radius = 0.0;
};

struct OptimizationTrace {
    std::vector<IterationRecord> records;
    double best_cost = 0.0;
    std::vector<double> best_params;
    std::size_t evaluations = 0;
    bool converged = false;  // radius reached final_step before the budget ran out
    std::size_t best_restart = 0;
    std::size_t primary_evaluations = 0;  // records from the winning start; polish records follow
    std::vector<std::string> restart_failures;
};

using Objective = std::function<double(const std::vector<double>&)>;
using Sampler = std::function<std::vector<double>(std::mt19937_64&)>;

/// Thrown when the objective returns a non-finite value.
class ObjectiveError : public std::runtime_error {
public:
    ObjectiveError(const std::string& what, std::vector<double> params)
        : std::runtime_error(what), params_(std::move(params)) {}
    const std::vector<double>& params() const { return params_; }

private:
    std::vector<double> params_;
};

/// FNV-1a over the bit patterns of the parameters.
std::uint64_t hash_params(const std::vector<double>& x);

OptimizationTrace minimize(const Objective& objective, const std::vector<double>& initial,
                           const OptimizerConfig& cfg);

/// cfg.restarts independent starts drawn from `sampler`; restart r uses a
/// stream seeded from (cfg.seed, r). If `first_initial` is non-empty it
/// replaces the first draw (warm start). Returns the trace of the best start,
/// extended by cfg.polish_passes simplex runs from the incumbent.
OptimizationTrace multistart(const Objective& objective, const OptimizerConfig& cfg, const Sampler& sampler,
                             const std::vector<double>& first_initial = {});

}  // namespace vqt::opt

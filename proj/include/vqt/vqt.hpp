#pragma once

// The variational thermalization loop: free-energy cost, optimization,
// reconstruction of the mixed state, and temperature sweeps.

#include "vqt/ansatz.hpp"
#include "vqt/estimator.hpp"
#include "vqt/model.hpp"
#include "vqt/optimizer.hpp"
#include "vqt/qcore.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqt {

struct VqtParams {
    ansatz::LatentParams latent;
    ansatz::CircuitParams circuit;
};

struct VqtProblem {
    model::DimerModel model;
    double temperature = 1.0;  // K; beta = 1 / T
    estimator::Mode mode = estimator::Mode::exact;
    estimator::ShotConfig shots;
    estimator::NoiseModel noise;
    std::size_t layers = 2;
    opt::OptimizerConfig optimizer = default_optimizer();

    static opt::OptimizerConfig default_optimizer();
    void validate() const;
};

struct VqtResult {
    double temperature = 0.0;
    VqtParams params;
    double cost = 0.0;           // best cost seen by the optimizer (estimator-dependent)
    double exact_cost = 0.0;     // exact free-energy cost at the returned parameters
    double log_partition = 0.0;  // ln Z(beta); -ln Z is the lower bound on exact_cost
    qcore::DensityMatrix state;
    double fidelity_vs_gibbs = 0.0;
    opt::OptimizationTrace trace;
};

class VqtError : public std::runtime_error {
public:
    VqtError(const std::string& what, opt::OptimizationTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const opt::OptimizationTrace& trace() const { return trace_; }

private:
    opt::OptimizationTrace trace_;
};

/// beta <H> - S(theta), with <H> from the problem's estimator.
/// `evaluation_index` selects the random substream in shot modes.
double free_energy_cost(const VqtParams& p, const VqtProblem& prob, std::uint64_t evaluation_index = 0);

/// Restart sampler: angles uniform in [-pi, pi], theta uniform in [-2, 2].
opt::Sampler default_sampler(std::size_t layers);

VqtResult run_vqt(const VqtProblem& prob, const std::vector<double>& warm_start = {});

struct SweepPoint {
    double temperature = 0.0;
    std::optional<VqtResult> result;
    std::string error;
};

struct SweepOptions {
    bool warm_start = false;  // seed each point from the previous point's optimum
    bool parallel = true;     // ignored when warm_start is set
};

/// Independent run_vqt per temperature, results in input order. `base`
/// supplies everything except the model and temperature.
std::vector<SweepPoint> temperature_sweep(const model::DimerModel& m, const std::vector<double>& temps,
                                          const VqtProblem& base, const SweepOptions& options = {});

}  // namespace vqt

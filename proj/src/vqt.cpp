#include "vqt/vqt.hpp"

#include "vqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

namespace vqt {

opt::OptimizerConfig VqtProblem::default_optimizer() {
    opt::OptimizerConfig cfg;
    cfg.method = opt::Method::linear_approx;
    cfg.max_iterations = 400;
    cfg.initial_step = 0.5;
    cfg.final_step = 1e-4;
    cfg.restarts = 4;
    cfg.polish_passes = 3;
    cfg.seed = 0;
    return cfg;
}

void VqtProblem::validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("VqtProblem: temperature must be positive and finite");
    }
    if (layers == 0) {
        throw ConfigError("VqtProblem: layers must be positive");
    }
    if (mode != estimator::Mode::exact && shots.shots_per_term == 0) {
        throw ConfigError("VqtProblem: shots_per_term must be at least 1");
    }
    noise.validate();
    optimizer.validate();
}

double free_energy_cost(const VqtParams& p, const VqtProblem& prob, std::uint64_t evaluation_index) {
    const double beta = 1.0 / prob.temperature;
    double energy = 0.0;
    switch (prob.mode) {
        case estimator::Mode::exact:
            energy = estimator::exact_expectation(p.latent, p.circuit, prob.model).value;
            break;
        case estimator::Mode::shots:
            energy = estimator::shot_expectation(p.latent, p.circuit, prob.model, prob.shots, std::nullopt,
                                                 evaluation_index)
                         .value;
            break;
        case estimator::Mode::noisy:
            energy = estimator::shot_expectation(p.latent, p.circuit, prob.model, prob.shots, prob.noise,
                                                 evaluation_index)
                         .value;
            break;
    }
    return beta * energy - ansatz::latent_entropy(p.latent);
}

opt::Sampler default_sampler(std::size_t layers) {
    return [layers](std::mt19937_64& rng) {
        auto uniform = [&rng](double lo, double hi) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            return lo + (hi - lo) * u;
        };
        std::vector<double> x(ansatz::parameter_count(layers));
        for (std::size_t i = 0; i < ansatz::kQubits; ++i) {
            x[i] = uniform(-2.0, 2.0);
        }
        for (std::size_t i = ansatz::kQubits; i < x.size(); ++i) {
            x[i] = uniform(-std::numbers::pi, std::numbers::pi);
        }
        return x;
    };
}

VqtResult run_vqt(const VqtProblem& prob, const std::vector<double>& warm_start) {
    prob.validate();
    if (!warm_start.empty() && warm_start.size() != ansatz::parameter_count(prob.layers)) {
        throw ConfigError("run_vqt: warm start has the wrong parameter count");
    }

    std::uint64_t evaluation = 0;
    const opt::Objective objective = [&](const std::vector<double>& x) {
        auto [lp, cp] = ansatz::unflatten(x, prob.layers);
        return free_energy_cost(VqtParams{lp, std::move(cp)}, prob, evaluation++);
    };

    opt::OptimizationTrace trace;
    try {
        trace = opt::multistart(objective, prob.optimizer, default_sampler(prob.layers), warm_start);
    } catch (const opt::ObjectiveError& e) {
        throw VqtError(std::string("run_vqt: optimizer aborted: ") + e.what(), {});
    }

    auto [lp, cp] = ansatz::unflatten(trace.best_params, prob.layers);
    VqtParams params{lp, cp};

    VqtProblem exact = prob;
    exact.mode = estimator::Mode::exact;
    const double exact_cost = free_energy_cost(params, exact);

    qcore::DensityMatrix state = ansatz::assemble_state(lp, cp);
    const double fid = qcore::fidelity(state, model::gibbs_state(prob.model, prob.temperature));

    return VqtResult{prob.temperature,
                     std::move(params),
                     trace.best_cost,
                     exact_cost,
                     model::log_partition_function(prob.model, prob.temperature),
                     std::move(state),
                     fid,
                     std::move(trace)};
}

std::vector<SweepPoint> temperature_sweep(const model::DimerModel& m, const std::vector<double>& temps,
                                          const VqtProblem& base, const SweepOptions& options) {
    for (double t : temps) {
        if (!(t > 0.0)) {
            throw DomainError("temperature_sweep: temperatures must be strictly positive");
        }
    }

    auto run_point = [&](double t, const std::vector<double>& warm) {
        SweepPoint point;
        point.temperature = t;
        VqtProblem prob = base;
        prob.model = m;
        prob.temperature = t;
        try {
            point.result = run_vqt(prob, warm);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        return point;
    };

    std::vector<SweepPoint> out;
    out.reserve(temps.size());

    if (options.warm_start || !options.parallel) {
        std::vector<double> warm;
        for (double t : temps) {
            out.push_back(run_point(t, warm));
            if (options.warm_start && out.back().result) {
                warm = out.back().result->trace.best_params;
            }
        }
        return out;
    }

    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < temps.size(); start += workers) {
        const std::size_t stop = std::min(temps.size(), start + workers);
        std::vector<std::future<SweepPoint>> batch;
        for (std::size_t i = start; i < stop; ++i) {
            batch.push_back(std::async(std::launch::async, run_point, temps[i], std::vector<double>{}));
        }
        for (auto& f : batch) {
            out.push_back(f.get());
        }
    }
    return out;
}

}  // namespace vqt

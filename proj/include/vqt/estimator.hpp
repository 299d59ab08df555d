#pragma once

// <H> under the ansatz: exact density-matrix evaluation, finite-shot sampling
// per Pauli term, and shot sampling through a depolarizing + readout noise model.

#include "vqt/ansatz.hpp"
#include "vqt/model.hpp"
#include "vqt/qcore.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace vqt::estimator {

enum class Mode { exact, shots, noisy };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

struct ShotConfig {
    std::uint64_t shots_per_term = 8192;
    std::uint64_t seed = 0;
};

/// Emulation defaults; not taken from any published device calibration.
struct NoiseModel {
    double p_depol_1q = 2e-4;
    double p_depol_2q = 7e-3;
    double p_readout_flip = 1e-2;

    void validate() const;
};

struct ExpectationEstimate {
    double value = 0.0;      // K
    double std_error = 0.0;  // K; zero iff mode == exact
    Mode mode = Mode::exact;
};

/// sum_b p(b) <b|U^dagger H U|b>.
ExpectationEstimate exact_expectation(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                      const model::DimerModel& m);

/// Three measured circuits (XX, YY, ZZ), `shots_per_term` shots each. The
/// random stream for each term is derived from (seed, term index,
/// evaluation_index) so results do not depend on evaluation order.
ExpectationEstimate shot_expectation(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                     const model::DimerModel& m, const ShotConfig& sc,
                                     const std::optional<NoiseModel>& nm,
                                     std::uint64_t evaluation_index = 0);

/// (1 - p) rho + p * (rho with the locus qubits replaced by the maximally mixed state).
qcore::Matrix apply_depolarizing(const qcore::Matrix& rho, double p, std::span<const std::size_t> locus);
qcore::DensityMatrix apply_depolarizing(const qcore::DensityMatrix& rho, double p,
                                        std::span<const std::size_t> locus);

/// Output of the ansatz circuit with a depolarizing channel after every gate.
qcore::DensityMatrix noisy_circuit_state(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                         const NoiseModel& nm);

/// Outcome probabilities over |z0 z1> when measuring in `basis`, including
/// basis-rotation noise and readout flips when `nm` is set.
std::array<double, 4> outcome_distribution(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                           const ansatz::MeasurementBasis& basis,
                                           const std::optional<NoiseModel>& nm);

}  // namespace vqt::estimator

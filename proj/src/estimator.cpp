#include "vqt/estimator.hpp"

#include "vqt/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace vqt::estimator {

using ansatz::kDim;
using qcore::Complex;
using qcore::Matrix;

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::exact: return "exact";
        case Mode::shots: return "shots";
        case Mode::noisy: return "noisy";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    if (name == "exact") return Mode::exact;
    if (name == "shots") return Mode::shots;
    if (name == "noisy") return Mode::noisy;
    throw ConfigError("unknown estimator mode '" + std::string(name) + "'");
}

void NoiseModel::validate() const {
    for (double p : {p_depol_1q, p_depol_2q, p_readout_flip}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("NoiseModel: probabilities must lie in [0, 1]");
        }
    }
}

ExpectationEstimate exact_expectation(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                      const model::DimerModel& m) {
    const Matrix u = ansatz::build_unitary(cp);
    const Matrix h = model::build_hamiltonian(m).matrix();
    double value = 0.0;
    for (const auto& [b, p] : ansatz::enumerate_weighted_states(lp)) {
        if (p == 0.0) {
            continue;
        }
        // column b of U is U|b>
        const std::size_t col = b.index();
        Complex e = 0.0;
        for (std::size_t r = 0; r < kDim; ++r) {
            Complex hu = 0.0;
            for (std::size_t k = 0; k < kDim; ++k) {
                hu += h(r, k) * u(k, col);
            }
            e += std::conj(u(r, col)) * hu;
        }
        value += p * e.real();
    }
    return {value, 0.0, Mode::exact};
}

namespace {

// (1/4) sum_P P_q rho P_q = (I/2)_q (x) Tr_q rho
Matrix twirl_qubit(const Matrix& rho, std::size_t q) {
    Matrix out(rho.dim());
    for (auto axis : {model::PauliAxis::I, model::PauliAxis::X, model::PauliAxis::Y, model::PauliAxis::Z}) {
        const Matrix p = ansatz::embed_single(model::pauli_matrix(axis), q);
        out += p * rho * p;
    }
    return out * Complex(0.25);
}

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) * Complex(0.5); }

Matrix circuit_output(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                      const std::optional<NoiseModel>& nm) {
    Matrix rho = ansatz::latent_density(lp);
    if (!nm) {
        const Matrix u = ansatz::build_unitary(cp);
        return hermitize(u * rho * u.adjoint());
    }
    for (const auto& gate : ansatz::circuit_gates(cp)) {
        rho = gate.matrix * rho * gate.matrix.adjoint();
        const double p = gate.qubits.size() == 1 ? nm->p_depol_1q : nm->p_depol_2q;
        rho = apply_depolarizing(rho, p, gate.qubits);
    }
    return hermitize(rho);
}

std::array<double, 4> measure_distribution(const Matrix& rho_in, const ansatz::MeasurementBasis& basis,
                                           const std::optional<NoiseModel>& nm) {
    Matrix rho = rho_in;
    for (const auto& gate : ansatz::basis_rotation_gates(basis)) {
        rho = gate.matrix * rho * gate.matrix.adjoint();
        if (nm) {
            rho = apply_depolarizing(rho, nm->p_depol_1q, gate.qubits);
        }
    }
    std::array<double, 4> probs{};
    double total = 0.0;
    for (std::size_t i = 0; i < kDim; ++i) {
        probs[i] = std::max(0.0, rho(i, i).real());
        total += probs[i];
    }
    for (auto& p : probs) {
        p /= total;
    }
    if (nm && nm->p_readout_flip > 0.0) {
        const double f = nm->p_readout_flip;
        std::array<double, 4> flipped{};
        for (std::size_t from = 0; from < kDim; ++from) {
            for (std::size_t to = 0; to < kDim; ++to) {
                double w = 1.0;
                for (std::size_t bit = 0; bit < 2; ++bit) {
                    const bool same = ((from >> bit) & 1) == ((to >> bit) & 1);
                    w *= same ? 1.0 - f : f;
                }
                flipped[to] += w * probs[from];
            }
        }
        probs = flipped;
    }
    return probs;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Matrix apply_depolarizing(const Matrix& rho, double p, std::span<const std::size_t> locus) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ContractViolation("apply_depolarizing: p must lie in [0, 1]");
    }
    if (p == 0.0 || locus.empty()) {
        return rho;
    }
    Matrix replaced = rho;
    for (std::size_t q : locus) {
        replaced = twirl_qubit(replaced, q);
    }
    return rho * Complex(1.0 - p) + replaced * Complex(p);
}

qcore::DensityMatrix apply_depolarizing(const qcore::DensityMatrix& rho, double p,
                                        std::span<const std::size_t> locus) {
    return qcore::DensityMatrix(hermitize(apply_depolarizing(rho.matrix(), p, locus)));
}

qcore::DensityMatrix noisy_circuit_state(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                         const NoiseModel& nm) {
    nm.validate();
    return qcore::DensityMatrix(circuit_output(lp, cp, nm));
}

std::array<double, 4> outcome_distribution(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                           const ansatz::MeasurementBasis& basis,
                                           const std::optional<NoiseModel>& nm) {
    if (nm) {
        nm->validate();
    }
    return measure_distribution(circuit_output(lp, cp, nm), basis, nm);
}

ExpectationEstimate shot_expectation(const ansatz::LatentParams& lp, const ansatz::CircuitParams& cp,
                                     const model::DimerModel& m, const ShotConfig& sc,
                                     const std::optional<NoiseModel>& nm,
                                     std::uint64_t evaluation_index) {
    if (sc.shots_per_term == 0) {
        throw ConfigError("ShotConfig: shots_per_term must be at least 1");
    }
    if (nm) {
        nm->validate();
    }
    const Matrix rho = circuit_output(lp, cp, nm);
    const auto terms = model::pauli_decomposition(m);
    const auto n = static_cast<double>(sc.shots_per_term);

    double value = 0.0;
    double variance = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto& term = terms[t];
        const ansatz::MeasurementBasis basis{term.axes};
        const auto probs = measure_distribution(rho, basis, nm);

        int sign = 1;
        for (auto axis : term.axes) {
            if (axis == model::PauliAxis::Y) sign = -sign;
        }

        std::seed_seq seq{static_cast<std::uint32_t>(sc.seed), static_cast<std::uint32_t>(sc.seed >> 32),
                          static_cast<std::uint32_t>(t),
                          static_cast<std::uint32_t>(evaluation_index),
                          static_cast<std::uint32_t>(evaluation_index >> 32)};
        std::mt19937_64 rng(seq);

        std::array<std::uint64_t, 4> counts{};
        const double c0 = probs[0];
        const double c1 = c0 + probs[1];
        const double c2 = c1 + probs[2];
        for (std::uint64_t s = 0; s < sc.shots_per_term; ++s) {
            const double u = uniform01(rng);
            const std::size_t k = u < c0 ? 0 : u < c1 ? 1 : u < c2 ? 2 : 3;
            ++counts[k];
        }
        // parity eigenvalue of Z (x) Z: +1 for 00 and 11
        const double even = static_cast<double>(counts[0] + counts[3]);
        const double mean = sign * (2.0 * even - n) / n;
        const double sample_var = sc.shots_per_term > 1 ? (1.0 - mean * mean) * n / (n - 1.0) : 1.0;

        value += term.coefficient * mean;
        variance += term.coefficient * term.coefficient * sample_var / n;
    }
    return {value, std::sqrt(variance), nm ? Mode::noisy : Mode::shots};
}

}  // namespace vqt::estimator

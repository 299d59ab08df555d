#pragma once

// Quantum-probabilistic ansatz: a factored latent distribution over the
// computational basis followed by a layered rotation circuit U(phi).

#include "vqt/model.hpp"
#include "vqt/qcore.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace vqt::ansatz {

inline constexpr std::size_t kQubits = 2;
inline constexpr std::size_t kDim = 4;
inline constexpr std::size_t kAnglesPerLayer = 8;

/// theta_i maps to P(qubit i = 0) through the logistic function.
struct LatentParams {
    std::array<double, kQubits> theta{0.0, 0.0};
};

/// Per layer: RX, RY, RZ on qubit 0; RX, RY, RZ on qubit 1; CRX(0->1); CRX(1->0).
class CircuitParams {
public:
    CircuitParams() : CircuitParams(1) {}
    explicit CircuitParams(std::size_t layers);  // all angles zero
    CircuitParams(std::size_t layers, std::vector<double> phi);

    std::size_t layers() const { return layers_; }
    const std::vector<double>& phi() const { return phi_; }

private:
    std::size_t layers_ = 1;
    std::vector<double> phi_;
};

struct BasisState {
    std::array<int, kQubits> bits{0, 0};

    std::size_t index() const { return static_cast<std::size_t>(bits[0] * 2 + bits[1]); }
    static BasisState from_index(std::size_t index);
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

struct MeasurementBasis {
    std::array<model::PauliAxis, kQubits> axes{model::PauliAxis::Z, model::PauliAxis::Z};
};

/// One gate of the circuit, embedded in the full 4x4 space.
struct Gate {
    qcore::Matrix matrix;
    std::vector<std::size_t> qubits;  // locus, for noise channels
};

double logistic(double x);
double binary_entropy(double p);

double latent_probability(const LatentParams& lp, const BasisState& b);
double latent_entropy(const LatentParams& lp);
std::vector<std::pair<BasisState, double>> enumerate_weighted_states(const LatentParams& lp);
BasisState sample_basis_state(const LatentParams& lp, std::mt19937_64& rng);

/// Diagonal rho_theta = sum_b p(b) |b><b|.
qcore::Matrix latent_density(const LatentParams& lp);

qcore::Matrix rx(double angle);
qcore::Matrix ry(double angle);
qcore::Matrix rz(double angle);
qcore::Matrix hadamard();

/// Lift a single-qubit gate onto qubit `target` of the 2-qubit register.
qcore::Matrix embed_single(const qcore::Matrix& gate, std::size_t target);

/// Controlled RX(angle) with the given control and target qubits.
qcore::Matrix crx(double angle, std::size_t control, std::size_t target);

std::vector<Gate> circuit_gates(const CircuitParams& cp);
qcore::Matrix build_unitary(const CircuitParams& cp);
qcore::StateVector prepare_state(const BasisState& b, const CircuitParams& cp);

/// Single-qubit pre-measurement rotations that map the Pauli basis onto Z.
std::vector<Gate> basis_rotation_gates(const MeasurementBasis& mb);
qcore::Matrix basis_rotation(const MeasurementBasis& mb);

/// sum_b p(b) U|b><b|U^dagger.
qcore::DensityMatrix assemble_state(const LatentParams& lp, const CircuitParams& cp);

/// Flat optimizer vector [theta_0, theta_1, phi...].
std::vector<double> flatten(const LatentParams& lp, const CircuitParams& cp);
std::pair<LatentParams, CircuitParams> unflatten(const std::vector<double>& x, std::size_t layers);
std::size_t parameter_count(std::size_t layers);

}  // namespace vqt::ansatz

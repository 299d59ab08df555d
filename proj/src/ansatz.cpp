#include "vqt/ansatz.hpp"

#include "vqt/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace vqt::ansatz {

using model::PauliAxis;
using qcore::Complex;
using qcore::Matrix;

CircuitParams::CircuitParams(std::size_t layers)
    : CircuitParams(layers, std::vector<double>(layers * kAnglesPerLayer, 0.0)) {}

CircuitParams::CircuitParams(std::size_t layers, std::vector<double> phi)
    : layers_(layers), phi_(std::move(phi)) {
    if (layers_ == 0) {
        throw ConfigError("CircuitParams: layers must be positive");
    }
    if (phi_.size() != layers_ * kAnglesPerLayer) {
        std::ostringstream msg;
        msg << "CircuitParams: expected " << layers_ * kAnglesPerLayer << " angles for " << layers_
            << " layer(s), got " << phi_.size();
        throw ConfigError(msg.str());
    }
    for (double a : phi_) {
        if (!std::isfinite(a)) {
            throw ConfigError("CircuitParams: non-finite angle");
        }
    }
}

BasisState BasisState::from_index(std::size_t index) {
    if (index >= kDim) {
        throw ContractViolation("BasisState::from_index: index out of range");
    }
    return BasisState{{static_cast<int>(index >> 1), static_cast<int>(index & 1)}};
}

double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
    return h;
}

double latent_probability(const LatentParams& lp, const BasisState& b) {
    double prob = 1.0;
    for (std::size_t q = 0; q < kQubits; ++q) {
        // P(bit = 1) = logistic(-theta) avoids cancellation in 1 - logistic(theta).
        prob *= b.bits[q] == 0 ? logistic(lp.theta[q]) : logistic(-lp.theta[q]);
    }
    return prob;
}

double latent_entropy(const LatentParams& lp) {
    double s = 0.0;
    for (double theta : lp.theta) {
        // h(p) = softplus(-theta) p + softplus(theta) (1 - p); stable for saturated theta
        const double p0 = logistic(theta);
        const double p1 = logistic(-theta);
        const double softplus_pos = std::max(theta, 0.0) + std::log1p(std::exp(-std::abs(theta)));
        const double softplus_neg = softplus_pos - theta;
        s += p0 * softplus_neg + p1 * softplus_pos;
    }
    return s;
}

std::vector<std::pair<BasisState, double>> enumerate_weighted_states(const LatentParams& lp) {
    std::vector<std::pair<BasisState, double>> out;
    out.reserve(kDim);
    for (std::size_t i = 0; i < kDim; ++i) {
        const BasisState b = BasisState::from_index(i);
        out.emplace_back(b, latent_probability(lp, b));
    }
    return out;
}

BasisState sample_basis_state(const LatentParams& lp, std::mt19937_64& rng) {
    BasisState b;
    for (std::size_t q = 0; q < kQubits; ++q) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        b.bits[q] = u < logistic(lp.theta[q]) ? 0 : 1;
    }
    return b;
}

Matrix latent_density(const LatentParams& lp) {
    Matrix rho(kDim);
    for (const auto& [b, p] : enumerate_weighted_states(lp)) {
        rho(b.index(), b.index()) = p;
    }
    return rho;
}

Matrix rx(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return Matrix{{c, Complex(0.0, -s)}, {Complex(0.0, -s), c}};
}

Matrix ry(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return Matrix{{c, -s}, {s, c}};
}

Matrix rz(double angle) {
    return Matrix{{std::polar(1.0, -angle / 2.0), 0.0}, {0.0, std::polar(1.0, angle / 2.0)}};
}

Matrix hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return Matrix{{r, r}, {r, -r}};
}

Matrix embed_single(const Matrix& gate, std::size_t target) {
    if (target == 0) {
        return kron(gate, Matrix::identity(2));
    }
    if (target == 1) {
        return kron(Matrix::identity(2), gate);
    }
    throw ContractViolation("embed_single: target out of range");
}

Matrix crx(double angle, std::size_t control, std::size_t target) {
    if (control >= kQubits || target >= kQubits || control == target) {
        throw ContractViolation("crx: invalid control/target");
    }
    const Matrix p0{{1.0, 0.0}, {0.0, 0.0}};
    const Matrix p1{{0.0, 0.0}, {0.0, 1.0}};
    const Matrix id = Matrix::identity(2);
    if (control == 0) {
        return kron(p0, id) + kron(p1, rx(angle));
    }
    return kron(id, p0) + kron(rx(angle), p1);
}

std::vector<Gate> circuit_gates(const CircuitParams& cp) {
    std::vector<Gate> gates;
    gates.reserve(cp.phi().size());
    const auto& phi = cp.phi();
    for (std::size_t layer = 0; layer < cp.layers(); ++layer) {
        const double* a = phi.data() + layer * kAnglesPerLayer;
        for (std::size_t q = 0; q < kQubits; ++q) {
            gates.push_back({embed_single(rx(a[3 * q + 0]), q), {q}});
            gates.push_back({embed_single(ry(a[3 * q + 1]), q), {q}});
            gates.push_back({embed_single(rz(a[3 * q + 2]), q), {q}});
        }
        gates.push_back({crx(a[6], 0, 1), {0, 1}});
        gates.push_back({crx(a[7], 1, 0), {0, 1}});
    }
    return gates;
}

Matrix build_unitary(const CircuitParams& cp) {
    Matrix u = Matrix::identity(kDim);
    for (const Gate& g : circuit_gates(cp)) {
        u = g.matrix * u;
    }
    return u;
}

qcore::StateVector prepare_state(const BasisState& b, const CircuitParams& cp) {
    return qcore::apply(build_unitary(cp), qcore::StateVector::basis(kDim, b.index()));
}

std::vector<Gate> basis_rotation_gates(const MeasurementBasis& mb) {
    std::vector<Gate> gates;
    for (std::size_t q = 0; q < kQubits; ++q) {
        switch (mb.axes[q]) {
            case PauliAxis::X:
                gates.push_back({embed_single(hadamard(), q), {q}});
                break;
            case PauliAxis::Y:
                // RX(-pi/2) takes Y to -Z; callers fold the sign into the outcome parity.
                gates.push_back({embed_single(rx(-std::numbers::pi / 2.0), q), {q}});
                break;
            case PauliAxis::Z:
            case PauliAxis::I:
                break;
        }
    }
    return gates;
}

Matrix basis_rotation(const MeasurementBasis& mb) {
    Matrix u = Matrix::identity(kDim);
    for (const Gate& g : basis_rotation_gates(mb)) {
        u = g.matrix * u;
    }
    return u;
}

qcore::DensityMatrix assemble_state(const LatentParams& lp, const CircuitParams& cp) {
    const Matrix u = build_unitary(cp);
    Matrix rho = u * latent_density(lp) * u.adjoint();
    rho = (rho + rho.adjoint()) * Complex(0.5);
    return qcore::DensityMatrix(std::move(rho));
}

std::size_t parameter_count(std::size_t layers) { return kQubits + layers * kAnglesPerLayer; }

std::vector<double> flatten(const LatentParams& lp, const CircuitParams& cp) {
    std::vector<double> x(lp.theta.begin(), lp.theta.end());
    x.insert(x.end(), cp.phi().begin(), cp.phi().end());
    return x;
}

std::pair<LatentParams, CircuitParams> unflatten(const std::vector<double>& x, std::size_t layers) {
    if (x.size() != parameter_count(layers)) {
        std::ostringstream msg;
        msg << "unflatten: expected " << parameter_count(layers) << " parameters, got " << x.size();
        throw ConfigError(msg.str());
    }
    LatentParams lp{{x[0], x[1]}};
    CircuitParams cp(layers, std::vector<double>(x.begin() + kQubits, x.end()));
    return {lp, std::move(cp)};
}

}  // namespace vqt::ansatz

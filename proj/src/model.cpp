#include "vqt/model.hpp"

#include "vqt/errors.hpp"

#include <cmath>
#include <sstream>

namespace vqt::model {

using qcore::Complex;
using qcore::Matrix;

namespace {

void require_positive_temperature(double t, const char* op) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << op << ": temperature must be positive and finite, got " << t;
        throw DomainError(msg.str());
    }
}

}  // namespace

char axis_label(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::I: return 'I';
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        case PauliAxis::Z: return 'Z';
    }
    return '?';
}

Matrix pauli_matrix(PauliAxis axis) {
    const Complex i{0.0, 1.0};
    switch (axis) {
        case PauliAxis::I: return Matrix::identity(2);
        case PauliAxis::X: return Matrix{{0.0, 1.0}, {1.0, 0.0}};
        case PauliAxis::Y: return Matrix{{0.0, -i}, {i, 0.0}};
        case PauliAxis::Z: return Matrix{{1.0, 0.0}, {0.0, -1.0}};
    }
    throw ContractViolation("pauli_matrix: unknown axis");
}

Matrix pauli_term_matrix(const PauliTerm& term) {
    return kron(pauli_matrix(term.axes[0]), pauli_matrix(term.axes[1])) * Complex(term.coefficient);
}

qcore::HermitianOperator build_hamiltonian(const DimerModel& m) {
    const double q = m.j_over_kb / 4.0;
    Matrix h{{q, 0.0, 0.0, 0.0},
             {0.0, -q, 2.0 * q, 0.0},
             {0.0, 2.0 * q, -q, 0.0},
             {0.0, 0.0, 0.0, q}};
    return qcore::HermitianOperator(std::move(h));
}

std::vector<PauliTerm> pauli_decomposition(const DimerModel& m) {
    const double c = m.j_over_kb / 4.0;
    return {{c, {PauliAxis::X, PauliAxis::X}},
            {c, {PauliAxis::Y, PauliAxis::Y}},
            {c, {PauliAxis::Z, PauliAxis::Z}}};
}

// Spectrum of H: singlet -3J/4 (once), triplet +J/4 (three times).
double partition_function(const DimerModel& m, double t) {
    require_positive_temperature(t, "partition_function");
    const double beta_j = m.j_over_kb / t;
    return std::exp(0.75 * beta_j) + 3.0 * std::exp(-0.25 * beta_j);
}

double log_partition_function(const DimerModel& m, double t) {
    require_positive_temperature(t, "log_partition_function");
    const double x = m.j_over_kb / t;
    // Factor out the dominant Boltzmann weight.
    if (x >= 0.0) {
        return 0.75 * x + std::log1p(3.0 * std::exp(-x));
    }
    return -0.25 * x + std::log(3.0 + std::exp(x));
}

Populations populations(const DimerModel& m, double t) {
    require_positive_temperature(t, "populations");
    const double x = m.j_over_kb / t;
    Populations p;
    if (x >= 0.0) {
        const double e = std::exp(-x);  // e^{-J/T} in [0, 1]
        p.triplet = e / (3.0 * e + 1.0);
        p.singlet = 1.0 / (3.0 * e + 1.0);
    } else {
        const double e = std::exp(x);
        p.triplet = 1.0 / (3.0 + e);
        p.singlet = e / (3.0 + e);
    }
    return p;
}

qcore::DensityMatrix gibbs_state(const DimerModel& m, double t) {
    require_positive_temperature(t, "gibbs_state");
    const Populations p = populations(m, t);
    const double diag = 0.5 * (p.triplet + p.singlet);
    const double coherence = 0.5 * (p.triplet - p.singlet);
    Matrix rho{{p.triplet, 0.0, 0.0, 0.0},
               {0.0, diag, coherence, 0.0},
               {0.0, coherence, diag, 0.0},
               {0.0, 0.0, 0.0, p.triplet}};
    return qcore::DensityMatrix(std::move(rho));
}

ReducedSusceptibility chi_reduced(const DimerModel& m, double t) {
    require_positive_temperature(t, "chi_reduced");
    return {populations(m, t).triplet};
}

double chi_scale(const DimerModel& m, const PhysicalConstants& c, UnitSystem units) {
    const double g2 = m.g_factor * m.g_factor;
    if (units == UnitSystem::si) {
        return c.mu_0 * 2.0 * c.n_avogadro * g2 * c.mu_bohr * c.mu_bohr / c.k_boltzmann;
    }
    return 2.0 * c.n_avogadro * g2 * c.mu_bohr_cgs * c.mu_bohr_cgs / c.k_boltzmann_cgs;
}

double chi_molar(const DimerModel& m, double t, const PhysicalConstants& c, UnitSystem units) {
    require_positive_temperature(t, "chi_molar");
    return chi_scale(m, c, units) / t * chi_reduced(m, t).value;
}

double magnetic_entropy(const DimerModel& m, double t) {
    require_positive_temperature(t, "magnetic_entropy");
    const Populations p = populations(m, t);
    auto h = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return 3.0 * h(p.triplet) + h(p.singlet);
}

double internal_energy(const DimerModel& m, double t) {
    require_positive_temperature(t, "internal_energy");
    const Populations p = populations(m, t);
    // 3 * (J/4) * triplet + (-3J/4) * singlet
    return 0.75 * m.j_over_kb * (p.triplet - p.singlet);
}

double specific_heat(const DimerModel& m, double t) {
    require_positive_temperature(t, "specific_heat");
    const Populations p = populations(m, t);
    const double x = m.j_over_kb / t;
    return 3.0 * x * x * p.triplet * p.singlet;
}

qcore::StateVector singlet_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return qcore::StateVector({0.0, r, -r, 0.0});
}

}  // namespace vqt::model

#pragma once

// Heisenberg spin-1/2 dimer H = J S_A . S_B in reduced units (k_B = 1,
// energies and temperatures in Kelvin, entropy in nats, heat capacity in k_B).

#include "vqt/qcore.hpp"

#include <array>
#include <vector>

namespace vqt::model {

struct DimerModel {
    double j_over_kb = 1.0;  // K; J > 0 is antiferromagnetic (singlet ground state)
    double g_factor = 2.0;
};

enum class PauliAxis { I, X, Y, Z };

char axis_label(PauliAxis axis);

/// coefficient * (axes[0] on qubit 0) (x) (axes[1] on qubit 1).
struct PauliTerm {
    double coefficient = 0.0;  // K
    std::array<PauliAxis, 2> axes{PauliAxis::I, PauliAxis::I};
};

qcore::Matrix pauli_matrix(PauliAxis axis);
qcore::Matrix pauli_term_matrix(const PauliTerm& term);

/// CODATA 2018 values. SI unless the name says otherwise.
struct PhysicalConstants {
    double n_avogadro = 6.02214076e23;       // 1/mol
    double mu_bohr = 9.2740100783e-24;       // J/T
    double k_boltzmann = 1.380649e-23;       // J/K
    double mu_0 = 1.25663706212e-6;          // N/A^2
    double mu_bohr_cgs = 9.2740100783e-21;   // erg/G
    double k_boltzmann_cgs = 1.380649e-16;   // erg/K
};

enum class UnitSystem { si, cgs };

/// Dimensionless k_B T chi / (2 N_A g^2 mu_B^2); equals the triplet population.
struct ReducedSusceptibility {
    double value = 0.0;
};

qcore::HermitianOperator build_hamiltonian(const DimerModel& m);

/// J/4 (XX + YY + ZZ).
std::vector<PauliTerm> pauli_decomposition(const DimerModel& m);

double partition_function(const DimerModel& m, double t);

/// ln Z, finite even when Z itself overflows.
double log_partition_function(const DimerModel& m, double t);

/// Triplet (rho_1 = rho_2 = rho_3) and singlet (rho_4) populations.
struct Populations {
    double triplet = 0.25;
    double singlet = 0.25;
};

Populations populations(const DimerModel& m, double t);

qcore::DensityMatrix gibbs_state(const DimerModel& m, double t);

ReducedSusceptibility chi_reduced(const DimerModel& m, double t);

/// Molar susceptibility: m^3/mol (SI) or emu/mol (cgs).
double chi_molar(const DimerModel& m, double t, const PhysicalConstants& c = {},
                 UnitSystem units = UnitSystem::cgs);

/// Conversion factor 2 N_A g^2 mu_B^2 / k_B (times mu_0 in SI) so that chi T = factor * chi~.
double chi_scale(const DimerModel& m, const PhysicalConstants& c, UnitSystem units);

double magnetic_entropy(const DimerModel& m, double t);

/// tr(H rho) = 3 J (chi~ - 1/4), K per dimer.
double internal_energy(const DimerModel& m, double t);

/// dU/dT = 3 (J/T)^2 chi~ (1 - 3 chi~), units of k_B per dimer.
double specific_heat(const DimerModel& m, double t);

/// Singlet (|01> - |10>)/sqrt(2).
qcore::StateVector singlet_state();

}  // namespace vqt::model

#include "oracles.hpp"
#include "vqt/errors.hpp"
#include "vqt/model.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vqt;
using namespace vqt::model;
using vqt::qcore::Complex;

namespace {

// Internal energy from the brute-force Gibbs state.
double oracle_energy(double j, double t) {
    const auto th = oracle::gibbs(oracle::dimer(j), t);
    return (oracle::dimer(j) * th.rho).trace().real();
}

}  // namespace

TEST(Hamiltonian, Entries) {
    const auto h = build_hamiltonian({1.0});
    EXPECT_DOUBLE_EQ(h(0, 0).real(), 0.25);
    EXPECT_DOUBLE_EQ(h(1, 2).real(), 0.5);
    EXPECT_DOUBLE_EQ(h(2, 1).real(), 0.5);
    EXPECT_DOUBLE_EQ(build_hamiltonian({-2.0})(1, 1).real(), 0.5);
    EXPECT_EQ(build_hamiltonian({0.0}).matrix().max_abs_diff(qcore::Matrix(4)), 0.0);
    EXPECT_EQ(build_hamiltonian({3.7}).matrix().max_abs_diff(oracle::dimer(3.7)), 0.0);
}

TEST(Hamiltonian, PauliDecomposition) {
    for (double j : {1.0, 0.0, 4.0, -2.5}) {
        const auto terms = pauli_decomposition({j});
        ASSERT_EQ(terms.size(), 3u);
        qcore::Matrix sum(4);
        for (const auto& t : terms) {
            EXPECT_DOUBLE_EQ(t.coefficient, j / 4.0);
            sum += pauli_term_matrix(t);
        }
        EXPECT_EQ(sum.max_abs_diff(build_hamiltonian({j}).matrix()), 0.0);
    }
    const auto terms = pauli_decomposition({1.0});
    EXPECT_EQ(terms[0].axes[0], PauliAxis::X);
    EXPECT_EQ(terms[1].axes[1], PauliAxis::Y);
    EXPECT_EQ(terms[2].axes[0], PauliAxis::Z);
}

TEST(PartitionFunction, Examples) {
    EXPECT_NEAR(partition_function({1.0}, 1e9), 4.0, 1e-8);
    EXPECT_NEAR(partition_function({1.0}, 1.0), std::exp(0.75) + 3 * std::exp(-0.25), 1e-12);
    EXPECT_NEAR(partition_function({1.0}, 1.0), 4.4526, 1e-3);
    EXPECT_DOUBLE_EQ(partition_function({0.0}, 0.3), 4.0);
    EXPECT_THROW(partition_function({1.0}, 0.0), DomainError);
    EXPECT_THROW(partition_function({1.0}, -1.0), DomainError);
}

TEST(PartitionFunction, MatchesBruteForceTrace) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const double j = oracle::uniform(rng, -10, 50);
        const double t = std::exp(oracle::uniform(rng, std::log(0.05), std::log(350.0)));
        const auto th = oracle::gibbs(oracle::dimer(j), t);
        EXPECT_NEAR(log_partition_function({j}, t), th.log_z, 1e-9);
        EXPECT_NEAR(partition_function({j}, t) / std::exp(th.log_z), 1.0, 1e-9);
    }
}

TEST(PartitionFunction, LogIsFiniteWhenZOverflows) {
    const double lz = log_partition_function({50.0}, 1e-3);
    EXPECT_TRUE(std::isfinite(lz));
    EXPECT_NEAR(lz, 37.5 / 1e-3, 1e-6);
}

TEST(Gibbs, LowTemperatureSinglet) {
    const auto rho = gibbs_state({1.0}, 5e-4);
    EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-6);
    EXPECT_NEAR(rho(2, 2).real(), 0.5, 1e-6);
    EXPECT_NEAR(rho(1, 2).real(), -0.5, 1e-6);
    EXPECT_NEAR(rho(2, 1).real(), -0.5, 1e-6);
    EXPECT_NEAR(rho(0, 0).real(), 0.0, 1e-6);
}

TEST(Gibbs, HighTemperatureMaximallyMixed) {
    for (double j : {-10.0, 1.0, 50.0}) {
        const auto rho = gibbs_state({j}, 1e7);
        EXPECT_LE(rho.matrix().max_abs_diff(qcore::Matrix::identity(4) * Complex(0.25, 0)), 1e-5);
    }
}

TEST(Gibbs, PopulationsAtUnitTemperature) {
    const auto p = populations({1.0}, 1.0);
    EXPECT_NEAR(p.triplet, 1.0 / (3.0 + std::exp(1.0)), 1e-12);
    EXPECT_NEAR(p.triplet, 0.17488, 1e-5);
    EXPECT_NEAR(p.singlet, 0.47536, 1e-5);
    EXPECT_DOUBLE_EQ(3 * p.triplet + p.singlet, 1.0);
}

TEST(Gibbs, MatchesBruteForceAndIdentities) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const double j = oracle::uniform(rng, -10, 50);
        const double t = std::exp(oracle::uniform(rng, std::log(1e-3), std::log(350.0)));
        const DimerModel m{j};
        const auto rho = gibbs_state(m, t);
        const auto th = oracle::gibbs(oracle::dimer(j), t);
        EXPECT_LE(rho.matrix().max_abs_diff(th.rho), 1e-9) << "J=" << j << " T=" << t;

        const auto p = populations(m, t);
        EXPECT_NEAR(3 * p.triplet + p.singlet, 1.0, 1e-15);
        EXPECT_NEAR(chi_reduced(m, t).value, rho(0, 0).real(), 1e-9);
        EXPECT_NEAR(magnetic_entropy(m, t), qcore::von_neumann_entropy(rho), 1e-9);
        EXPECT_NEAR(internal_energy(m, t), (oracle::dimer(j) * th.rho).trace().real(), 1e-9 * std::max(1.0, std::abs(j)));
    }
}

TEST(Susceptibility, Examples) {
    EXPECT_NEAR(chi_reduced({1.0}, 1e9).value, 0.25, 1e-9);
    EXPECT_NEAR(chi_reduced({1.0}, 1.0).value, 0.17487, 1e-5);
    EXPECT_DOUBLE_EQ(chi_reduced({5.0}, 5.0).value, chi_reduced({1.0}, 1.0).value);
    EXPECT_THROW(chi_reduced({1.0}, 0.0), DomainError);
}

TEST(Susceptibility, BoundedAndMonotoneChiT) {
    double prev = 0.0;
    for (double t = 0.01; t < 500; t *= 1.1) {
        const double v = chi_reduced({3.0}, t).value;
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0 / 3.0);
        EXPECT_GE(v, prev);
        prev = v;
    }
    // Ferromagnetic coupling: triplet favoured, value above 1/4 but below 1/3.
    EXPECT_GT(chi_reduced({-3.0}, 1.0).value, 0.25);
    EXPECT_LT(chi_reduced({-3.0}, 0.01).value, 1.0 / 3.0 + 1e-15);
}

TEST(Susceptibility, MolarScaling) {
    const double base = chi_molar({2.0, 2.0}, 3.0);
    EXPECT_NEAR(chi_molar({2.0, 4.0}, 3.0) / base, 4.0, 1e-12);
    // Curie law at J = 0: chi T constant.
    EXPECT_NEAR(chi_molar({0.0}, 2.0) * 2.0, chi_molar({0.0}, 7.0) * 7.0, 1e-15);
    // Per mole of dimers at J = 0: two free spins, 2 x 0.3751 emu K/mol.
    EXPECT_NEAR(chi_molar({0.0}, 1.0), 0.7502, 1e-3);
    const PhysicalConstants c;
    EXPECT_NEAR(chi_molar({1.0}, 2.0, c, UnitSystem::si) / chi_molar({1.0}, 2.0, c, UnitSystem::cgs),
                4e-6 * M_PI, 1e-12);
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(magnetic_entropy({1.0}, 1e9), std::log(4.0), 1e-8);
    EXPECT_NEAR(magnetic_entropy({1.0}, 5e-4), 0.0, 1e-9);
    EXPECT_NEAR(magnetic_entropy({1.0}, 1.0), 1.2683, 1e-4);
}

TEST(Energy, Examples) {
    EXPECT_NEAR(internal_energy({1.0}, 1e-3), -0.75, 1e-9);
    EXPECT_NEAR(internal_energy({1.0}, 1e9), 0.0, 1e-8);
    EXPECT_NEAR(internal_energy({1.0}, 1.0), oracle_energy(1.0, 1.0), 1e-12);
    EXPECT_NEAR(internal_energy({1.0}, 1.0), -0.225366, 1e-6);
}

TEST(SpecificHeat, LimitsAndFiniteDifferences) {
    EXPECT_NEAR(specific_heat({1.0}, 1e6), 0.0, 1e-9);
    EXPECT_NEAR(specific_heat({1.0}, 1e-2), 0.0, 1e-9);
    for (double j : {1.0, 4.2, 25.0, -5.0}) {
        for (double t = 0.05 * std::abs(j); t < 20 * std::abs(j); t *= 1.3) {
            const DimerModel m{j};
            const double c = specific_heat(m, t);
            if (c < 0.01) continue;
            const double h = 1e-4 * t;
            const double du = (oracle_energy(j, t + h) - oracle_energy(j, t - h)) / (2 * h);
            const double ds = (magnetic_entropy(m, t + h) - magnetic_entropy(m, t - h)) / (2 * h);
            EXPECT_NEAR(c / du, 1.0, 1e-4) << "J=" << j << " T=" << t;
            EXPECT_NEAR(c / (t * ds), 1.0, 1e-4) << "J=" << j << " T=" << t;
        }
    }
}

TEST(SpecificHeat, PeakMatchesBruteForceMaximum) {
    // Golden-section maximum of dU/dT from the oracle energy.
    auto c_oracle = [](double t) {
        const double h = 1e-4 * t;
        return (oracle_energy(4.2, t + h) - oracle_energy(4.2, t - h)) / (2 * h);
    };
    double a = 0.5, b = 5.0;
    const double g = (std::sqrt(5.0) - 1) / 2;
    while (b - a > 1e-6) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (c_oracle(c) > c_oracle(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    const double t_oracle = 0.5 * (a + b);

    double best_t = 0, best = -1;
    for (double t = 0.5; t < 5.0; t += 1e-4) {
        const double c = specific_heat({4.2}, t);
        if (c > best) best = c, best_t = t;
    }
    EXPECT_NEAR(best_t, t_oracle, 1e-3);
    EXPECT_NEAR(best_t, 1.476, 0.01);
}

TEST(Model, DomainErrors) {
    const DimerModel m{1.0};
    EXPECT_THROW(gibbs_state(m, 0.0), DomainError);
    EXPECT_THROW(magnetic_entropy(m, -1.0), DomainError);
    EXPECT_THROW(internal_energy(m, 0.0), DomainError);
    EXPECT_THROW(specific_heat(m, 0.0), DomainError);
    EXPECT_THROW(log_partition_function(m, 0.0), DomainError);
}

TEST(Model, SingletIsGroundState) {
    const auto s = singlet_state();
    const auto rho = qcore::DensityMatrix::pure(s);
    EXPECT_NEAR(qcore::expectation(build_hamiltonian({1.0}), rho), -0.75, 1e-14);
}

#include "oracles.hpp"
#include "vqt/ansatz.hpp"
#include "vqt/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vqt;
using namespace vqt::ansatz;
using qcore::Complex;
using qcore::Matrix;

namespace {

constexpr double kPi = std::numbers::pi;

CircuitParams random_circuit(std::mt19937_64& rng, std::size_t layers) {
    std::vector<double> phi(layers * kAnglesPerLayer);
    for (auto& v : phi) v = oracle::uniform(rng, -kPi, kPi);
    return CircuitParams(layers, phi);
}

LatentParams random_latent(std::mt19937_64& rng) {
    return LatentParams{{oracle::uniform(rng, -4, 4), oracle::uniform(rng, -4, 4)}};
}

bool is_unitary(const Matrix& u, double tol) {
    return (u.adjoint() * u).max_abs_diff(Matrix::identity(u.dim())) <= tol;
}

}  // namespace

TEST(Latent, ProbabilityExamples) {
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_DOUBLE_EQ(latent_probability({{0.0, 0.0}}, BasisState::from_index(i)), 0.25);
    EXPECT_NEAR(latent_probability({{20.0, 20.0}}, BasisState{{0, 0}}), 1.0, 1e-8);
    EXPECT_NEAR(latent_probability({{std::log(3.0), 0.0}}, BasisState{{0, 0}}), 0.375, 1e-15);
}

TEST(Latent, EntropyExamples) {
    EXPECT_NEAR(latent_entropy({{0.0, 0.0}}), 2 * std::log(2.0), 1e-15);
    EXPECT_NEAR(latent_entropy({{30.0, -30.0}}), 0.0, 1e-10);
    EXPECT_NEAR(latent_entropy({{std::log(3.0), 0.0}}), 1.255482, 1e-6);
    // Large |theta| stays finite.
    EXPECT_TRUE(std::isfinite(latent_entropy({{800.0, -800.0}})));
}

TEST(Latent, WeightedStates) {
    const auto w = enumerate_weighted_states({{std::log(3.0), 0.0}});
    ASSERT_EQ(w.size(), 4u);
    const double expected[] = {0.375, 0.375, 0.125, 0.125};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(w[i].first.index(), i);
        EXPECT_NEAR(w[i].second, expected[i], 1e-15);
    }
    const auto sat = enumerate_weighted_states({{40.0, 40.0}});
    EXPECT_NEAR(sat[0].second, 1.0, 1e-12);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(sat[i].second, 0.0, 1e-12);
}

TEST(Latent, Sampling) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_basis_state({{60.0, 60.0}}, rng).index(), 0u);

    std::array<int, 4> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[sample_basis_state({{0.0, 0.0}}, rng).index()];
    for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.25, 0.01);

    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(sample_basis_state({{0.3, -0.7}}, a).index(), sample_basis_state({{0.3, -0.7}}, b).index());
}

TEST(Latent, DensityIsDiagonalProduct) {
    const LatentParams lp{{0.4, -1.3}};
    const Matrix rho = latent_density(lp);
    const double p0 = logistic(0.4), p1 = logistic(-1.3);
    const Matrix r0 = Matrix::diagonal(std::vector<double>{p0, 1 - p0});
    const Matrix r1 = Matrix::diagonal(std::vector<double>{p1, 1 - p1});
    EXPECT_LE(rho.max_abs_diff(qcore::kron(r0, r1)), 1e-15);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
    EXPECT_NEAR(latent_entropy(lp), qcore::von_neumann_entropy(qcore::DensityMatrix(rho)), 1e-12);
}

TEST(Circuit, ZeroAnglesIsIdentity) {
    for (std::size_t layers : {1u, 2u, 4u})
        EXPECT_LE(build_unitary(CircuitParams(layers)).max_abs_diff(Matrix::identity(4)), 1e-15);
}

TEST(Circuit, RxPiOnQubitZero) {
    std::vector<double> phi(kAnglesPerLayer, 0.0);
    phi[0] = kPi;
    const Matrix u = build_unitary(CircuitParams(1, phi));
    // Hand-written RX(pi) = -i X on the most significant qubit.
    const Matrix x{{0, 1}, {1, 0}};
    const Matrix expected = qcore::kron(x * Complex(0, -1), Matrix::identity(2));
    EXPECT_LE(u.max_abs_diff(expected), 1e-15);
    EXPECT_NEAR(std::abs(u(2, 0) - Complex(0, -1)), 0.0, 1e-15);
}

TEST(Circuit, GateOrderMatchesHandBuiltProduct) {
    std::mt19937_64 rng(8);
    const auto cp = random_circuit(rng, 2);
    auto rot = [](char axis, double a) {
        const double c = std::cos(a / 2), s = std::sin(a / 2);
        if (axis == 'x') return Matrix{{c, Complex(0, -s)}, {Complex(0, -s), c}};
        if (axis == 'y') return Matrix{{c, -s}, {s, c}};
        return Matrix{{std::polar(1.0, -a / 2), 0}, {0, std::polar(1.0, a / 2)}};
    };
    const Matrix i2 = Matrix::identity(2);
    auto crx_hand = [&](double a, int control) {
        // Control on the most significant qubit when control == 0.
        Matrix m = Matrix::identity(4);
        const Matrix r = rot('x', a);
        const std::size_t idx[2][2] = {{2, 3}, {1, 3}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(idx[control][i], idx[control][j]) = r(i, j);
        return m;
    };
    Matrix u = Matrix::identity(4);
    const auto& phi = cp.phi();
    for (std::size_t l = 0; l < 2; ++l) {
        const double* a = &phi[l * kAnglesPerLayer];
        for (int q = 0; q < 2; ++q) {
            for (int k = 0; k < 3; ++k) {
                const Matrix g = rot("xyz"[k], a[q * 3 + k]);
                u = (q == 0 ? qcore::kron(g, i2) : qcore::kron(i2, g)) * u;
            }
        }
        u = crx_hand(a[6], 0) * u;
        u = crx_hand(a[7], 1) * u;
    }
    EXPECT_LE(build_unitary(cp).max_abs_diff(u), 1e-13);
}

TEST(Circuit, UnitaryAndPeriodic) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto cp = random_circuit(rng, 3);
        const Matrix u = build_unitary(cp);
        EXPECT_TRUE(is_unitary(u, 1e-10));
        for (std::size_t k = 0; k < cp.phi().size(); ++k) {
            if (k % kAnglesPerLayer >= 6) continue;  // single-qubit rotations only
            auto phi = cp.phi();
            phi[k] += 4 * kPi;
            EXPECT_LE(build_unitary(CircuitParams(3, phi)).max_abs_diff(u), 1e-10);
        }
    }
}

TEST(Circuit, RejectsMalformedParameters) {
    EXPECT_THROW(CircuitParams(2, std::vector<double>(7)), ConfigError);
    EXPECT_THROW(CircuitParams(0), ConfigError);
    EXPECT_THROW(unflatten(std::vector<double>(5), 2), ConfigError);
}

TEST(Circuit, FlattenRoundTrip) {
    std::mt19937_64 rng(1);
    const auto cp = random_circuit(rng, 2);
    const auto lp = random_latent(rng);
    const auto x = flatten(lp, cp);
    EXPECT_EQ(x.size(), parameter_count(2));
    EXPECT_EQ(parameter_count(2), 18u);
    const auto [lp2, cp2] = unflatten(x, 2);
    EXPECT_EQ(lp2.theta, lp.theta);
    EXPECT_EQ(cp2.phi(), cp.phi());
}

TEST(PrepareState, Examples) {
    const auto s = prepare_state(BasisState{{0, 1}}, CircuitParams(2));
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto st = prepare_state(BasisState::from_index(trial % 4), random_circuit(rng, 2));
        double n = 0;
        for (std::size_t i = 0; i < 4; ++i) n += std::norm(st[i]);
        EXPECT_NEAR(n, 1.0, 1e-12);
    }
}

TEST(BasisRotation, Examples) {
    const double r = 1 / std::sqrt(2.0);
    const Matrix h{{r, r}, {r, -r}};
    const Matrix rxm{{r, Complex(0, r)}, {Complex(0, r), r}};  // RX(-pi/2)
    using model::PauliAxis;
    EXPECT_LE(basis_rotation({{PauliAxis::Z, PauliAxis::Z}}).max_abs_diff(Matrix::identity(4)), 1e-15);
    EXPECT_LE(basis_rotation({{PauliAxis::X, PauliAxis::X}}).max_abs_diff(qcore::kron(h, h)), 1e-15);
    EXPECT_LE(basis_rotation({{PauliAxis::Y, PauliAxis::Y}}).max_abs_diff(qcore::kron(rxm, rxm)), 1e-15);
}

TEST(BasisRotation, MapsPauliToZ) {
    // V P V^dagger = Z for X and Z; RX(-pi/2) sends Y to -Z, which the
    // estimator compensates with a sign per Y factor.
    using model::PauliAxis;
    const Matrix z = model::pauli_matrix(PauliAxis::Z);
    for (auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
        const Matrix v = basis_rotation({{axis, PauliAxis::Z}});
        const Matrix p = qcore::kron(model::pauli_matrix(axis), Matrix::identity(2));
        const double sign = axis == PauliAxis::Y ? -1.0 : 1.0;
        EXPECT_LE((v * p * v.adjoint()).max_abs_diff(qcore::kron(z, Matrix::identity(2)) * Complex(sign, 0)), 1e-14);
    }
}

TEST(AssembleState, ValidAndEntropyPreserving) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto lp = random_latent(rng);
        const auto cp = random_circuit(rng, 1 + trial % 3);
        const auto rho = assemble_state(lp, cp);  // throws if invalid
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_NEAR(qcore::von_neumann_entropy(rho), latent_entropy(lp), 1e-9);
        const Matrix u = build_unitary(cp);
        EXPECT_LE(rho.matrix().max_abs_diff(u * latent_density(lp) * u.adjoint()), 1e-12);
    }
}

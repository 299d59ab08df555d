#include "oracles.hpp"
#include "vqt/ansatz.hpp"
#include "vqt/errors.hpp"
#include "vqt/estimator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vqt;
using namespace vqt::estimator;
using qcore::Complex;
using qcore::Matrix;

namespace {

ansatz::CircuitParams random_circuit(std::mt19937_64& rng, std::size_t layers = 2) {
    std::vector<double> phi(layers * ansatz::kAnglesPerLayer);
    for (auto& v : phi) v = oracle::uniform(rng, -std::numbers::pi, std::numbers::pi);
    return ansatz::CircuitParams(layers, phi);
}

ansatz::LatentParams random_latent(std::mt19937_64& rng) {
    return {{oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2)}};
}

ShotConfig shots(std::uint64_t n, std::uint64_t seed) { return ShotConfig{n, seed}; }

}  // namespace

TEST(ExactExpectation, Examples) {
    const model::DimerModel m{1.0};
    EXPECT_NEAR(exact_expectation({{0, 0}}, ansatz::CircuitParams(2), m).value, 0.0, 1e-15);
    EXPECT_NEAR(exact_expectation({{40, 40}}, ansatz::CircuitParams(2), m).value, 0.25, 1e-12);
    EXPECT_EQ(exact_expectation({{0, 0}}, ansatz::CircuitParams(2), m).std_error, 0.0);
}

TEST(ExactExpectation, MatchesTraceOnAssembledState) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto lp = random_latent(rng);
        const auto cp = random_circuit(rng);
        const double j = oracle::uniform(rng, -5, 5);
        const auto rho = ansatz::assemble_state(lp, cp);
        EXPECT_NEAR(exact_expectation(lp, cp, {j}).value, (oracle::dimer(j) * rho.matrix()).trace().real(), 1e-12);
    }
}

TEST(ShotExpectation, ConvergesAtLargeShotCount) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto lp = random_latent(rng);
        const auto cp = random_circuit(rng);
        const auto e = shot_expectation(lp, cp, {1.0}, shots(1000000, trial), std::nullopt);
        const double exact = exact_expectation(lp, cp, {1.0}).value;
        EXPECT_GT(e.std_error, 0.0);
        EXPECT_LE(std::abs(e.value - exact), 5 * e.std_error);
        EXPECT_LT(e.std_error, 2e-3);
    }
}

TEST(ShotExpectation, FullyRandomReadoutGivesZero) {
    std::mt19937_64 rng(3);
    NoiseModel nm;
    nm.p_readout_flip = 0.5;
    for (int trial = 0; trial < 5; ++trial) {
        const auto d = outcome_distribution(random_latent(rng), random_circuit(rng), {}, nm);
        for (double p : d) EXPECT_NEAR(p, 0.25, 1e-12);
        const auto e = shot_expectation(random_latent(rng), random_circuit(rng), {1.0}, shots(8192, trial), nm);
        EXPECT_LE(std::abs(e.value), 5 * e.std_error + 1e-12);
    }
}

TEST(ShotExpectation, MaximallyMixedIsZeroWithinBand) {
    const auto e = shot_expectation({{0, 0}}, ansatz::CircuitParams(2), {1.0}, shots(8192, 1), std::nullopt);
    EXPECT_LE(std::abs(e.value), 5 * e.std_error);
}

TEST(ShotExpectation, DeterministicPerSeedAndEvaluation) {
    std::mt19937_64 rng(4);
    const auto lp = random_latent(rng);
    const auto cp = random_circuit(rng);
    const auto a = shot_expectation(lp, cp, {1.0}, shots(4096, 9), std::nullopt, 17);
    const auto b = shot_expectation(lp, cp, {1.0}, shots(4096, 9), std::nullopt, 17);
    const auto c = shot_expectation(lp, cp, {1.0}, shots(4096, 9), std::nullopt, 18);
    EXPECT_EQ(a.value, b.value);
    EXPECT_NE(a.value, c.value);
}

TEST(ShotExpectation, ErrorScalesAsInverseRootShots) {
    std::mt19937_64 rng(5);
    const auto lp = random_latent(rng);
    const auto cp = random_circuit(rng);
    const double exact = exact_expectation(lp, cp, {1.0}).value;
    auto rms = [&](std::uint64_t n) {
        double s = 0;
        for (int r = 0; r < 100; ++r) {
            const double d = shot_expectation(lp, cp, {1.0}, shots(n, 1000 + r), std::nullopt).value - exact;
            s += d * d;
        }
        return std::sqrt(s / 100);
    };
    EXPECT_NEAR(rms(2048) / rms(8192), 2.0, 0.4);
}

TEST(ShotExpectation, RankingAgreesWithExact) {
    std::mt19937_64 rng(6);
    int compared = 0, agreed = 0;
    for (int trial = 0; trial < 400 && compared < 100; ++trial) {
        const auto l1 = random_latent(rng), l2 = random_latent(rng);
        const auto c1 = random_circuit(rng), c2 = random_circuit(rng);
        const double e1 = exact_expectation(l1, c1, {1.0}).value, e2 = exact_expectation(l2, c2, {1.0}).value;
        const auto s1 = shot_expectation(l1, c1, {1.0}, shots(8192, trial), std::nullopt);
        const auto s2 = shot_expectation(l2, c2, {1.0}, shots(8192, trial + 7777), std::nullopt);
        if (std::abs(e1 - e2) <= 10 * std::max(s1.std_error, s2.std_error)) continue;
        ++compared;
        agreed += ((s1.value < s2.value) == (e1 < e2));
    }
    ASSERT_GE(compared, 50);
    EXPECT_GE(static_cast<double>(agreed) / compared, 0.99);
}

TEST(Depolarizing, Examples) {
    std::mt19937_64 rng(7);
    const Matrix rho = oracle::random_density(rng);
    const std::size_t both[] = {0, 1};
    const std::size_t q0[] = {0};
    EXPECT_LE(apply_depolarizing(rho, 0.0, both).max_abs_diff(rho), 1e-15);
    EXPECT_LE(apply_depolarizing(rho, 1.0, both).max_abs_diff(Matrix::identity(4) * Complex(0.25, 0)), 1e-14);

    const Matrix zero = Matrix::diagonal(std::vector<double>{1, 0, 0, 0});
    const Matrix got = apply_depolarizing(zero, 0.1, q0);
    EXPECT_LE(got.max_abs_diff(Matrix::diagonal(std::vector<double>{0.95, 0, 0.05, 0})), 1e-15);
}

TEST(Depolarizing, TraceAndPositivityPreserving) {
    std::mt19937_64 rng(8);
    const std::size_t loci[3][2] = {{0, 0}, {1, 1}, {0, 1}};
    for (int trial = 0; trial < 100; ++trial) {
        const qcore::DensityMatrix rho(oracle::random_density(rng));
        const double p = oracle::uniform(rng, 0, 1);
        const auto& l = loci[trial % 3];
        std::span<const std::size_t> locus(l, trial % 3 == 2 ? 2 : 1);
        const auto out = apply_depolarizing(rho, p, locus);  // validated on construction
        EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    }
}

TEST(Depolarizing, RejectsBadProbability) {
    const std::size_t q0[] = {0};
    EXPECT_THROW(apply_depolarizing(Matrix::identity(4), 1.5, q0), ContractViolation);
}

TEST(NoisyState, ReducesToIdealWithoutNoise) {
    std::mt19937_64 rng(10);
    const auto lp = random_latent(rng);
    const auto cp = random_circuit(rng);
    const auto ideal = ansatz::assemble_state(lp, cp);
    const auto noisy = noisy_circuit_state(lp, cp, NoiseModel{0.0, 0.0, 0.0});
    EXPECT_LE(noisy.matrix().max_abs_diff(ideal.matrix()), 1e-12);
    const auto real = noisy_circuit_state(lp, cp, NoiseModel{});
    EXPECT_LT(qcore::fidelity(real, ideal), 1.0);
    EXPECT_GT(qcore::fidelity(real, ideal), 0.9);
}

TEST(NoiseModelValidation, RejectsOutOfRange) {
    EXPECT_THROW((NoiseModel{-0.1, 0, 0}.validate()), ConfigError);
    EXPECT_THROW((NoiseModel{0, 0, 1.1}.validate()), ConfigError);
    EXPECT_NO_THROW(NoiseModel{}.validate());
}

TEST(OutcomeDistribution, ExactParityMatchesExpectation) {
    std::mt19937_64 rng(11);
    using model::PauliAxis;
    for (int trial = 0; trial < 20; ++trial) {
        const auto lp = random_latent(rng);
        const auto cp = random_circuit(rng);
        const auto rho = ansatz::assemble_state(lp, cp);
        for (auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
            const auto d = outcome_distribution(lp, cp, {{axis, axis}}, std::nullopt);
            const double parity = d[0] - d[1] - d[2] + d[3];
            const Matrix p = model::pauli_term_matrix({1.0, {axis, axis}});
            EXPECT_NEAR(parity, (p * rho.matrix()).trace().real(), 1e-12);
        }
    }
}

TEST(Mode, ParseRoundTrip) {
    for (auto m : {Mode::exact, Mode::shots, Mode::noisy}) EXPECT_EQ(parse_mode(mode_name(m)), m);
    EXPECT_THROW(parse_mode("quantum"), ConfigError);
}

#include "vqt/errors.hpp"
#include "vqt/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vqt;
using namespace vqt::opt;

namespace {

double sphere(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

double rosenbrock(const std::vector<double>& x) {
    return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
}

// Two quadratic basins; the one at x = -2 is deeper.
double two_basins(const std::vector<double>& x) {
    const double a = (x[0] - 2) * (x[0] - 2) + x[1] * x[1];
    const double b = (x[0] + 2) * (x[0] + 2) + x[1] * x[1] - 0.5;
    return std::min(a, b) - 0.3 * std::cos(3 * x[1]);
}

Sampler box(double lo, double hi, std::size_t n) {
    return [=](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(lo, hi);
        std::vector<double> x(n);
        for (auto& v : x) v = u(rng);
        return x;
    };
}

OptimizerConfig config(Method m, std::size_t budget) {
    OptimizerConfig c;
    c.method = m;
    c.max_iterations = budget;
    return c;
}

}  // namespace

class BothMethods : public ::testing::TestWithParam<Method> {};

TEST_P(BothMethods, Sphere) {
    const auto t = minimize(sphere, {1, 1, 1}, config(GetParam(), 200));
    EXPECT_LE(t.best_cost, 1e-6);
    EXPECT_LE(t.evaluations, 200u);
}

TEST(Minimize, RosenbrockSimplex) {
    auto c = config(Method::simplex, 2000);
    c.final_step = 1e-6;
    const auto t = minimize(rosenbrock, {-1.2, 1.0}, c);
    EXPECT_LE(t.best_cost, 1e-3);
    EXPECT_LE(t.evaluations, 2000u);
}

// Linear models crawl along the curved valley (reference COBYLA also stays
// above 1e-2 after 2000 evaluations), so only steady progress is required.
TEST(Minimize, RosenbrockLinearMakesProgress) {
    auto c = config(Method::linear_approx, 2000);
    c.final_step = 1e-6;
    const auto t = minimize(rosenbrock, {-1.2, 1.0}, c);
    EXPECT_LT(t.best_cost, 1.0);
    EXPECT_LT(t.best_cost, rosenbrock({-1.2, 1.0}) / 20);
}

TEST_P(BothMethods, NeverWorseThanStart) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x0 = box(-3, 3, 2)(rng);
        const auto t = minimize(two_basins, x0, config(GetParam(), 150));
        EXPECT_LE(t.best_cost, two_basins(x0));
        EXPECT_DOUBLE_EQ(t.best_cost, two_basins(t.best_params));
        ASSERT_FALSE(t.records.empty());
        EXPECT_DOUBLE_EQ(t.records.front().cost, two_basins(x0));
        for (std::size_t i = 1; i < t.records.size(); ++i) {
            EXPECT_EQ(t.records[i].iteration, i + 1);
            EXPECT_LE(t.records[i].best_cost, t.records[i - 1].best_cost);
        }
    }
}

TEST(Minimize, TrustRadiusNonIncreasing) {
    const auto t = minimize(rosenbrock, {-1.2, 1.0}, config(Method::linear_approx, 500));
    for (std::size_t i = 1; i < t.records.size(); ++i) EXPECT_LE(t.records[i].radius, t.records[i - 1].radius);
}

TEST_P(BothMethods, NonFiniteObjectiveAborts) {
    const Objective bad = [](const std::vector<double>& x) { return x[0] > 0.7 ? NAN : sphere(x); };
    try {
        minimize(bad, {0.5, 0.5}, config(GetParam(), 100));
        FAIL() << "expected ObjectiveError";
    } catch (const ObjectiveError& e) {
        ASSERT_EQ(e.params().size(), 2u);
        EXPECT_GT(e.params()[0], 0.7);
        EXPECT_NE(std::string(e.what()).find("objective returned nan"), std::string::npos);
    }
}

INSTANTIATE_TEST_SUITE_P(Optimizer, BothMethods, ::testing::Values(Method::linear_approx, Method::simplex),
                         [](const auto& info) { return std::string(method_name(info.param)); });

TEST(Minimize, ConvergenceFlag) {
    auto c = config(Method::linear_approx, 1000);
    EXPECT_TRUE(minimize(sphere, {1, 1}, c).converged);
    c.max_iterations = 5;
    EXPECT_FALSE(minimize(sphere, {1, 1}, c).converged);
}

TEST(Minimize, RejectsBadInput) {
    EXPECT_THROW(minimize(sphere, {}, config(Method::simplex, 10)), ContractViolation);
    EXPECT_THROW(minimize(sphere, {NAN}, config(Method::simplex, 10)), ContractViolation);
    auto c = config(Method::simplex, 10);
    c.final_step = 1.0;
    c.initial_step = 0.1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Multistart, SingleRestartEqualsMinimize) {
    auto c = config(Method::linear_approx, 200);
    c.seed = 42;
    const auto sampler = box(-3, 3, 2);
    const auto ms = multistart(two_basins, c, sampler);
    std::seed_seq seq{42u, 0u, 0u};
    std::mt19937_64 rng(seq);
    const auto direct = minimize(two_basins, sampler(rng), c);
    EXPECT_EQ(ms.best_params, direct.best_params);
    EXPECT_EQ(ms.best_cost, direct.best_cost);
    EXPECT_EQ(ms.records.size(), direct.records.size());
}

TEST(Multistart, FindsGlobalBasin) {
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto c = config(Method::linear_approx, 150);
        c.restarts = 10;
        c.seed = s;
        const auto t = multistart(two_basins, c, box(-4, 4, 2));
        hits += t.best_params[0] < 0;
    }
    EXPECT_GE(hits, 95);
}

TEST(Multistart, Deterministic) {
    auto c = config(Method::linear_approx, 150);
    c.restarts = 5;
    c.polish_passes = 2;
    c.seed = 7;
    const auto a = multistart(two_basins, c, box(-4, 4, 2));
    const auto b = multistart(two_basins, c, box(-4, 4, 2));
    EXPECT_EQ(a.best_params, b.best_params);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].params_hash, b.records[i].params_hash);
}

TEST(Multistart, PolishExtendsTraceAndNeverHurts) {
    auto c = config(Method::linear_approx, 100);
    c.restarts = 2;
    c.seed = 3;
    const auto plain = multistart(rosenbrock, c, box(-2, 2, 2));
    c.polish_passes = 2;
    const auto polished = multistart(rosenbrock, c, box(-2, 2, 2));
    EXPECT_LE(polished.best_cost, plain.best_cost);
    EXPECT_EQ(polished.primary_evaluations, plain.evaluations);
    EXPECT_GT(polished.evaluations, plain.evaluations);
    for (std::size_t i = 0; i < polished.records.size(); ++i) EXPECT_EQ(polished.records[i].iteration, i + 1);
}

TEST(Multistart, FailingRestartsAreRecorded) {
    // Infinite left of -0.5 with the minimum at +1: starts on the left abort.
    const Objective obj = [](const std::vector<double>& x) { return x[0] < -0.5 ? INFINITY : (x[0] - 1) * (x[0] - 1); };
    auto c = config(Method::simplex, 100);
    c.restarts = 8;
    const auto t = multistart(obj, c, box(-1, 1, 1));
    EXPECT_FALSE(t.restart_failures.empty());
    EXPECT_TRUE(std::isfinite(t.best_cost));

    const Objective always_bad = [](const std::vector<double>&) { return NAN; };
    EXPECT_THROW(multistart(always_bad, c, box(-1, 1, 1)), ObjectiveError);
}

TEST(Multistart, WarmStartReplacesFirstDraw) {
    auto c = config(Method::linear_approx, 1);
    const auto t = multistart(sphere, c, box(-3, 3, 2), {0.25, 0.5});
    EXPECT_EQ(t.best_params, (std::vector<double>{0.25, 0.5}));
}

TEST(Method, Parse) {
    EXPECT_EQ(parse_method("cobyla"), Method::linear_approx);
    EXPECT_EQ(parse_method("nelder_mead"), Method::simplex);
    EXPECT_EQ(parse_method(method_name(Method::simplex)), Method::simplex);
    EXPECT_THROW(parse_method("bfgs"), ConfigError);
}

TEST(HashParams, DistinguishesValues) {
    EXPECT_EQ(hash_params({1.0, 2.0}), hash_params({1.0, 2.0}));
    EXPECT_NE(hash_params({1.0, 2.0}), hash_params({2.0, 1.0}));
}

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include "sysrisk/equilibrium.hpp"
#include "sysrisk/rng.hpp"
#include "sysrisk/simulate.hpp"

using namespace sysrisk;

namespace {

double sup_diff(std::span<const double> x, std::span<const double> y) {
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
    return worst;
}

ModelParams base(double a = 1.0, double rho = 0.0) {
    return ModelParams{.n_banks = 10, .a = a, .q = 1, .epsilon = 10, .c = 0, .rho = rho};
}

}  // namespace

TEST(Noise, ShapeScaleAndReproducibility) {
    const auto nb = generate_noise(5, 4, 1000, 1e-3);
    ASSERT_EQ(nb.common.size(), 1000u);
    ASSERT_EQ(nb.idio.size(), 4000u);
    double s2 = 0;
    for (double v : nb.idio) s2 += v * v;
    EXPECT_NEAR(s2 / 4000, 1e-3, 1e-4);
    EXPECT_EQ(generate_noise(5, 4, 1000, 1e-3).idio, nb.idio);
    // Bank i's stream does not depend on how many banks are drawn.
    const auto wider = generate_noise(5, 6, 1000, 1e-3);
    EXPECT_TRUE(std::equal(nb.bank(3).begin(), nb.bank(3).end(), wider.bank(3).begin()));
    EXPECT_EQ(wider.common, nb.common);
}

TEST(Policy, NamesRoundTrip) {
    for (const auto& p : {PolicySpec::uncontrolled(), PolicySpec::independent(),
                          PolicySpec::equilibrium(EquilibriumMode::OpenLoop),
                          PolicySpec::equilibrium(EquilibriumMode::ClosedLoop),
                          PolicySpec::equilibrium(EquilibriumMode::MeanFieldGame)}) {
        EXPECT_EQ(PolicySpec::parse(p.name()), p);
    }
    EXPECT_THROW(PolicySpec::parse("greedy"), Error);
}

TEST(Euler, RejectsMismatchedShapes) {
    const ModelParams p = base();
    const auto nb = generate_noise(0, 10, 100, 0.01);
    std::vector<double> x0(9, 0.0);
    try {
        euler_simulate(p, PolicySpec::uncontrolled(), x0, nb);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(Euler, InitialStateAndGrid) {
    const ModelParams p = base();
    const auto nb = generate_noise(1, 10, 100, 0.01);
    std::vector<double> x0{0.1, -0.1, 0.2, 0, 0, 0, 0, 0, 0, 0.3};
    const auto ens = euler_simulate(p, PolicySpec::uncontrolled(), x0, nb);
    EXPECT_EQ(ens.grid.size(), 101);
    EXPECT_EQ(ens.grid.at(100), 1.0);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(ens.path(i)[0], x0[i]);
    EXPECT_NEAR(ens.mean_path[0], 0.05, 1e-15);
}

TEST(Euler, DeterministicDecayToMean) {
    // Without noise each deviation shrinks by (1 - a dt) per step.
    const ModelParams p = base(2.0);
    const int n = 500;
    const auto nb = zero_noise(2, n, 1.0 / n);
    ModelParams p2 = p;
    p2.n_banks = 2;
    const std::vector<double> x0{1.0, -1.0};
    const auto ens = euler_simulate(p2, PolicySpec::uncontrolled(), x0, nb);
    EXPECT_NEAR(ens.path(0)[n], std::pow(1.0 - 2.0 / n, n), 1e-12);
    for (double m : ens.mean_path) EXPECT_NEAR(m, 0.0, 1e-15);
}

TEST(Euler, MeanPathIsControlFree) {
    ModelParams p = base(10.0);
    std::vector<double> x0(10);
    for (int i = 0; i < 10; ++i) x0[i] = 0.05 * (i - 4.5);
    for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
        const auto nb = generate_noise(seed, 10, 2000, 1.0 / 2000);
        const auto un = euler_simulate(p, PolicySpec::uncontrolled(), x0, nb);
        const auto in = euler_simulate(p, PolicySpec::independent(), x0, nb);
        const auto cl = euler_simulate(p, PolicySpec::equilibrium(EquilibriumMode::ClosedLoop), x0, nb);
        const auto mf = euler_simulate(p, PolicySpec::equilibrium(EquilibriumMode::MeanFieldGame), x0, nb);
        EXPECT_LE(sup_diff(un.mean_path, in.mean_path), 1e-12);
        EXPECT_LE(sup_diff(un.mean_path, cl.mean_path), 1e-12);
        EXPECT_LE(sup_diff(un.mean_path, mf.mean_path), 1e-12);
        // but the individual paths differ
        EXPECT_GT(sup_diff(un.path(0), in.path(0)), 1e-3);
    }
}

TEST(Euler, IndependentEqualsUncoupled) {
    ModelParams p = base(0.0, 0.3);
    const auto nb = generate_noise(9, 10, 500, 1.0 / 500);
    const std::vector<double> x0(10, 0.0);
    const auto un = euler_simulate(p, PolicySpec::uncontrolled(), x0, nb);
    p.a = 7.0;
    const auto in = euler_simulate(p, PolicySpec::independent(), x0, nb);
    EXPECT_EQ(un.states, in.states);
}

TEST(Euler, EquilibriumGainsAttached) {
    const ModelParams p = base();
    const auto nb = generate_noise(0, 10, 100, 0.01);
    const auto ens = euler_simulate(p, PolicySpec::equilibrium(EquilibriumMode::ClosedLoop), std::vector<double>(10), nb);
    ASSERT_TRUE(ens.gains);
    ASSERT_EQ(ens.gains->size(), 100u);
    EXPECT_DOUBLE_EQ((*ens.gains)[0], control_gain(0.0, p, EquilibriumMode::ClosedLoop));
    EXPECT_FALSE(euler_simulate(p, PolicySpec::uncontrolled(), std::vector<double>(10), nb).gains);
}

TEST(ExactOu, RequiresZeroStart) {
    const ModelParams p = base();
    const auto nb = generate_noise(0, 10, 10, 0.1);
    std::vector<double> x0(10, 0.0);
    x0[2] = 0.1;
    try {
        exact_ou_simulate(p, x0, nb, ExactScheme::ExactVariance);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonzeroInitial);
    }
}

TEST(ExactOu, EulerConsistentTracksEuler) {
    const ModelParams p = base(5.0, 0.4);
    const auto nb = generate_noise(3, 10, 10000, 1e-4);
    const std::vector<double> x0(10, 0.0);
    const auto euler = euler_simulate(p, PolicySpec::uncontrolled(), x0, nb);
    const auto exact = exact_ou_simulate(p, x0, nb, ExactScheme::EulerConsistent);
    for (int i = 0; i < 10; ++i) EXPECT_LE(sup_diff(euler.path(i), exact.path(i)), 5e-3);
    EXPECT_LE(sup_diff(euler.mean_path, exact.mean_path), 1e-12);
}

TEST(ExactOu, ExactVarianceOnCoarseGrid) {
    // Var(X^i_T - Xbar_T) = sigma^2 (1 - rho^2)(1 - 1/N)(1 - e^{-2aT}) / (2a), exact for any step.
    const ModelParams p = base(3.0, 0.5);
    const int n_paths = 20000;
    const std::vector<double> x0(10, 0.0);
    double sum_sq = 0.0, sum_mean_sq = 0.0;
    for (int k = 0; k < n_paths; ++k) {
        const auto nb = generate_noise(path_seed(17, k), 10, 4, 0.25);
        const auto ens = exact_ou_simulate(p, x0, nb, ExactScheme::ExactVariance);
        const double m = ens.mean_path.back();
        for (int i = 0; i < 10; ++i) {
            const double y = ens.path(i).back() - m;
            sum_sq += y * y;
        }
        sum_mean_sq += m * m;
    }
    const double expected = 0.75 * 0.9 * (1 - std::exp(-6.0)) / 6.0;
    const double got = sum_sq / (10.0 * n_paths);
    EXPECT_NEAR(got, expected, 0.03 * expected);
    // Var(Xbar_T) = sigma^2 T (rho^2 + (1 - rho^2) / N)
    EXPECT_NEAR(sum_mean_sq / n_paths, 0.25 + 0.075, 0.03 * 0.325);
}

TEST(FirstPassage, InclusiveAndPerBank) {
    ModelParams p = base(0.0);
    p.n_banks = 2;
    const auto nb = zero_noise(2, 10, 0.1);
    const auto ens = euler_simulate(p, PolicySpec::uncontrolled(), std::vector<double>{-0.7, 0.0}, nb);
    const auto s = first_passage(ens, -0.7);
    EXPECT_TRUE(s.defaulted[0]);
    EXPECT_FALSE(s.defaulted[1]);
    EXPECT_EQ(s.n_defaults, 1);
    EXPECT_FALSE(s.mean_hit);
    EXPECT_DOUBLE_EQ(s.min_mean, -0.35);
}

TEST(Cost, RequiresEquilibrium) {
    const ModelParams p = base();
    const auto nb = generate_noise(0, 10, 100, 0.01);
    const auto ens = euler_simulate(p, PolicySpec::uncontrolled(), std::vector<double>(10), nb);
    try {
        realized_cost(ens, 0, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PolicyMismatch);
    }
}

TEST(Cost, DeterministicPathByHand) {
    // Two banks, no noise: y = x1 - xbar evolves deterministically.
    ModelParams p = base();
    p.n_banks = 2;
    p.c = 2.0;
    const int n = 50;
    const auto nb = zero_noise(2, n, 1.0 / n);
    const auto ens = euler_simulate(p, PolicySpec::equilibrium(EquilibriumMode::ClosedLoop), std::vector<double>{0.5, -0.5}, nb);
    double running = 0.0;
    for (int k = 0; k < n; ++k) {
        const double y = ens.mean_path[k] - ens.path(0)[k];
        const double alpha = (*ens.gains)[k] * y;
        running += (0.5 * alpha * alpha - p.q * alpha * y + 0.5 * p.epsilon * y * y) / n;
    }
    const double yT = ens.mean_path[n] - ens.path(0)[n];
    EXPECT_NEAR(realized_cost(ens, 0, p), running + 0.5 * p.c * yT * yT, 1e-14);
}

TEST(Cost, MonteCarloMatchesValue) {
    ModelParams p = base();
    p.rho = 0.2;
    p.c = 10.0;
    const auto est = equilibrium_cost_mc(p, EquilibriumMode::ClosedLoop, 4000, 0, 1e-3);
    EXPECT_EQ(est.n_samples, 4000);
    const double v = value_time0(0.0, p, EquilibriumMode::ClosedLoop);
    EXPECT_NEAR(est.mean, v, 4 * est.std_error + 0.01 * v);
}

TEST(Threads, EveryIndexVisitedOnce) {
    std::vector<std::atomic<int>> hits(1001);
    for_each_path(1001, [&](std::int64_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

#include <gtest/gtest.h>

#include <cmath>

#include "sysrisk/equilibrium.hpp"
#include "sysrisk/riccati.hpp"

using namespace sysrisk;

namespace {

ModelParams high_penalty(double c = 0.0, double rho = 0.0) {
    return ModelParams{.n_banks = 10, .a = 1, .q = 1, .epsilon = 10, .c = c, .rho = rho};
}

// RK4 on m' = -2 A_t m + sigma^2 (1 - rho^2) F, m_0 = d^2; F = 1 - 1/N or 1.
double second_moment_oracle(double end, double d, const ModelParams& p, EquilibriumMode mode) {
    const int n = 20000;
    const double h = end / n;
    const double f = mode == EquilibriumMode::MeanFieldGame ? 1.0 : 1.0 - 1.0 / p.n_banks;
    const double src = p.sigma * p.sigma * (1 - p.rho * p.rho) * f;
    auto rhs = [&](double t, double m) { return -2 * effective_rate(t, p, mode) * m + src; };
    double m = d * d;
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        const double k1 = rhs(t, m);
        const double k2 = rhs(t + h / 2, m + h / 2 * k1);
        const double k3 = rhs(t + h / 2, m + h / 2 * k2);
        const double k4 = rhs(t + h, m + h * k3);
        m += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return m;
}

}  // namespace

TEST(Gain, FactorPerMode) {
    EXPECT_DOUBLE_EQ(control_factor(EquilibriumMode::OpenLoop, 10), 0.9);
    EXPECT_DOUBLE_EQ(control_factor(EquilibriumMode::ClosedLoop, 4), 0.75);
    EXPECT_EQ(control_factor(EquilibriumMode::MeanFieldGame, 10), 1.0);
}

TEST(Gain, TerminalGainAndRate) {
    const ModelParams p = high_penalty(1.0);
    EXPECT_DOUBLE_EQ(control_gain(1.0, p, EquilibriumMode::ClosedLoop), 1.0 + 0.9);
    EXPECT_DOUBLE_EQ(effective_rate(1.0, p, EquilibriumMode::MeanFieldGame), 1.0 + 1.0 + 1.0);
}

TEST(RateLimit, KnownValues) {
    const ModelParams p = high_penalty();
    EXPECT_NEAR(effective_rate_limit(p, EquilibriumMode::MeanFieldGame), std::sqrt(13.0), 1e-12);
    EXPECT_NEAR(effective_rate_limit(p, EquilibriumMode::OpenLoop), std::sqrt(12.1), 1e-12);
    EXPECT_NEAR(effective_rate_limit(p, EquilibriumMode::ClosedLoop), 3.448226222403942, 1e-12);
}

TEST(RateLimit, OrderingAndMonotoneInN) {
    double prev_open = 0.0, prev_closed = 0.0;
    for (int n : {2, 5, 10, 50, 200}) {
        ModelParams p = high_penalty();
        p.n_banks = n;
        const double open = effective_rate_limit(p, EquilibriumMode::OpenLoop);
        const double closed = effective_rate_limit(p, EquilibriumMode::ClosedLoop);
        EXPECT_GT(open, closed);
        EXPECT_GT(open, prev_open);
        EXPECT_GT(closed, prev_closed);
        EXPECT_LT(open, std::sqrt(13.0));
        prev_open = open;
        prev_closed = closed;
    }
}

TEST(RateLimit, MatchesLongHorizonRate) {
    ModelParams p = high_penalty();
    p.horizon = 50.0;
    for (auto mode : {EquilibriumMode::OpenLoop, EquilibriumMode::ClosedLoop, EquilibriumMode::MeanFieldGame}) {
        EXPECT_NEAR(effective_rate(0.0, p, mode), effective_rate_limit(p, mode), 1e-10);
    }
}

TEST(ValueFunction, UnsupportedForOpenLoop) {
    try {
        value_function(0.0, 0.0, high_penalty(), EquilibriumMode::OpenLoop);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedMode);
    }
}

TEST(ValueFunction, TerminalValueIsPenalty) {
    const ModelParams p = high_penalty(3.0, 0.2);
    EXPECT_DOUBLE_EQ(value_function(1.0, 0.5, p, EquilibriumMode::ClosedLoop), 1.5 * 0.25);
}

TEST(ValueFunction, MatchesTimeZeroQuadrature) {
    for (auto mode : {EquilibriumMode::ClosedLoop, EquilibriumMode::MeanFieldGame}) {
        for (double rho : {0.0, 0.2}) {
            for (double c : {0.0, 1.0, 10.0}) {
                const ModelParams p = high_penalty(c, rho);
                for (double d : {0.0, 0.5, -0.5, 1.0, -1.0}) {
                    EXPECT_NEAR(value_function(0.0, d, p, mode), value_time0(d, p, mode), 1e-6)
                        << "rho=" << rho << " c=" << c << " d=" << d;
                }
            }
        }
    }
}

TEST(ValueFunction, EvenInDeviation) {
    const ModelParams p = high_penalty(1.0, 0.2);
    for (auto mode : {EquilibriumMode::OpenLoop, EquilibriumMode::ClosedLoop}) {
        EXPECT_NEAR(value_time0(0.7, p, mode), value_time0(-0.7, p, mode), 1e-14);
    }
}

TEST(Deviation, StartsAtInitialSquare) {
    EXPECT_DOUBLE_EQ(expected_sq_deviation(0.0, 0.8, high_penalty(), EquilibriumMode::ClosedLoop), 0.64);
}

TEST(Deviation, MatchesMomentOde) {
    for (auto mode : {EquilibriumMode::OpenLoop, EquilibriumMode::ClosedLoop, EquilibriumMode::MeanFieldGame}) {
        for (const ModelParams& p : {high_penalty(0.0, 0.0), high_penalty(10.0, 0.2)}) {
            for (double t : {0.25, 1.0}) {
                EXPECT_NEAR(expected_sq_deviation(t, 0.5, p, mode), second_moment_oracle(t, 0.5, p, mode), 1e-9);
            }
        }
    }
}

TEST(Deviation, ProfileGridAndEndpoints) {
    const auto prof = deviation_profile(high_penalty(), EquilibriumMode::ClosedLoop, 1.0, 1.0, 101);
    EXPECT_EQ(prof.grid.n_steps, 102);
    EXPECT_EQ(prof.expected_sq_dev.size(), 103u);
    EXPECT_DOUBLE_EQ(prof.expected_sq_dev.front(), 1.0);
    EXPECT_NEAR(prof.expected_sq_dev.back(), expected_sq_deviation(1.0, 1.0, high_penalty(), EquilibriumMode::ClosedLoop),
                1e-8);
}

TEST(Deviation, NoNoiseNoCost) {
    ModelParams p = high_penalty();
    p.rho = 1.0;
    for (auto mode : {EquilibriumMode::OpenLoop, EquilibriumMode::ClosedLoop, EquilibriumMode::MeanFieldGame}) {
        EXPECT_NEAR(value_time0(0.0, p, mode), 0.0, 1e-15);
    }
}

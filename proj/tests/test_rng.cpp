#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sysrisk/rng.hpp"

using namespace sysrisk;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(CounterNormal, FillMatchesPointwise) {
    std::vector<double> buf(9);
    fill_normals(42, 3, 1.0, buf);
    for (std::size_t k = 0; k < buf.size(); ++k) EXPECT_EQ(buf[k], counter_normal(42, 3, k));
}

TEST(CounterNormal, StreamsAndSeedsDiffer) {
    EXPECT_NE(counter_normal(1, 0, 0), counter_normal(1, 1, 0));
    EXPECT_NE(counter_normal(1, 0, 0), counter_normal(2, 0, 0));
    EXPECT_NE(path_seed(0, 0), path_seed(0, 1));
    EXPECT_NE(path_seed(0, 0), path_seed(1, 0));
}

TEST(CounterNormal, Moments) {
    const std::size_t n = 1'000'000;
    std::vector<double> z(n);
    fill_normals(7, 1, 1.0, z);
    double sum = 0, sum2 = 0, sum4 = 0;
    for (double v : z) {
        sum += v;
        sum2 += v * v;
        sum4 += v * v * v * v;
    }
    EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(double(n)));
    EXPECT_NEAR(sum2 / n, 1.0, 0.01);
    EXPECT_NEAR(sum4 / n, 3.0, 0.05);
}

TEST(CounterNormal, AdjacentStreamsUncorrelated) {
    const std::size_t n = 200'000;
    std::vector<double> x(n), y(n);
    fill_normals(11, 1, 1.0, x);
    fill_normals(11, 2, 1.0, y);
    double xy = 0;
    for (std::size_t k = 0; k < n; ++k) xy += x[k] * y[k];
    EXPECT_NEAR(xy / n, 0.0, 4.0 / std::sqrt(double(n)));
}

#include "recsynth/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using recsynth::RngStream;
using recsynth::StreamFamily;

TEST(RngStream, SameSeedAndStreamReplaysBitwise) {
    RngStream a(1234, 7);
    RngStream b(1234, 7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctStreamsDiffer) {
    RngStream a(1234, 7);
    RngStream b(1234, 8);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    EXPECT_EQ(equal, 0);
}

TEST(RngStream, DistinctStreamsUncorrelated) {
    RngStream a(99, 0);
    RngStream b(99, 1);
    const int n = 200000;
    double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        double x = a.next_double(), y = b.next_double();
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    double mx = sx / n, my = sy / n;
    double corr = (sxy / n - mx * my) /
                  std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
    EXPECT_LT(std::fabs(corr), 0.01);  // ~4.5 sigma at n = 2e5
}

TEST(RngStream, DoublesInHalfOpenUnit) {
    RngStream rng(5, 5);
    double mean = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = rng.next_double();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / n, 0.5, 0.005);
}

TEST(RngStream, OpenUnitExcludesEndpoints) {
    RngStream rng(5, 6);
    for (int i = 0; i < 100000; ++i) {
        double u = rng.next_open01();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(RngStream, BoundedDrawsCoverRangeUniformly) {
    RngStream rng(17, 0);
    const std::uint64_t bound = 6;
    std::vector<int> counts(bound, 0);
    const int n = 600000;
    for (int i = 0; i < n; ++i) ++counts[rng.next_below(bound)];
    const double expected = static_cast<double>(n) / bound;
    const double sd = std::sqrt(expected * (1.0 - 1.0 / bound));
    for (std::uint64_t k = 0; k < bound; ++k)
        EXPECT_NEAR(counts[k], expected, 4.5 * sd) << "bucket " << k;
}

TEST(StreamFamily, StepAndIndexSelectIndependentStreams) {
    StreamFamily family(2024);
    RngStream a = family.stream("latents", 3);
    RngStream b = family.stream("latents", 3);
    RngStream c = family.stream("latents", 4);
    RngStream d = family.stream("behaviors", 3);
    std::uint64_t a0 = a.next_u64();
    EXPECT_EQ(a0, b.next_u64());
    EXPECT_NE(a0, c.next_u64());
    EXPECT_NE(a0, d.next_u64());
}

TEST(StreamFamily, DifferentSeedsDiverge) {
    StreamFamily f1(1), f2(2);
    EXPECT_NE(f1.stream("x", 0).next_u64(), f2.stream("x", 0).next_u64());
}

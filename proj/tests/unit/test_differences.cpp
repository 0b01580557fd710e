#include <gtest/gtest.h>

#include <cmath>

#include "ctv/differences.hpp"
#include "ctv/errors.hpp"
#include "test_support.hpp"

using namespace ctv;
using ctv::testing::Rng;

namespace {

PixelTuple angles(std::initializer_list<double> values) {
    PixelTuple t;
    for (const double v : values) {
        t.push_back(PixelValue({Angle(v)}, {}));
    }
    return t;
}

const Weight& weight_of(int k) {
    static const Weight ws[3] = {Weight::b1(), Weight::b2(), Weight::b11()};
    return ws[k];
}

}  // namespace

TEST(Weight, Entries) {
    EXPECT_EQ(Weight::b1().size(), 2U);
    EXPECT_EQ(Weight::b2()[1], -2.0);
    EXPECT_EQ(Weight::b11()[3], -1.0);
    EXPECT_EQ(Weight::of(WeightKind::B2).kind(), WeightKind::B2);
    EXPECT_THROW(Weight::of(WeightKind::General), InvalidArgument);
    EXPECT_THROW(Weight::general({1.0, 1.0}), InvalidArgument);
    EXPECT_THROW(Weight::general({0.0, 0.0}), InvalidArgument);
    EXPECT_EQ(Weight::general({2.0, -1.0, -1.0}).kind(), WeightKind::General);
}

TEST(AbsDiffLinear, Examples) {
    EXPECT_EQ(abs_diff_linear({{1.0}, {2.0}, {3.0}}, Weight::b2()), 0.0);
    EXPECT_EQ(abs_diff_linear({{0.0}, {4.0}}, Weight::b1()), 4.0);
    EXPECT_EQ(abs_diff_linear({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Weight::b11()), 0.0);
    EXPECT_THROW(abs_diff_linear({{0.0}}, Weight::b1()), DimensionMismatch);
}

TEST(AbsDiffCombined, Examples) {
    EXPECT_NEAR(abs_diff_combined(angles({-3.0, 3.1, 3.0}), Weight::b2()), std::abs(wrap(-6.2)), 1e-15);
    EXPECT_NEAR(abs_diff_combined(angles({-3.0, 3.1, 3.0}), Weight::b2()), 0.08319, 1e-5);
    const PixelTuple mixed{PixelValue({Angle(3.0)}, {1.0}), PixelValue({Angle(-3.0)}, {2.0})};
    EXPECT_NEAR(abs_diff_combined(mixed, Weight::b1()), 1.03932, 1e-5);
    EXPECT_THROW(abs_diff_combined(mixed, Weight::general({-1.0, 1.0})), InvalidArgument);
    EXPECT_THROW(abs_diff_combined(mixed, Weight::b2()), DimensionMismatch);
}

TEST(AbsDiffCombined, LinearReduction) {
    Rng rng(10);
    for (int k = 0; k < 3; ++k) {
        const Weight& w = weight_of(k);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto t = rng.tuple(Signature{0, 2}, w.size());
            Columns cols;
            for (const auto& p : t) {
                cols.push_back(p.linear);
            }
            ASSERT_EQ(abs_diff_combined(t, w), abs_diff_linear(cols, w));
            ASSERT_NEAR(abs_diff_oracle(t, w), abs_diff_linear(cols, w), 1e-12);
        }
    }
}

TEST(AbsDiffOracle, MatchesClosedForm) {
    Rng rng(11);
    for (int k = 0; k < 3; ++k) {
        const Weight& w = weight_of(k);
        for (int trial = 0; trial < 10'000; ++trial) {
            const Signature sig{rng.index(4), rng.index(3)};
            if (sig.size() == 0) {
                continue;
            }
            const auto t = rng.tuple(sig, w.size());
            ASSERT_NEAR(abs_diff_oracle(t, w), abs_diff_combined(t, w), 1e-12) << "weight " << to_string(w.kind());
        }
    }
}

TEST(AbsDiffOracle, ConstantTupleAndLimits) {
    const PixelValue p({Angle(2.0), Angle(-1.0)}, {3.0});
    EXPECT_EQ(abs_diff_oracle({p, p, p, p}, Weight::b11()), 0.0);
    const PixelValue big({Angle(0.0), Angle(0.0), Angle(0.0), Angle(0.0)}, {});
    EXPECT_THROW(abs_diff_oracle({big, big}, Weight::b1()), InvalidArgument);
}

TEST(AbsDiffOracle, SeamTuplesUseTheSmallerBranch) {
    // Two points at antipodes: both branches give pi.
    EXPECT_NEAR(abs_diff_oracle(angles({-kPi / 2, kPi / 2}), Weight::b1()), kPi, 1e-12);
    // Second difference with a seam hit: the closed form wraps to -pi, magnitude pi either way.
    EXPECT_NEAR(abs_diff_oracle(angles({0.0, kPi / 2, -kPi}), Weight::b2()),
                abs_diff_combined(angles({0.0, kPi / 2, -kPi}), Weight::b2()), 1e-12);
}

TEST(AbsDiffCombined, ShiftInvariance) {
    Rng rng(12);
    for (int k = 0; k < 3; ++k) {
        const Weight& w = weight_of(k);
        for (int trial = 0; trial < 5000; ++trial) {
            const Signature sig{2, 2};
            auto t = rng.tuple(sig, w.size());
            const double before = abs_diff_combined(t, w);
            const double a0 = rng.uniform(-10.0, 10.0);
            const double a1 = rng.uniform(-10.0, 10.0);
            const double b = rng.uniform(-10.0, 10.0);
            for (auto& p : t) {
                p.cyclic[0] = Angle(p.cyclic[0].value() + a0);
                p.cyclic[1] = Angle(p.cyclic[1].value() + a1);
                p.linear[0] += b;
                p.linear[1] += b;
            }
            // Values within 1e-9 of the seam may legitimately flip branch; compare the magnitudes.
            ASSERT_NEAR(abs_diff_combined(t, w), before, 1e-9);
        }
    }
}

TEST(AbsDiffCombined, SecondDifferenceBoundedByFirst) {
    Rng rng(13);
    for (int trial = 0; trial < 10'000; ++trial) {
        const auto t = rng.tuple(Signature{1, 1}, 3);
        const double d2 = abs_diff_combined(t, Weight::b2());
        const double d1a = abs_diff_combined({t[0], t[1]}, Weight::b1());
        const double d1b = abs_diff_combined({t[1], t[2]}, Weight::b1());
        ASSERT_LE(d2, 2.0 * std::max(d1a, d1b) + 1e-9);
    }
}

TEST(AbsDiffCombined, NonnegativeAndZeroOnlyOnSmoothTuples) {
    Rng rng(14);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto t = rng.tuple(Signature{1, 1}, 2);
        ASSERT_GT(abs_diff_combined(t, Weight::b1()), 0.0);
    }
    // Collinear on the circle across the seam and on the line.
    const PixelTuple smooth{PixelValue({Angle(3.0)}, {1.0}), PixelValue({Angle(3.2)}, {2.0}),
                            PixelValue({Angle(3.4)}, {3.0})};
    EXPECT_NEAR(abs_diff_combined(smooth, Weight::b2()), 0.0, 1e-15);
}

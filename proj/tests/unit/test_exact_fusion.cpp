#include <gtest/gtest.h>

#include "wfusion/fusion.hpp"

using namespace wfusion;

TEST(ExactFusion, BellFusionIsThreeQuarters) {
    const auto e = fuse_exact(2, 2, GateKind::FGF);
    EXPECT_EQ(e.success, Rational(3, 4));
    EXPECT_EQ(e.recycle, Rational(1, 4));
    EXPECT_EQ(e.failure, Rational(0));
}

TEST(ExactFusion, TableOneValues) {
    const auto e = fuse_exact(3, 3, GateKind::FG);
    EXPECT_EQ(e.success, Rational(4, 9));
    EXPECT_EQ(e.recycle, Rational(4, 9));
    EXPECT_EQ(e.failure, Rational(1, 9));
}

TEST(ExactFusion, ClosedFormsHoldExactlyOnGrid) {
    for (std::int64_t n = 2; n <= 8; ++n) {
        for (std::int64_t m = 2; m <= 8; ++m) {
            const auto fg = fuse_exact(int(n), int(m), GateKind::FG);
            EXPECT_EQ(fg.success, Rational(n + m - 2, n * m));
            EXPECT_EQ(fg.recycle, Rational((n - 1) * (m - 1), n * m));
            EXPECT_EQ(fg.failure, Rational(1, n * m));
            const auto fgf = fuse_exact(int(n), int(m), GateKind::FGF);
            EXPECT_EQ(fgf.success, Rational(n + m - 1, n * m));
            EXPECT_EQ(fgf.success - fg.success, Rational(1, n * m));
            EXPECT_EQ(fgf.failure, Rational(0));
        }
    }
}

TEST(ExactFusion, AgreesWithFloatingPointBranchByBranch) {
    for (auto gate : {GateKind::FG, GateKind::FGF}) {
        for (int n = 2; n <= 7; ++n) {
            for (int m = 2; m <= 7; ++m) {
                const auto r = fuse(n, m, gate);
                Rational total{0};
                for (const auto& b : r.branches) {
                    EXPECT_NEAR(to_double(b.exact_probability), b.probability, 1e-12);
                    total += b.exact_probability;
                }
                EXPECT_EQ(total, Rational(1));
            }
        }
    }
}

TEST(ExactFusion, EveryCoincidencePatternIsEquallyLikely) {
    // Each of the four D/Dbar pairs carries a quarter of the success weight.
    const auto e = fuse_exact(4, 3, GateKind::FGF);
    for (const auto& b : e.branches) {
        if (b.cls == BranchClass::Success) EXPECT_EQ(b.probability, e.success / 4);
    }
}

TEST(ExactFusion, DomainErrors) {
    EXPECT_THROW(fuse_exact(1, 2, GateKind::FG), std::invalid_argument);
    EXPECT_THROW(fuse_exact(2, kMaxFusionInput + 1, GateKind::FG), std::invalid_argument);
}

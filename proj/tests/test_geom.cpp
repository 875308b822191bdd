#include "ewd/geom.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ewd/sampling.hpp"

namespace ewd {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

bool same_point(Vec2 a, Vec2 b, double tol = 1e-9) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

// Corner sets compared as sets (any cyclic order / orientation).
bool same_corner_set(const Quad& a, const Quad& b, double tol = 1e-9) {
    std::array<bool, 4> used{};
    for (const Vec2& p : a.corners) {
        bool found = false;
        for (int j = 0; j < 4; ++j) {
            if (!used[j] && same_point(p, b.corners[j], tol)) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

TEST(ToCorners, AxisAlignedUnitCase) {
    const Quad q = to_corners(OBox5{0, 0, 2, 2, 0});
    EXPECT_TRUE(same_point(q.corners[0], {-1, -1}));
    EXPECT_TRUE(same_point(q.corners[1], {1, -1}));
    EXPECT_TRUE(same_point(q.corners[2], {1, 1}));
    EXPECT_TRUE(same_point(q.corners[3], {-1, 1}));
}

TEST(ToCorners, CentroidPreserved) {
    const Quad q = to_corners(OBox5{5, 5, 2, 1, 0});
    Vec2 c{0, 0};
    for (const Vec2& p : q.corners) c = c + p;
    c = 0.25 * c;
    EXPECT_NEAR(c.x, 5.0, 1e-12);
    EXPECT_NEAR(c.y, 5.0, 1e-12);
}

TEST(ToCorners, NinetyDegreeEquivalence) {
    const Quad a = to_corners(OBox5{0, 0, 2, 1, kPi / 2});
    const Quad b = to_corners(OBox5{0, 0, 1, 2, 0});
    EXPECT_TRUE(same_corner_set(a, b, 1e-12));
}

TEST(ToEdges, CentersAndLengths) {
    const EdgeSeq e = to_edges(OBox5{0, 0, 4, 2, 0});
    ASSERT_EQ(e.size(), 4u);
    EXPECT_TRUE(same_point(e[0].center(), {0, -1}, 1e-12));
    EXPECT_TRUE(same_point(e[1].center(), {2, 0}, 1e-12));
    EXPECT_TRUE(same_point(e[2].center(), {0, 1}, 1e-12));
    EXPECT_TRUE(same_point(e[3].center(), {-2, 0}, 1e-12));
    EXPECT_NEAR(e[0].length(), 4.0, 1e-12);
    EXPECT_NEAR(e[1].length(), 2.0, 1e-12);
    EXPECT_NEAR(e[2].length(), 4.0, 1e-12);
    EXPECT_NEAR(e[3].length(), 2.0, 1e-12);
}

TEST(ToEdges, MidpointCentroidIsCenter) {
    auto rng = make_rng(11);
    const BoxSampler sample;
    for (int t = 0; t < 200; ++t) {
        const OBox5 b = sample(rng);
        const EdgeSeq e = to_edges(b);
        Vec2 c{0, 0};
        for (const DirectedEdge& ed : e) c = c + ed.center();
        c = 0.25 * c;
        EXPECT_NEAR(c.x, b.cx, 1e-9);
        EXPECT_NEAR(c.y, b.cy, 1e-9);
    }
}

TEST(ToEdges, RotatedSquareSideLengths) {
    const EdgeSeq e = to_edges(OBox5{0, 0, 2, 2, kPi / 4});
    for (const DirectedEdge& ed : e) EXPECT_NEAR(ed.length(), 2.0, 1e-12);
}

TEST(ToEdges, ClosedAndClockwise) {
    auto rng = make_rng(12);
    const BoxSampler sample;
    for (int t = 0; t < 200; ++t) {
        const OBox5 b = sample(rng);
        const EdgeSeq e = to_edges(b);
        for (int i = 0; i < 4; ++i) {
            EXPECT_TRUE(same_point(e[i].p1, e[(i + 1) % 4].p0, 0.0));
        }
        const Quad q = to_corners(b);
        EXPECT_GT(polygon_area(q.corners.data(), 4), 0.0);  // clockwise in y-down
    }
}

TEST(ShiftParameterization, ShiftsEdgeSequence) {
    auto rng = make_rng(13);
    const BoxSampler sample;
    for (int t = 0; t < 50; ++t) {
        const OBox5 b = sample(rng);
        const EdgeSeq base = to_edges(b);
        for (int k = 0; k < 4; ++k) {
            const EdgeSeq shifted = to_edges(shift_parameterization(b, k));
            for (int i = 0; i < 4; ++i) {
                EXPECT_TRUE(same_point(shifted[i].p0, base[(i + k) % 4].p0, 1e-9));
                EXPECT_TRUE(same_point(shifted[i].p1, base[(i + k) % 4].p1, 1e-9));
            }
        }
    }
}

TEST(Canonicalize, MinExample) {
    const OBox5 r = canonicalize(OBox5{0, 0, 2, 1, 50 * kDeg}, BoxDef::MIN);
    EXPECT_NEAR(r.w, 1.0, 1e-12);
    EXPECT_NEAR(r.h, 2.0, 1e-12);
    EXPECT_NEAR(r.theta, -40 * kDeg, 1e-12);
}

TEST(Canonicalize, LeAlreadyCanonical) {
    const OBox5 r = canonicalize(OBox5{0, 0, 2, 1, 0}, BoxDef::LE);
    EXPECT_NEAR(r.w, 2.0, 1e-12);
    EXPECT_NEAR(r.h, 1.0, 1e-12);
    EXPECT_NEAR(r.theta, 0.0, 1e-12);
}

TEST(Canonicalize, LeSwapAndWrap) {
    const OBox5 r = canonicalize(OBox5{0, 0, 1, 2, 0}, BoxDef::LE);
    EXPECT_NEAR(r.w, 2.0, 1e-12);
    EXPECT_NEAR(r.h, 1.0, 1e-12);
    EXPECT_NEAR(r.theta, -kPi / 2, 1e-12);  // +90 deg wrapped into [-90, 90)
}

TEST(Canonicalize, LeSquareTieKeepsOrientation) {
    const OBox5 r = canonicalize(OBox5{0, 0, 1, 1, 0.3}, BoxDef::LE);
    EXPECT_NEAR(r.theta, 0.3, 1e-12);
}

TEST(Canonicalize, PreservesCornerSetInRange) {
    auto rng = make_rng(14);
    const BoxSampler sample;
    for (int t = 0; t < 1000; ++t) {
        const OBox5 b = sample(rng);
        const Quad base = to_corners(b);
        for (BoxDef def : {BoxDef::OC, BoxDef::LE, BoxDef::MIN}) {
            const OBox5 c = canonicalize(b, def);
            EXPECT_TRUE(same_corner_set(to_corners(c), base, 1e-9))
                << "def=" << static_cast<int>(def);
            switch (def) {
                case BoxDef::OC:
                    EXPECT_GE(c.theta, -kPi / 2);
                    EXPECT_LT(c.theta, 0.0);
                    break;
                case BoxDef::LE:
                    EXPECT_GE(c.w, c.h);
                    EXPECT_GE(c.theta, -kPi / 2);
                    EXPECT_LT(c.theta, kPi / 2);
                    break;
                case BoxDef::MIN:
                    EXPECT_GE(c.theta, -kPi / 4);
                    EXPECT_LT(c.theta, kPi / 4);
                    break;
            }
        }
    }
}

TEST(RotatedIou, IdenticalQuads) {
    const Quad q = to_corners(OBox5{1, 2, 3, 1.5, 0.7});
    EXPECT_DOUBLE_EQ(rotated_iou(q, q), 1.0);
}

TEST(RotatedIou, DisjointQuads) {
    const Quad a = to_corners(OBox5{0, 0, 1, 1, 0});
    const Quad b = to_corners(OBox5{10, 10, 1, 1, 0.5});
    EXPECT_DOUBLE_EQ(rotated_iou(a, b), 0.0);
}

TEST(RotatedIou, AxisAlignedOverlapOneThird) {
    const Quad a = to_corners(OBox5{0, 0, 2, 2, 0});
    const Quad b = to_corners(OBox5{1, 0, 2, 2, 0});
    EXPECT_NEAR(rotated_iou(a, b), 1.0 / 3.0, 1e-12);
}

TEST(RotatedIou, SquareVsRotated45) {
    // The octagon intersection of a unit square with its 45 deg rotation
    // has area 2(sqrt(2)-1); both squares have area 1, so the union is
    // 2 - 2(sqrt(2)-1) and the ratio collapses to sqrt(2)/2.
    const Quad a = to_corners(OBox5{0, 0, 1, 1, 0});
    const Quad b = to_corners(OBox5{0, 0, 1, 1, kPi / 4});
    const double inter = 2.0 * (std::sqrt(2.0) - 1.0);
    const double expected = inter / (2.0 - inter);
    EXPECT_NEAR(rotated_iou(a, b), expected, 1e-9);
    EXPECT_NEAR(expected, std::sqrt(2.0) / 2.0, 1e-12);
    // Recover the intersection area from the ratio: I = 2*iou/(1+iou).
    const double iou = rotated_iou(a, b);
    EXPECT_NEAR(2.0 * iou / (1.0 + iou), inter, 1e-9);
}

TEST(RotatedIou, SymmetricAndBounded) {
    auto rng = make_rng(15);
    BoxSampler sample;
    sample.center_lo = -2;
    sample.center_hi = 2;
    sample.size_lo = 0.5;
    sample.size_hi = 4;
    for (int t = 0; t < 500; ++t) {
        const Quad a = to_corners(sample(rng));
        const Quad b = to_corners(sample(rng));
        const double ab = rotated_iou(a, b);
        const double ba = rotated_iou(b, a);
        EXPECT_NEAR(ab, ba, 1e-12);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_DOUBLE_EQ(rotated_iou(a, a), 1.0);
    }
}

TEST(RotatedIou, DegenerateQuadGivesZero) {
    Quad flat;
    flat.corners = {Vec2{0, 0}, Vec2{1, 0}, Vec2{2, 0}, Vec2{3, 0}};
    const Quad q = to_corners(OBox5{0, 0, 2, 2, 0});
    EXPECT_DOUBLE_EQ(rotated_iou(flat, q), 0.0);
    EXPECT_DOUBLE_EQ(rotated_iou(flat, flat), 0.0);
}

TEST(RotatedIou, MonteCarloAgreement) {
    auto rng = make_rng(16);
    BoxSampler sample;
    sample.center_lo = -2;
    sample.center_hi = 2;
    sample.size_lo = 0.5;
    sample.size_hi = 4;
    for (int t = 0; t < 5; ++t) {
        const Quad a = to_corners(sample(rng));
        const Quad b = to_corners(sample(rng));
        const double exact = rotated_iou(a, b);
        const double mc = rotated_iou_mc(a, b, 1000000, 99 + t);
        EXPECT_NEAR(exact, mc, 0.01);
    }
}

TEST(WrapAngle, BasicRanges) {
    EXPECT_NEAR(wrap_angle(3 * kPi / 2, -kPi, 2 * kPi), -kPi / 2, 1e-12);
    EXPECT_NEAR(wrap_angle(-kPi, -kPi, 2 * kPi), -kPi, 1e-12);
    EXPECT_NEAR(wrap_angle(kPi / 2, -kPi / 2, kPi), -kPi / 2, 1e-12);
}

}  // namespace
}  // namespace ewd

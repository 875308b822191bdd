#include "ewd/gaussian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ewd/oracle.hpp"
#include "ewd/sampling.hpp"

namespace ewd {
namespace {

constexpr double kPi = 3.14159265358979323846;

Mat2 random_psd(std::mt19937_64& rng, double rank1_fraction = 0.3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double angle = u(rng) * kPi;
    const double c = std::cos(angle), s = std::sin(angle);
    const double l1 = 0.1 + 10.0 * u01(rng);
    double l2;
    const double mode = u01(rng);
    if (mode < rank1_fraction) {
        l2 = 0.0;  // exact rank 1
    } else if (mode < rank1_fraction + 0.2) {
        // Near rank 1. Ratios are kept above 1e-5: far below that the small
        // eigenvalue of the product matrix drowns in subtraction noise and
        // its square root carries an irreducible ~1e-8 floor no evaluation
        // path can agree on at 1e-9. Exact zeros are handled by the shared
        // numerical-rank clamp instead.
        l2 = l1 * std::pow(10.0, -5.0 * u01(rng));
    } else {
        l2 = 0.1 + 10.0 * u01(rng);
    }
    Mat2 m;
    m.m00 = c * c * l1 + s * s * l2;
    m.m01 = c * s * (l1 - l2);
    m.m10 = m.m01;
    m.m11 = s * s * l1 + c * c * l2;
    return m;
}

TEST(BoxGaussian, SquareIsIsotropicForAnyAngle) {
    for (double t = -3.0; t <= 3.0; t += 0.1) {
        const Gauss2 g = box_gaussian(OBox5{0, 0, 2, 2, t});
        EXPECT_NEAR(g.sigma.m00, 1.0, 1e-12);
        EXPECT_NEAR(g.sigma.m11, 1.0, 1e-12);
        EXPECT_NEAR(g.sigma.m01, 0.0, 1e-12);
        EXPECT_NEAR(g.sigma.m10, 0.0, 1e-12);
    }
}

TEST(BoxGaussian, AxisAlignedDiagonal) {
    const Gauss2 g = box_gaussian(OBox5{0, 0, 4, 2, 0});
    EXPECT_NEAR(g.sigma.m00, 4.0, 1e-12);
    EXPECT_NEAR(g.sigma.m11, 1.0, 1e-12);
    EXPECT_NEAR(g.sigma.m01, 0.0, 1e-12);
}

TEST(BoxGaussian, MeanIsCenter) {
    const Gauss2 g = box_gaussian(OBox5{3, -1, 5, 2, 0.8});
    EXPECT_DOUBLE_EQ(g.mu.x, 3.0);
    EXPECT_DOUBLE_EQ(g.mu.y, -1.0);
}

TEST(EdgeGaussian, HorizontalUnitEdge) {
    const Gauss2 g = edge_gaussian(DirectedEdge{{-1, 0}, {1, 0}});
    EXPECT_NEAR(g.mu.x, 0.0, 1e-15);
    EXPECT_NEAR(g.sigma.m00, 1.0, 1e-12);
    EXPECT_NEAR(g.sigma.m11, 0.0, 1e-12);
    EXPECT_NEAR(g.sigma.m01, 0.0, 1e-12);
}

TEST(EdgeGaussian, VerticalEdgeIsRotated) {
    const Gauss2 g = edge_gaussian(DirectedEdge{{0, -1}, {0, 1}});
    EXPECT_NEAR(g.sigma.m00, 0.0, 1e-12);
    EXPECT_NEAR(g.sigma.m11, 1.0, 1e-12);
}

TEST(EdgeGaussian, TraceInvariant) {
    auto rng = make_rng(21);
    const EdgeSampler sample;
    for (int t = 0; t < 200; ++t) {
        const DirectedEdge e = sample(rng);
        const Gauss2 g = edge_gaussian(e);
        const double half = 0.5 * e.length();
        EXPECT_NEAR(g.sigma.trace(), half * half, 1e-9 * (1.0 + half * half));
    }
}

TEST(EdgeGaussian, ZeroLengthEdgeIsPointMass) {
    const Gauss2 g = edge_gaussian(DirectedEdge{{2, 3}, {2, 3}});
    EXPECT_DOUBLE_EQ(g.sigma.trace(), 0.0);
}

TEST(Sqrtm, IdentityAndDiagonal) {
    const Mat2 i = sqrtm_2x2(Mat2::identity());
    EXPECT_NEAR(i.m00, 1.0, 1e-15);
    EXPECT_NEAR(i.m11, 1.0, 1e-15);
    const Mat2 d = sqrtm_2x2(Mat2::diag(4, 9));
    EXPECT_NEAR(d.m00, 2.0, 1e-12);
    EXPECT_NEAR(d.m11, 3.0, 1e-12);
    EXPECT_NEAR(d.m01, 0.0, 1e-15);
}

TEST(Sqrtm, SquaresBackToInput) {
    auto rng = make_rng(22);
    for (int t = 0; t < 2000; ++t) {
        const Mat2 m = random_psd(rng);
        const Mat2 r = sqrtm_2x2(m);
        const Mat2 rr = r * r;
        const double scale = 1.0 + m.trace();
        EXPECT_NEAR(rr.m00, m.m00, 1e-10 * scale);
        EXPECT_NEAR(rr.m01, m.m01, 1e-10 * scale);
        EXPECT_NEAR(rr.m11, m.m11, 1e-10 * scale);
    }
}

TEST(Sqrtm, RejectsNegativeEigenvalue) {
    EXPECT_THROW(sqrtm_2x2(Mat2::diag(-1.0, 2.0)), std::invalid_argument);
    EXPECT_THROW(sqrtm_2x2(Mat2{1, 0.5, 0.2, 1}), std::invalid_argument);  // asymmetric
}

TEST(W2, IdenticalGaussiansAreZero) {
    const Gauss2 g = box_gaussian(OBox5{1, 2, 3, 1, 0.4});
    EXPECT_NEAR(w2_gaussian(g, g), 0.0, 1e-12);
}

TEST(W2, PointMasses) {
    const Gauss2 a{{0, 0}, Mat2{}};
    const Gauss2 b{{3, 4}, Mat2{}};
    EXPECT_NEAR(w2_gaussian(a, b), 25.0, 1e-12);
}

TEST(W2, ParallelEdgesOffsetByThree) {
    const Gauss2 a = edge_gaussian(DirectedEdge{{-1, 0}, {1, 0}});
    const Gauss2 b = edge_gaussian(DirectedEdge{{-1, 3}, {1, 3}});
    EXPECT_NEAR(w2_gaussian(a, b), 9.0, 1e-12);
}

TEST(W2, PerpendicularEdgesTraceTerm) {
    const Gauss2 a = edge_gaussian(DirectedEdge{{-1, 0}, {1, 0}});
    const Gauss2 b = edge_gaussian(DirectedEdge{{0, -1}, {0, 1}});
    EXPECT_NEAR(w2_gaussian(a, b), 2.0, 1e-12);
}

TEST(W2, SymmetricNonnegativeZeroIffEqual) {
    auto rng = make_rng(23);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 2000; ++t) {
        const Gauss2 a{{u(rng), u(rng)}, random_psd(rng)};
        const Gauss2 b{{u(rng), u(rng)}, random_psd(rng)};
        const double ab = w2_gaussian(a, b);
        const double ba = w2_gaussian(b, a);
        EXPECT_GE(ab, 0.0);
        EXPECT_NEAR(ab, ba, 1e-9 * (1.0 + ab));
        EXPECT_NEAR(w2_gaussian(a, a), 0.0, 1e-10);
    }
}

TEST(W2, MatchesEigendecompositionOracle) {
    auto rng = make_rng(24);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 10000; ++t) {
        const Gauss2 a{{u(rng), u(rng)}, random_psd(rng)};
        const Gauss2 b{{u(rng), u(rng)}, random_psd(rng)};
        const double closed = w2_gaussian(a, b);
        const double numeric = w2_gaussian_numeric(a, b);
        EXPECT_NEAR(closed, numeric, 1e-9 * std::max({closed, numeric, 1e-3}))
            << "at trial " << t;
    }
}

TEST(W2, RankOneTraceIdentities) {
    // Parallel rank-1 covariances: trace term (l1/2 - l2/2)^2; orthogonal:
    // (l1/2)^2 + (l2/2)^2.
    const Gauss2 a = edge_gaussian(DirectedEdge{{0, 0}, {4, 0}});
    const Gauss2 b = edge_gaussian(DirectedEdge{{0, 0}, {6, 0}});
    EXPECT_NEAR(w2_gaussian(Gauss2{{0, 0}, a.sigma}, Gauss2{{0, 0}, b.sigma}),
                (2.0 - 3.0) * (2.0 - 3.0), 1e-12);
    const Gauss2 c = edge_gaussian(DirectedEdge{{0, 0}, {0, 6}});
    EXPECT_NEAR(w2_gaussian(Gauss2{{0, 0}, a.sigma}, Gauss2{{0, 0}, c.sigma}), 4.0 + 9.0, 1e-12);
}

TEST(W2, RejectsIndefiniteInput) {
    Gauss2 bad{{0, 0}, Mat2::diag(1.0, -1.0)};
    Gauss2 ok{{0, 0}, Mat2::identity()};
    EXPECT_THROW(w2_gaussian(bad, ok), std::invalid_argument);
}

TEST(Kld, IdenticalFullRankIsZero) {
    const Gauss2 g = box_gaussian(OBox5{0, 0, 3, 2, 0.3});
    EXPECT_NEAR(kld_gaussian(g, g), 0.0, 1e-12);
}

TEST(Kld, SquareBoxesDifferingOnlyInAngle) {
    const Gauss2 a = box_gaussian(OBox5{0, 0, 2, 2, 0.1});
    const Gauss2 b = box_gaussian(OBox5{0, 0, 2, 2, 1.2});
    EXPECT_NEAR(kld_gaussian(a, b), 0.0, 1e-12);
}

TEST(Kld, UnitCovarianceMeanShift) {
    const Gauss2 a{{0, 0}, Mat2::identity()};
    const Gauss2 b{{1, 0}, Mat2::identity()};
    EXPECT_NEAR(kld_gaussian(a, b), 0.5, 1e-12);
}

TEST(Kld, SingularReferenceThrows) {
    const Gauss2 full{{0, 0}, Mat2::identity()};
    const Gauss2 singular = edge_gaussian(DirectedEdge{{-1, 0}, {1, 0}});
    EXPECT_THROW(kld_gaussian(full, singular), std::invalid_argument);
    EXPECT_TRUE(std::isinf(kld_gaussian(singular, full)));
}

}  // namespace
}  // namespace ewd

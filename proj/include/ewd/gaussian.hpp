#pragma once

#include "ewd/geom.hpp"

// 2-D Gaussian algebra: box/edge Gaussian representations, closed-form
// Wasserstein-2 distance, KL divergence, exact 2x2 PSD matrix functions.

namespace ewd {

struct Mat2 {
    // Row-major: [m00 m01; m10 m11].
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }

    double trace() const { return m00 + m11; }
    double det() const { return m00 * m11 - m01 * m10; }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}
inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}
inline Mat2 operator*(double s, const Mat2& a) {
    return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
}
inline Vec2 operator*(const Mat2& a, Vec2 v) {
    return {a.m00 * v.x + a.m01 * v.y, a.m10 * v.x + a.m11 * v.y};
}

/// 2-D Gaussian; sigma symmetric PSD, possibly rank-deficient (edge
/// Gaussians are rank 1, point masses rank 0).
struct Gauss2 {
    Vec2 mu;
    Mat2 sigma;
};

/// Throws std::invalid_argument unless m is symmetric PSD within tolerance.
void require_psd(const Mat2& m, double tol = 1e-9);

/// Principal square root of a symmetric PSD 2x2 matrix via the closed-form
/// trace/determinant identity. Errors on eigenvalues below -1e-9.
Mat2 sqrtm_2x2(const Mat2& m);

/// Full-box Gaussian used by the GWD/KLD baselines:
/// sigma^(1/2) = R diag(w/2, h/2) R^T.
Gauss2 box_gaussian(const OBox5& b);

/// Edge Gaussian: mean at the edge center, sigma^(1/2) = R diag(len/2, 0) R^T
/// (rank 1; a zero-length edge degenerates to a point mass).
Gauss2 edge_gaussian(const DirectedEdge& e);

/// Squared Wasserstein-2 distance between Gaussians:
/// ||mu1-mu2||^2 + Tr(S1 + S2 - 2 (S1^(1/2) S2 S1^(1/2))^(1/2)).
/// Well-defined for rank-deficient covariances; result clamped at -1e-12.
double w2_gaussian(const Gauss2& g1, const Gauss2& g2);

/// KL(N1 || N2) for full-rank sigma2; throws on singular sigma2, returns
/// +inf for singular sigma1.
double kld_gaussian(const Gauss2& g1, const Gauss2& g2);

}  // namespace ewd

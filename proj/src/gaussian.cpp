#include "ewd/gaussian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ewd {

namespace {

Mat2 rotation(double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    return {c, s, -s, c};
}

Mat2 transpose(const Mat2& m) { return {m.m00, m.m10, m.m01, m.m11}; }

double min_eigenvalue(const Mat2& m) {
    const double t = m.trace();
    const double d = m.det();
    const double disc = std::max(0.25 * t * t - d, 0.0);
    return 0.5 * t - std::sqrt(disc);
}

}  // namespace

void require_psd(const Mat2& m, double tol) {
    if (std::abs(m.m01 - m.m10) > tol) {
        throw std::invalid_argument("covariance not symmetric");
    }
    if (min_eigenvalue(m) < -tol) {
        throw std::invalid_argument("covariance not positive semidefinite");
    }
}

Mat2 sqrtm_2x2(const Mat2& m) {
    if (std::abs(m.m01 - m.m10) > 1e-9) {
        throw std::invalid_argument("sqrtm_2x2: matrix not symmetric");
    }
    if (min_eigenvalue(m) < -1e-9) {
        throw std::invalid_argument("sqrtm_2x2: negative eigenvalue");
    }
    const double t = m.trace();
    double d = m.det();
    if (d < 0.0) d = 0.0;  // floating-point dust on singular inputs
    const double s = std::sqrt(d);
    const double denom2 = t + 2.0 * s;
    if (denom2 <= 0.0) return Mat2{};  // zero matrix
    const double denom = std::sqrt(denom2);
    Mat2 r = m;
    r.m00 += s;
    r.m11 += s;
    r = (1.0 / denom) * r;
    // Symmetrize away rounding in the off-diagonal pair.
    const double off = 0.5 * (r.m01 + r.m10);
    r.m01 = off;
    r.m10 = off;
    return r;
}

Gauss2 box_gaussian(const OBox5& b) {
    // wvec direction is (cos t, -sin t) in y-down coordinates, so the
    // eigenvector matrix has columns (cos t, -sin t) and (sin t, cos t).
    const Mat2 r = rotation(b.theta);
    const Mat2 half = r * Mat2::diag(0.5 * b.w, 0.5 * b.h) * transpose(r);
    return Gauss2{{b.cx, b.cy}, half * half};
}

Gauss2 edge_gaussian(const DirectedEdge& e) {
    const double len = e.length();
    Gauss2 g;
    g.mu = e.center();
    if (len <= 0.0) {
        g.sigma = Mat2{};
        return g;
    }
    const Vec2 u = (1.0 / len) * e.vec();
    const double s2 = 0.25 * len * len;
    g.sigma = {s2 * u.x * u.x, s2 * u.x * u.y, s2 * u.x * u.y, s2 * u.y * u.y};
    return g;
}

double w2_gaussian(const Gauss2& g1, const Gauss2& g2) {
    require_psd(g1.sigma);
    require_psd(g2.sigma);
    // Tr((S1^(1/2) S2 S1^(1/2))^(1/2)) via the exact 2x2 identity
    // Tr(sqrt(M)) = sqrt(Tr M + 2 sqrt(det M)) with Tr M = Tr(S1 S2) and
    // det M = det(S1) det(S2). Factoring the determinant keeps singular
    // covariances (edge Gaussians) away from the cancellation cliff.
    const Mat2& s1 = g1.sigma;
    const Mat2& s2 = g2.sigma;
    const double tr_cross = std::max(
        s1.m00 * s2.m00 + s1.m01 * s2.m10 + s1.m10 * s2.m01 + s1.m11 * s2.m11, 0.0);
    // Numerical-rank rule shared with the eigendecomposition oracle:
    // determinants below 1e-12 of trace^2 are cancellation noise on
    // (near-)singular covariances, and the outer sqrt would amplify them.
    auto clamped_det = [](const Mat2& m) {
        const double d = m.det();
        const double t = m.trace();
        return (d < 1e-12 * t * t) ? 0.0 : d;
    };
    const double det1 = clamped_det(s1);
    const double det2 = clamped_det(s2);
    const double root = std::sqrt(tr_cross + 2.0 * std::sqrt(det1 * det2));
    const double tr = s1.trace() + s2.trace() - 2.0 * root;
    double w = norm2(g1.mu - g2.mu) + tr;
    if (w < -1e-12) {
        throw std::domain_error("w2_gaussian: negative distance beyond tolerance");
    }
    return std::max(w, 0.0);
}

double kld_gaussian(const Gauss2& g1, const Gauss2& g2) {
    require_psd(g1.sigma);
    require_psd(g2.sigma);
    const double det2 = g2.sigma.det();
    if (det2 <= 1e-12 * std::max(1.0, g2.sigma.trace() * g2.sigma.trace())) {
        throw std::invalid_argument("kld_gaussian: reference covariance is singular");
    }
    const double det1 = g1.sigma.det();
    if (det1 <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const Mat2 inv2{g2.sigma.m11 / det2, -g2.sigma.m01 / det2,
                    -g2.sigma.m10 / det2, g2.sigma.m00 / det2};
    const Vec2 d = g2.mu - g1.mu;
    const double maha = dot(d, inv2 * d);
    const double tr = (inv2 * g1.sigma).trace();
    const double kl = 0.5 * (tr + maha - 2.0 + std::log(det2 / det1));
    return std::max(kl, 0.0);
}

}  // namespace ewd

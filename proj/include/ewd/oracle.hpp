#pragma once

#include <functional>
#include <vector>

#include "ewd/gaussian.hpp"
#include "ewd/geom.hpp"

// Brute-force evaluators, kept independent of the closed forms they verify:
// eigendecomposition Gaussian W2, line-integral per-edge distance, and exact
// discrete optimal transport on sampled edge points.

namespace ewd {

/// Weighted atoms; weights must be nonnegative and sum to 1 within 1e-12.
struct PointCloud {
    std::vector<Vec2> points;
    std::vector<double> weights;
};

/// Uniform sampling of an edge at the midpoints of `atoms` equal
/// subintervals, weight 1/atoms each.
PointCloud uniform_edge_cloud(const DirectedEdge& e, int atoms);

/// Eigenvalues (ascending) and eigenvectors of a symmetric 2x2 matrix.
void sym_eigen_2x2(const Mat2& m, double eval[2], Vec2 evec[2]);

/// Same quantity as w2_gaussian but with every matrix square root taken
/// through an explicit eigendecomposition.
double w2_gaussian_numeric(const Gauss2& g1, const Gauss2& g2);

enum class QuadratureRule { Simpson, Trapezoid };

/// Density on [-1, 1]; must be symmetric about 0 and integrate to 1.
/// `variance` is the second moment, used by closed-form comparisons.
struct EdgeDensity {
    std::function<double(double)> pdf;
    double variance = 1.0 / 3.0;
};

EdgeDensity uniform_edge_density();

/// Quadrature of the matched-pair transport cost
///   integral p(x) ||dc + (x/2) dv||^2 dx  over [-1, 1].
/// Simpson is exact for the degree-2 integrand at n = 3. Throws on an
/// asymmetric density (nonzero first moment under the same quadrature).
double edwd_edge_integral(const DirectedEdge& e1, const DirectedEdge& e2,
                          const EdgeDensity& density, int n,
                          QuadratureRule rule = QuadratureRule::Simpson);

/// Exact optimal transport cost with squared-Euclidean ground cost.
/// Equal-size uniform clouds use the Hungarian assignment; the general case
/// runs a transportation simplex and is limited to 64 atoms per side.
double discrete_ot(const PointCloud& p, const PointCloud& q);

struct OracleMatch {
    double value = 0.0;
    int match_k = 0;
};

/// Enumerates the four cyclic matchings, scoring each as the sum of
/// w2_gaussian_numeric over matched edge Gaussians.
OracleMatch egwd_matching_oracle(const OBox5& a, const OBox5& b);

/// Whole-box line-integral oracle: per matching, sums edwd_edge_integral
/// over matched edges and returns the minimum. Comparable to the EDWD
/// closed form with Constant(density.variance) slot variances.
double edwd_box_integral_oracle(const OBox5& pred, const OBox5& target,
                                const EdgeDensity& density, int n,
                                QuadratureRule rule = QuadratureRule::Simpson);

}  // namespace ewd

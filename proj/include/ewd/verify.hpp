#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ewd/loss.hpp"

// Seeded oracle-equivalence drivers behind the `verify` and `gradcheck`
// commands; the acceptance suite runs the same code.

namespace ewd {

struct DeviationReport {
    long long checked = 0;
    double max_dev = 0.0;
    bool ok = true;
    std::string worst;  // reproduction info for the worst case
};

/// Closed-form EGWD vs the per-edge Gaussian matching oracle.
/// Tolerance: 1e-9 relative with a 1e-12 absolute floor.
DeviationReport verify_egwd_oracle(long long trials, std::uint64_t seed);

/// Per-edge closed form vs quadrature: Simpson exact at n = 3 (1e-10),
/// trapezoid within 1e-6 at n = 10^4. Reported deviation is the trapezoid's.
DeviationReport verify_edwd_integral(long long trials, std::uint64_t seed);

/// Unconstrained discrete OT on sampled edge pairs never exceeds the
/// matched-pair closed form (16 midpoint atoms keep the discrete variance
/// below the density's, so the bound is exact up to rounding).
DeviationReport verify_ot_bound(long long trials, std::uint64_t seed);

/// Polygon-clipping IoU vs Monte-Carlo membership at `samples` points,
/// within 0.01.
DeviationReport verify_iou_mc(long long trials, std::uint64_t seed, int samples = 1000000);

struct GradCheckReport {
    long long checked = 0;
    long long skipped_ties = 0;
    double max_rel_err = 0.0;
    bool ok = true;
    std::string worst;
};

/// Analytic gradients vs central finite differences (step h) over random
/// (pred, target, cfg) triples cycling posts {identity, sqrt, log1p}, all
/// normalization schemes, and EDWD variance modes. Draws within
/// `tie_gap_tol` of a matching switch are skipped.
GradCheckReport run_gradcheck(const std::vector<LossVariant>& variants, long long trials,
                              std::uint64_t seed, double rel_tol, double abs_tol = 1e-6,
                              double h = 1e-5, double tie_gap_tol = 1e-3);

std::string describe_box(const OBox5& b);
std::string describe_config(const LossConfig& cfg);

}  // namespace ewd

#pragma once

#include <array>
#include <vector>

#include "ewd/geom.hpp"

// Edge Wasserstein distances (EGWD / EDWD) with the cyclic-matching infimum,
// scale normalization, post functions, and the GWD / KLD / Smooth-L1
// baselines behind one config.

namespace ewd {

enum class LossVariant { Egwd, Edwd, Gwd, Kld, SmoothL1 };

enum class NormKind { None, ImageSize, AnchorSize, TargetWH, TargetMin, TargetMax };

struct NormScheme {
    NormKind kind = NormKind::None;
    double scale = 1.0;  // ImageSize / AnchorSize constant
};

enum class PostKind { Identity, Sqrt, Log1p, InvTau };

/// Monotone transform applied to the squared distance. InvTau computes
/// 1 - 1/(tau + f(W)) where f is the inner post function.
struct PostFn {
    PostKind kind = PostKind::Identity;
    double tau = 1.0;
    PostKind inner = PostKind::Identity;
};

/// EDWD per-slot variance design. AspectRatio reproduces the printed
/// gradient form: sigma_w^2 = w_t/h_t and sigma_h^2 = h_t/w_t. RawLength
/// uses the normalized target side lengths; Constant uses one value.
enum class VarianceMode { AspectRatio, Constant, RawLength };

struct LossConfig {
    LossVariant variant = LossVariant::Edwd;
    NormScheme norm;
    PostFn post;
    VarianceMode variance_mode = VarianceMode::AspectRatio;
    double variance_const = 1.0;
    BoxDef box_def = BoxDef::MIN;       // SmoothL1 only
    double smooth_l1_beta = 1.0 / 9.0;  // SmoothL1 only
    bool kld_reverse = false;           // measure KL(target || pred) instead
};

/// Both boxes rescaled by target-derived (or constant) factors: center
/// offsets by center_scale, widths by w_scale, heights by h_scale. The
/// normalized target is centered at the origin.
struct NormalizedPair {
    OBox5 pred;
    OBox5 target;
    double center_scale = 1.0;
    double w_scale = 1.0;
    double h_scale = 1.0;
};

/// Throws std::invalid_argument on a non-positive scale.
NormalizedPair apply_norm(const OBox5& pred, const OBox5& target, const NormScheme& scheme);

/// Squared norm of the difference of two polar-form vectors:
/// l1^2 + l2^2 - 2 l1 l2 cos(t1 - t2).
double delta_w_sq(double l1, double t1, double l2, double t2);

double apply_post(double w, const PostFn& post);

/// d(post)/dW. At W = 0 the Sqrt branch returns the 0 subgradient and sets
/// *degenerate.
double post_derivative(double w, const PostFn& post, bool* degenerate = nullptr);

struct MatchedDistance {
    double value = 0.0;
    int match_k = 0;  // active cyclic shift; ties resolve to the smallest k
};

struct SlotCoeffs {
    double cw = 1.0;
    double ch = 1.0;
};

/// (1 + sigma^2)/2 per slot; AspectRatio uses the raw target's aspect ratio.
SlotCoeffs edwd_slot_coeffs(const OBox5& raw_target, const NormalizedPair& np,
                            const LossConfig& cfg);

/// The four cyclic-matching evaluations
///   4||do||^2 + cw*||dw||^2 + ch*||dh||^2
/// of a normalized pair, index = shift applied to the target sequence.
std::array<double, 4> matching_values(const NormalizedPair& np, SlotCoeffs cc);

int argmin_matching(const std::array<double, 4>& values);

/// Gap between the best and second-best matching; small gap means the
/// infimum is near a tie.
double matching_gap(const OBox5& pred, const OBox5& target, const LossConfig& cfg);

/// Raw EGWD distance, min over the four matchings (no normalization).
MatchedDistance egwd_obox(const OBox5& pred, const OBox5& target);

/// EDWD distance under cfg's normalization and variance design.
MatchedDistance edwd_obox(const OBox5& pred, const OBox5& target, const LossConfig& cfg);

/// Whole-box Gaussian Wasserstein baseline (no normalization).
double gwd_box(const OBox5& pred, const OBox5& target);

/// Whole-box Gaussian KL baseline, KL(pred || target) unless reverse.
double kld_box(const OBox5& pred, const OBox5& target, bool reverse = false);

/// Elementwise smooth-L1 on definition-encoded parameter tuples, deltas
/// scaled per the normalization scheme.
double smooth_l1_loss(const OBox5& pred, const OBox5& target, BoxDef def,
                      const NormScheme& norm, double beta = 1.0 / 9.0);

/// Per-definition parameter encoding used by the smooth-L1 baseline. OC and
/// MIN wrap theta into the definition range without touching w/h (the 5-p
/// coordinate convention detectors regress); LE enforces w >= h first.
OBox5 smooth_l1_encode(const OBox5& b, BoxDef def);

/// Polygon EDWD: min over cyclic shifts of
///   sum_i ||dc_i||^2 + (sigma2[i]/4)||dv_i||^2.
/// Sequences must have equal length; sigma2 must have one entry per edge.
MatchedDistance edwd_polygon(const EdgeSeq& pred, const EdgeSeq& target,
                             const std::vector<double>& sigma2);

struct LossResult {
    double value = 0.0;     // post(distance)
    double distance = 0.0;  // pre-post (normalized) distance
    int match_k = -1;       // -1 when the variant has no matching
};

/// Dispatcher: apply_norm, then the variant distance, then the post
/// function (Smooth-L1 ignores the post function).
LossResult loss(const OBox5& pred, const OBox5& target, const LossConfig& cfg);

/// Quadrilateral losses (EGWD / EDWD only). Target-derived normalization
/// schemes scale both quads by sqrt of the target area.
LossResult quad_loss(const Quad& pred, const Quad& target, const LossConfig& cfg);

}  // namespace ewd

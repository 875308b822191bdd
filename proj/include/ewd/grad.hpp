#pragma once

#include <functional>

#include "ewd/loss.hpp"

// Analytic gradients of the EWD losses w.r.t. the raw predicted parameters
// (cx, cy, w, h, theta), plus a central finite-difference engine used as
// the verification oracle and as the fallback for baseline losses.

namespace ewd {

struct BoxGrad {
    double d_cx = 0.0;
    double d_cy = 0.0;
    double d_w = 0.0;
    double d_h = 0.0;
    double d_theta = 0.0;
};

double grad_norm(const BoxGrad& g);

struct GradResult {
    BoxGrad grad;                  // gradient of post(distance(norm(...)))
    double loss = 0.0;             // post value
    double distance = 0.0;         // pre-post distance
    int match_k = 0;               // active matching branch
    double dist_grad_dcos = 0.0;   // dW/dcos(dtheta) on the active branch
    bool sqrt_degenerate = false;  // hit the sqrt-at-zero subgradient
};

/// Exact gradient through the argmin matching (fixed-branch envelope);
/// at a tie the smallest-k branch is differentiated. cfg.variant must be
/// Egwd or Edwd.
GradResult edwd_grad(const OBox5& pred, const OBox5& target, const LossConfig& cfg);

/// Central finite differences, step h per parameter (theta in radians).
BoxGrad fd_gradient(const std::function<double(const OBox5&)>& f, const OBox5& at, double h);

}  // namespace ewd

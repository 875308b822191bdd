#include "ewd/grad.hpp"

#include <cmath>
#include <stdexcept>

namespace ewd {

double grad_norm(const BoxGrad& g) {
    return std::sqrt(g.d_cx * g.d_cx + g.d_cy * g.d_cy + g.d_w * g.d_w +
                     g.d_h * g.d_h + g.d_theta * g.d_theta);
}

GradResult edwd_grad(const OBox5& pred, const OBox5& target, const LossConfig& cfg) {
    if (cfg.variant != LossVariant::Egwd && cfg.variant != LossVariant::Edwd) {
        throw std::invalid_argument("edwd_grad: analytic gradients exist for EGWD/EDWD only");
    }
    const NormalizedPair np = apply_norm(pred, target, cfg.norm);
    const SlotCoeffs cc = (cfg.variant == LossVariant::Egwd)
                              ? SlotCoeffs{1.0, 1.0}
                              : edwd_slot_coeffs(target, np, cfg);
    const auto values = matching_values(np, cc);
    const int k = argmin_matching(values);
    const OBox5 st = shift_parameterization(np.target, k);

    const double psi = np.pred.theta - st.theta;
    const double c = std::cos(psi);
    const double s = std::sin(psi);

    GradResult r;
    r.match_k = k;
    r.distance = values[k];

    // W = 4||do~||^2 + cw*dw~^2 + ch*dh~^2 in normalized coordinates; the
    // scales chain back to the raw parameters.
    const double cw = cc.cw, ch = cc.ch;
    const double coupling = cw * np.pred.w * st.w + ch * np.pred.h * st.h;

    BoxGrad dw;  // gradient of the pre-post distance
    dw.d_cx = 8.0 * (np.pred.cx - np.target.cx) / np.center_scale;
    dw.d_cy = 8.0 * (np.pred.cy - np.target.cy) / np.center_scale;
    dw.d_w = 2.0 * cw * (np.pred.w - st.w * c) / np.w_scale;
    dw.d_h = 2.0 * ch * (np.pred.h - st.h * c) / np.h_scale;
    dw.d_theta = 2.0 * coupling * s;
    r.dist_grad_dcos = -2.0 * coupling;

    const double dpost = post_derivative(r.distance, cfg.post, &r.sqrt_degenerate);
    r.grad.d_cx = dpost * dw.d_cx;
    r.grad.d_cy = dpost * dw.d_cy;
    r.grad.d_w = dpost * dw.d_w;
    r.grad.d_h = dpost * dw.d_h;
    r.grad.d_theta = dpost * dw.d_theta;
    r.loss = apply_post(r.distance, cfg.post);
    return r;
}

BoxGrad fd_gradient(const std::function<double(const OBox5&)>& f, const OBox5& at, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
    auto central = [&](auto bump) {
        OBox5 hi = at, lo = at;
        bump(hi, h);
        bump(lo, -h);
        return (f(hi) - f(lo)) / (2.0 * h);
    };
    BoxGrad g;
    g.d_cx = central([](OBox5& b, double d) { b.cx += d; });
    g.d_cy = central([](OBox5& b, double d) { b.cy += d; });
    g.d_w = central([](OBox5& b, double d) { b.w += d; });
    g.d_h = central([](OBox5& b, double d) { b.h += d; });
    g.d_theta = central([](OBox5& b, double d) { b.theta += d; });
    return g;
}

}  // namespace ewd

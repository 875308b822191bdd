#include "ewd/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ewd/gaussian.hpp"

namespace ewd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

double huber(double x, double beta) {
    const double a = std::abs(x);
    if (a < beta) return 0.5 * x * x / beta;
    return a - 0.5 * beta;
}

double post_inner_value(double w, PostKind kind) {
    switch (kind) {
        case PostKind::Identity: return w;
        case PostKind::Sqrt: return std::sqrt(w);
        case PostKind::Log1p: return std::log1p(w);
        case PostKind::InvTau: break;
    }
    throw std::invalid_argument("InvTau cannot nest inside InvTau");
}

double post_inner_derivative(double w, PostKind kind, bool* degenerate) {
    switch (kind) {
        case PostKind::Identity: return 1.0;
        case PostKind::Sqrt:
            if (w <= 0.0) {
                if (degenerate != nullptr) *degenerate = true;
                return 0.0;  // documented subgradient at W = 0
            }
            return 0.5 / std::sqrt(w);
        case PostKind::Log1p: return 1.0 / (1.0 + w);
        case PostKind::InvTau: break;
    }
    throw std::invalid_argument("InvTau cannot nest inside InvTau");
}

}  // namespace

NormalizedPair apply_norm(const OBox5& pred, const OBox5& target, const NormScheme& scheme) {
    double s = 1.0, aw = 1.0, ah = 1.0;
    switch (scheme.kind) {
        case NormKind::None:
            break;
        case NormKind::ImageSize:
        case NormKind::AnchorSize:
            s = aw = ah = scheme.scale;
            break;
        case NormKind::TargetWH:
            aw = target.w;
            ah = target.h;
            s = std::sqrt(target.w * target.h);
            break;
        case NormKind::TargetMin:
            s = aw = ah = std::min(target.w, target.h);
            break;
        case NormKind::TargetMax:
            s = aw = ah = std::max(target.w, target.h);
            break;
    }
    if (!(s > 0.0) || !(aw > 0.0) || !(ah > 0.0)) {
        throw std::invalid_argument("apply_norm: scale must be positive");
    }
    NormalizedPair np;
    np.center_scale = s;
    np.w_scale = aw;
    np.h_scale = ah;
    np.pred = OBox5{(pred.cx - target.cx) / s, (pred.cy - target.cy) / s,
                    pred.w / aw, pred.h / ah, pred.theta};
    np.target = OBox5{0.0, 0.0, target.w / aw, target.h / ah, target.theta};
    return np;
}

double delta_w_sq(double l1, double t1, double l2, double t2) {
    return l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * std::cos(t1 - t2);
}

double apply_post(double w, const PostFn& post) {
    if (post.kind == PostKind::InvTau) {
        if (!(post.tau > 0.0)) throw std::invalid_argument("InvTau requires tau > 0");
        return 1.0 - 1.0 / (post.tau + post_inner_value(w, post.inner));
    }
    return post_inner_value(w, post.kind);
}

double post_derivative(double w, const PostFn& post, bool* degenerate) {
    if (degenerate != nullptr) *degenerate = false;
    if (post.kind == PostKind::InvTau) {
        if (!(post.tau > 0.0)) throw std::invalid_argument("InvTau requires tau > 0");
        const double f = post_inner_value(w, post.inner);
        const double df = post_inner_derivative(w, post.inner, degenerate);
        const double denom = post.tau + f;
        return df / (denom * denom);
    }
    return post_inner_derivative(w, post.kind, degenerate);
}

SlotCoeffs edwd_slot_coeffs(const OBox5& raw_target, const NormalizedPair& np,
                            const LossConfig& cfg) {
    double sw = 1.0, sh = 1.0;
    switch (cfg.variance_mode) {
        case VarianceMode::AspectRatio:
            sw = raw_target.w / raw_target.h;
            sh = raw_target.h / raw_target.w;
            break;
        case VarianceMode::Constant:
            sw = sh = cfg.variance_const;
            break;
        case VarianceMode::RawLength:
            sw = np.target.w;
            sh = np.target.h;
            break;
    }
    return SlotCoeffs{0.5 * (1.0 + sw), 0.5 * (1.0 + sh)};
}

std::array<double, 4> matching_values(const NormalizedPair& np, SlotCoeffs cc) {
    const double dx = np.pred.cx - np.target.cx;
    const double dy = np.pred.cy - np.target.cy;
    const double center = 4.0 * (dx * dx + dy * dy);
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) {
        const OBox5 st = shift_parameterization(np.target, k);
        const double dw = delta_w_sq(np.pred.w, np.pred.theta, st.w, st.theta);
        const double dh = delta_w_sq(np.pred.h, np.pred.theta, st.h, st.theta);
        out[k] = center + cc.cw * dw + cc.ch * dh;
    }
    return out;
}

int argmin_matching(const std::array<double, 4>& values) {
    int best = 0;
    for (int k = 1; k < 4; ++k) {
        if (values[k] < values[best]) best = k;
    }
    return best;
}

double matching_gap(const OBox5& pred, const OBox5& target, const LossConfig& cfg) {
    const NormalizedPair np = apply_norm(pred, target, cfg.norm);
    const SlotCoeffs cc = (cfg.variant == LossVariant::Egwd)
                              ? SlotCoeffs{1.0, 1.0}
                              : edwd_slot_coeffs(target, np, cfg);
    std::array<double, 4> v = matching_values(np, cc);
    std::sort(v.begin(), v.end());
    return v[1] - v[0];
}

MatchedDistance egwd_obox(const OBox5& pred, const OBox5& target) {
    NormalizedPair np = apply_norm(pred, target, NormScheme{});
    const auto values = matching_values(np, SlotCoeffs{1.0, 1.0});
    const int k = argmin_matching(values);
    return MatchedDistance{values[k], k};
}

MatchedDistance edwd_obox(const OBox5& pred, const OBox5& target, const LossConfig& cfg) {
    const NormalizedPair np = apply_norm(pred, target, cfg.norm);
    const auto values = matching_values(np, edwd_slot_coeffs(target, np, cfg));
    const int k = argmin_matching(values);
    return MatchedDistance{values[k], k};
}

double gwd_box(const OBox5& pred, const OBox5& target) {
    return w2_gaussian(box_gaussian(pred), box_gaussian(target));
}

double kld_box(const OBox5& pred, const OBox5& target, bool reverse) {
    const Gauss2 gp = box_gaussian(pred);
    const Gauss2 gt = box_gaussian(target);
    return reverse ? kld_gaussian(gt, gp) : kld_gaussian(gp, gt);
}

OBox5 smooth_l1_encode(const OBox5& b, BoxDef def) {
    OBox5 r = b;
    switch (def) {
        case BoxDef::OC:
            r.theta = wrap_angle(r.theta, -kHalfPi, kHalfPi);
            return r;
        case BoxDef::MIN:
            r.theta = wrap_angle(r.theta, -kPi / 4.0, kHalfPi);
            return r;
        case BoxDef::LE:
            if (r.w < r.h) {
                std::swap(r.w, r.h);
                r.theta += kHalfPi;
            }
            r.theta = wrap_angle(r.theta, -kHalfPi, kPi);
            return r;
    }
    throw std::invalid_argument("unknown box definition");
}

double smooth_l1_loss(const OBox5& pred, const OBox5& target, BoxDef def,
                      const NormScheme& norm, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("smooth_l1_loss: beta must be positive");
    const OBox5 p = smooth_l1_encode(pred, def);
    const OBox5 t = smooth_l1_encode(target, def);
    const NormalizedPair np = apply_norm(p, t, norm);
    const double deltas[5] = {np.pred.cx, np.pred.cy, np.pred.w - np.target.w,
                              np.pred.h - np.target.h, np.pred.theta - np.target.theta};
    double sum = 0.0;
    for (double d : deltas) sum += huber(d, beta);
    return sum;
}

MatchedDistance edwd_polygon(const EdgeSeq& pred, const EdgeSeq& target,
                             const std::vector<double>& sigma2) {
    const size_t n = pred.size();
    if (n == 0 || target.size() != n) {
        throw std::invalid_argument("edwd_polygon: edge sequences must have equal nonzero length");
    }
    if (sigma2.size() != n) {
        throw std::invalid_argument("edwd_polygon: need one variance per edge");
    }
    double best = 0.0;
    int best_k = 0;
    for (size_t k = 0; k < n; ++k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const DirectedEdge& a = pred[i];
            const DirectedEdge& b = target[(i + k) % n];
            total += norm2(a.center() - b.center());
            total += 0.25 * sigma2[i] * norm2(a.vec() - b.vec());
        }
        if (k == 0 || total < best) {
            best = total;
            best_k = static_cast<int>(k);
        }
    }
    return MatchedDistance{best, best_k};
}

LossResult loss(const OBox5& pred, const OBox5& target, const LossConfig& cfg) {
    LossResult r;
    switch (cfg.variant) {
        case LossVariant::Egwd: {
            const NormalizedPair np = apply_norm(pred, target, cfg.norm);
            const auto values = matching_values(np, SlotCoeffs{1.0, 1.0});
            r.match_k = argmin_matching(values);
            r.distance = values[r.match_k];
            r.value = apply_post(r.distance, cfg.post);
            return r;
        }
        case LossVariant::Edwd: {
            const MatchedDistance d = edwd_obox(pred, target, cfg);
            r.match_k = d.match_k;
            r.distance = d.value;
            r.value = apply_post(r.distance, cfg.post);
            return r;
        }
        case LossVariant::Gwd: {
            const NormalizedPair np = apply_norm(pred, target, cfg.norm);
            r.distance = gwd_box(np.pred, np.target);
            r.value = apply_post(r.distance, cfg.post);
            return r;
        }
        case LossVariant::Kld: {
            const NormalizedPair np = apply_norm(pred, target, cfg.norm);
            r.distance = kld_box(np.pred, np.target, cfg.kld_reverse);
            r.value = apply_post(r.distance, cfg.post);
            return r;
        }
        case LossVariant::SmoothL1: {
            r.distance = smooth_l1_loss(pred, target, cfg.box_def, cfg.norm, cfg.smooth_l1_beta);
            r.value = r.distance;  // post/variance fields are not consulted
            return r;
        }
    }
    throw std::invalid_argument("unknown loss variant");
}

namespace {

Vec2 quad_centroid(const Quad& q) {
    Vec2 c{0.0, 0.0};
    for (const Vec2& p : q.corners) c = c + p;
    return 0.25 * c;
}

Quad scale_quad(const Quad& q, Vec2 origin, double inv_s) {
    Quad out;
    for (int i = 0; i < 4; ++i) out.corners[i] = inv_s * (q.corners[i] - origin);
    return out;
}

}  // namespace

LossResult quad_loss(const Quad& pred, const Quad& target, const LossConfig& cfg) {
    if (cfg.variant != LossVariant::Egwd && cfg.variant != LossVariant::Edwd) {
        throw std::invalid_argument("quad_loss: only EGWD/EDWD are defined for quadrilaterals");
    }
    double s = 1.0;
    switch (cfg.norm.kind) {
        case NormKind::None:
            break;
        case NormKind::ImageSize:
        case NormKind::AnchorSize:
            s = cfg.norm.scale;
            break;
        case NormKind::TargetWH:
        case NormKind::TargetMin:
        case NormKind::TargetMax: {
            const double area = std::abs(polygon_area(target.corners.data(), 4));
            s = std::sqrt(area);
            break;
        }
    }
    if (!(s > 0.0)) throw std::invalid_argument("quad_loss: scale must be positive");

    const Vec2 origin = quad_centroid(target);
    const EdgeSeq pe = quad_edges(scale_quad(pred, origin, 1.0 / s));
    const EdgeSeq te = quad_edges(scale_quad(target, origin, 1.0 / s));

    std::vector<double> sigma2(4, 1.0);
    if (cfg.variant == LossVariant::Edwd) {
        switch (cfg.variance_mode) {
            case VarianceMode::Constant:
                sigma2.assign(4, cfg.variance_const);
                break;
            case VarianceMode::AspectRatio:
            case VarianceMode::RawLength:
                for (int i = 0; i < 4; ++i) sigma2[i] = te[i].length();
                break;
        }
    }
    const MatchedDistance d = edwd_polygon(pe, te, sigma2);
    LossResult r;
    r.match_k = d.match_k;
    r.distance = d.value;
    r.value = apply_post(r.distance, cfg.post);
    return r;
}

}  // namespace ewd

#include "ewd/verify.hpp"

#include <algorithm>
#include <cmath>

#include "ewd/grad.hpp"
#include "ewd/io.hpp"
#include "ewd/oracle.hpp"
#include "ewd/sampling.hpp"

namespace ewd {

namespace {

const char* norm_name(NormKind k) {
    switch (k) {
        case NormKind::None: return "none";
        case NormKind::ImageSize: return "image";
        case NormKind::AnchorSize: return "anchor";
        case NormKind::TargetWH: return "target_wh";
        case NormKind::TargetMin: return "target_min";
        case NormKind::TargetMax: return "target_max";
    }
    return "?";
}

const char* post_name(PostKind k) {
    switch (k) {
        case PostKind::Identity: return "identity";
        case PostKind::Sqrt: return "sqrt";
        case PostKind::Log1p: return "log1p";
        case PostKind::InvTau: return "invtau";
    }
    return "?";
}

}  // namespace

std::string describe_box(const OBox5& b) {
    return "(" + format_g12(b.cx) + ", " + format_g12(b.cy) + ", " + format_g12(b.w) + ", " +
           format_g12(b.h) + ", " + format_g12(b.theta) + " rad)";
}

std::string describe_config(const LossConfig& cfg) {
    std::string v;
    switch (cfg.variant) {
        case LossVariant::Egwd: v = "egwd"; break;
        case LossVariant::Edwd: v = "edwd"; break;
        case LossVariant::Gwd: v = "gwd"; break;
        case LossVariant::Kld: v = "kld"; break;
        case LossVariant::SmoothL1: v = "smoothl1"; break;
    }
    std::string var;
    switch (cfg.variance_mode) {
        case VarianceMode::AspectRatio: var = "aspect_ratio"; break;
        case VarianceMode::Constant: var = "constant:" + format_g12(cfg.variance_const); break;
        case VarianceMode::RawLength: var = "raw_length"; break;
    }
    return v + " norm=" + norm_name(cfg.norm.kind) + "(" + format_g12(cfg.norm.scale) +
           ") post=" + post_name(cfg.post.kind) + " variance=" + var;
}

DeviationReport verify_egwd_oracle(long long trials, std::uint64_t seed) {
    DeviationReport rep;
    auto rng = make_rng(seed);
    const BoxSampler sample;
    for (long long t = 0; t < trials; ++t) {
        const OBox5 a = sample(rng);
        const OBox5 b = sample(rng);
        const double closed = egwd_obox(a, b).value;
        const double oracle = egwd_matching_oracle(a, b).value;
        const double dev = std::abs(closed - oracle) /
                           std::max({std::abs(closed), std::abs(oracle), 1e-3});
        ++rep.checked;
        if (dev > rep.max_dev) {
            rep.max_dev = dev;
            rep.worst = "pred=" + describe_box(a) + " target=" + describe_box(b);
        }
        if (std::abs(closed - oracle) > std::max(1e-12, 1e-9 * std::max(std::abs(closed), std::abs(oracle)))) {
            rep.ok = false;
        }
    }
    return rep;
}

DeviationReport verify_edwd_integral(long long trials, std::uint64_t seed) {
    DeviationReport rep;
    auto rng = make_rng(seed);
    const EdgeSampler sample;
    const EdgeDensity density = uniform_edge_density();
    for (long long t = 0; t < trials; ++t) {
        const DirectedEdge e1 = sample(rng);
        const DirectedEdge e2 = sample(rng);
        const double closed = norm2(e1.center() - e2.center()) +
                              0.25 * density.variance * norm2(e1.vec() - e2.vec());
        const double simpson = edwd_edge_integral(e1, e2, density, 3, QuadratureRule::Simpson);
        const double trapez = edwd_edge_integral(e1, e2, density, 10000, QuadratureRule::Trapezoid);
        const double dev_simpson =
            std::abs(simpson - closed) / std::max(1.0, std::abs(closed));
        const double dev_trapez = std::abs(trapez - closed);
        ++rep.checked;
        if (dev_trapez > rep.max_dev) {
            rep.max_dev = dev_trapez;
            rep.worst = "e1=(" + format_g12(e1.p0.x) + "," + format_g12(e1.p0.y) + ")->(" +
                        format_g12(e1.p1.x) + "," + format_g12(e1.p1.y) + ")";
        }
        if (dev_simpson > 1e-10 || dev_trapez > 1e-6) rep.ok = false;
    }
    return rep;
}

DeviationReport verify_ot_bound(long long trials, std::uint64_t seed) {
    DeviationReport rep;
    auto rng = make_rng(seed);
    const EdgeSampler sample;
    const EdgeDensity density = uniform_edge_density();
    for (long long t = 0; t < trials; ++t) {
        const DirectedEdge e1 = sample(rng);
        const DirectedEdge e2 = sample(rng);
        const double ot = discrete_ot(uniform_edge_cloud(e1, 16), uniform_edge_cloud(e2, 16));
        const double closed = norm2(e1.center() - e2.center()) +
                              0.25 * density.variance * norm2(e1.vec() - e2.vec());
        const double excess = ot - closed;  // must stay <= 0 up to rounding
        ++rep.checked;
        if (excess > rep.max_dev) {
            rep.max_dev = excess;
            rep.worst = "ot=" + format_g12(ot) + " closed=" + format_g12(closed);
        }
        if (excess > 1e-9) rep.ok = false;
    }
    return rep;
}

DeviationReport verify_iou_mc(long long trials, std::uint64_t seed, int samples) {
    DeviationReport rep;
    auto rng = make_rng(seed);
    BoxSampler sample;
    sample.center_lo = -2.0;
    sample.center_hi = 2.0;
    sample.size_lo = 0.5;
    sample.size_hi = 4.0;
    for (long long t = 0; t < trials; ++t) {
        const OBox5 a = sample(rng);
        const OBox5 b = sample(rng);
        const Quad qa = to_corners(a);
        const Quad qb = to_corners(b);
        const double exact = rotated_iou(qa, qb);
        const double mc = rotated_iou_mc(qa, qb, samples, seed ^ (0x9e3779b97f4a7c15ULL * (t + 1)));
        const double dev = std::abs(exact - mc);
        ++rep.checked;
        if (dev > rep.max_dev) {
            rep.max_dev = dev;
            rep.worst = "a=" + describe_box(a) + " b=" + describe_box(b);
        }
        if (dev > 0.01) rep.ok = false;
    }
    return rep;
}

GradCheckReport run_gradcheck(const std::vector<LossVariant>& variants, long long trials,
                              std::uint64_t seed, double rel_tol, double abs_tol, double h,
                              double tie_gap_tol) {
    GradCheckReport rep;
    auto rng = make_rng(seed);
    const BoxSampler sample;
    const PostKind posts[] = {PostKind::Identity, PostKind::Sqrt, PostKind::Log1p};
    const NormKind norms[] = {NormKind::None, NormKind::ImageSize, NormKind::AnchorSize,
                              NormKind::TargetWH, NormKind::TargetMin, NormKind::TargetMax};
    const VarianceMode modes[] = {VarianceMode::AspectRatio, VarianceMode::Constant,
                                  VarianceMode::RawLength};

    long long draw = 0;
    for (LossVariant variant : variants) {
        for (long long t = 0; t < trials; ++t, ++draw) {
            const OBox5 pred = sample(rng);
            const OBox5 target = sample(rng);
            LossConfig cfg;
            cfg.variant = variant;
            cfg.post.kind = posts[draw % 3];
            cfg.norm.kind = norms[(draw / 3) % 6];
            cfg.norm.scale = (cfg.norm.kind == NormKind::ImageSize) ? 64.0 : 16.0;
            cfg.variance_mode = modes[(draw / 18) % 3];
            cfg.variance_const = 1.0;

            const double w = loss(pred, target, cfg).distance;
            const double gap = matching_gap(pred, target, cfg);
            if (gap <= tie_gap_tol * std::max(1.0, std::abs(w))) {
                ++rep.skipped_ties;
                continue;
            }

            const GradResult a = edwd_grad(pred, target, cfg);
            const BoxGrad f = fd_gradient(
                [&](const OBox5& b) { return loss(b, target, cfg).value; }, pred, h);

            const double pairs[5][2] = {{a.grad.d_cx, f.d_cx},
                                        {a.grad.d_cy, f.d_cy},
                                        {a.grad.d_w, f.d_w},
                                        {a.grad.d_h, f.d_h},
                                        {a.grad.d_theta, f.d_theta}};
            ++rep.checked;
            for (const auto& p : pairs) {
                const double diff = std::abs(p[0] - p[1]);
                const double mag = std::max(std::abs(p[0]), std::abs(p[1]));
                const double rel = diff / std::max(mag, abs_tol / rel_tol);
                if (rel > rep.max_rel_err) {
                    rep.max_rel_err = rel;
                    rep.worst = "pred=" + describe_box(pred) + " target=" + describe_box(target) +
                                " cfg=" + describe_config(cfg);
                }
                if (diff > abs_tol + rel_tol * mag) rep.ok = false;
            }
        }
    }
    return rep;
}

}  // namespace ewd

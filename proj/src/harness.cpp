#include "ewd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewd {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
constexpr double kSizeFloor = 1e-6;

bool finite_loss(double v) { return std::isfinite(v); }

struct EvalPoint {
    double loss = 0.0;
    BoxGrad grad;
    int match_k = -1;
};

EvalPoint evaluate(const OBox5& pred, const OBox5& target, const LossConfig& cfg, double fd_h) {
    EvalPoint e;
    if (cfg.variant == LossVariant::Egwd || cfg.variant == LossVariant::Edwd) {
        const GradResult g = edwd_grad(pred, target, cfg);
        e.loss = g.loss;
        e.grad = g.grad;
        e.match_k = g.match_k;
        return e;
    }
    const LossResult l = loss(pred, target, cfg);
    e.loss = l.value;
    e.match_k = l.match_k;
    e.grad = fd_gradient([&](const OBox5& b) { return loss(b, target, cfg).value; }, pred, fd_h);
    return e;
}

}  // namespace

const char* fit_status_name(FitStatus s) {
    switch (s) {
        case FitStatus::Converged: return "converged";
        case FitStatus::Stalled: return "stalled";
        case FitStatus::Diverged: return "diverged";
    }
    return "unknown";
}

FitTrace fit(const FitScenario& s) {
    if (!(s.opt.lr > 0.0) || s.opt.max_steps < 1) {
        throw std::invalid_argument("fit: lr must be positive and max_steps >= 1");
    }
    if (!(s.opt.momentum >= 0.0 && s.opt.momentum < 1.0)) {
        throw std::invalid_argument("fit: momentum must lie in [0, 1)");
    }
    const double fd_h = 1e-5;
    const Quad target_quad = to_corners(s.target);

    FitTrace trace;
    trace.steps.reserve(static_cast<size_t>(s.opt.max_steps) + 1);
    OBox5 x = s.init;
    double vx = 0, vy = 0, vw = 0, vh = 0, vt = 0;

    for (int step = 0; step <= s.opt.max_steps; ++step) {
        EvalPoint e;
        try {
            e = evaluate(x, s.target, s.cfg, fd_h);
        } catch (const std::exception&) {
            trace.status = FitStatus::Diverged;
            return trace;
        }
        if (!finite_loss(e.loss)) {
            trace.status = FitStatus::Diverged;
            return trace;
        }
        FitStep rec;
        rec.step = step;
        rec.params = x;
        rec.loss = e.loss;
        rec.grad_norm = grad_norm(e.grad);
        rec.iou = rotated_iou(to_corners(x), target_quad);
        rec.match_k = e.match_k;
        trace.steps.push_back(rec);

        if (s.stop.grad_tol > 0.0 && rec.grad_norm <= s.stop.grad_tol) {
            trace.status = FitStatus::Converged;
            return trace;
        }
        if (s.stop.iou_target > 0.0 && rec.iou >= s.stop.iou_target) {
            trace.status = FitStatus::Converged;
            return trace;
        }
        if (step == s.opt.max_steps) break;

        vx = s.opt.momentum * vx + e.grad.d_cx;
        vy = s.opt.momentum * vy + e.grad.d_cy;
        vw = s.opt.momentum * vw + e.grad.d_w;
        vh = s.opt.momentum * vh + e.grad.d_h;
        vt = s.opt.momentum * vt + e.grad.d_theta;
        x.cx -= s.opt.lr * vx;
        x.cy -= s.opt.lr * vy;
        x.w = std::max(x.w - s.opt.lr * vw, kSizeFloor);
        x.h = std::max(x.h - s.opt.lr * vh, kSizeFloor);
        x.theta -= s.opt.lr * vt;
    }
    trace.status = FitStatus::Stalled;
    return trace;
}

std::vector<CurveRow> sweep_curve(const CurveSpec& spec) {
    for (double r : spec.ratios) {
        if (!(r >= 1.0)) {
            throw std::invalid_argument("sweep_curve: ratios must be >= 1 (use the reciprocal box)");
        }
    }
    if (!(spec.dtheta_step_deg > 0.0) || !(spec.dtheta_hi_deg >= spec.dtheta_lo_deg)) {
        throw std::invalid_argument("sweep_curve: bad dtheta grid");
    }
    if (!(spec.area > 0.0)) throw std::invalid_argument("sweep_curve: area must be positive");

    const int n_steps = static_cast<int>(
        std::floor((spec.dtheta_hi_deg - spec.dtheta_lo_deg) / spec.dtheta_step_deg + 0.5));
    std::vector<CurveRow> rows;
    rows.reserve(spec.ratios.size() * (n_steps + 1) * spec.losses.size());
    for (double r : spec.ratios) {
        const OBox5 base{0.0, 0.0, std::sqrt(spec.area * r), std::sqrt(spec.area / r), 0.0};
        for (int i = 0; i <= n_steps; ++i) {
            const double dtheta_deg = spec.dtheta_lo_deg + i * spec.dtheta_step_deg;
            const OBox5 target = rotated(base, dtheta_deg * kDegToRad);
            for (const NamedLoss& nl : spec.losses) {
                const LossResult res = loss(base, target, nl.cfg);
                rows.push_back(CurveRow{r, dtheta_deg, nl.name, res.value, res.match_k});
            }
        }
    }
    return rows;
}

std::vector<double> detect_turning_points(const std::vector<CurveRow>& series) {
    std::vector<double> out;
    const int n = static_cast<int>(series.size());
    auto kink = [&](int i) {
        if (i <= 0 || i >= n - 1) return 0.0;
        return std::abs(series[i + 1].value - 2.0 * series[i].value + series[i - 1].value);
    };
    for (int i = 0; i + 1 < n; ++i) {
        if (series[i].match_k < 0 || series[i + 1].match_k < 0) continue;
        if (series[i].match_k == series[i + 1].match_k) continue;
        // Report the bracketing grid point sitting closer to the branch
        // crossing; its curvature kink is the larger one.
        out.push_back(kink(i + 1) > kink(i) ? series[i + 1].dtheta_deg : series[i].dtheta_deg);
    }
    return out;
}

std::vector<CompareCell> compare_losses(const std::vector<FitScenario>& scenarios,
                                        const std::vector<NamedLoss>& losses) {
    if (scenarios.empty() || losses.empty()) {
        throw std::invalid_argument("compare_losses: need scenarios and losses");
    }
    std::vector<CompareCell> cells;
    cells.reserve(scenarios.size() * losses.size());
    for (const FitScenario& base : scenarios) {
        for (const NamedLoss& nl : losses) {
            FitScenario s = base;
            s.cfg = nl.cfg;
            CompareCell cell;
            cell.scenario = base.name;
            cell.loss = nl.name;
            const FitTrace trace = fit(s);
            cell.status = trace.status;
            for (const FitStep& st : trace.steps) {
                if (st.iou >= 0.9) {
                    cell.steps_to_iou90 = st.step;
                    break;
                }
            }
            if (!trace.steps.empty()) {
                const FitStep& last = trace.steps.back();
                cell.final_iou = last.iou;
                cell.final_dtheta_deg =
                    (last.params.theta - base.target.theta) / kDegToRad;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

double angle_dist_mod_deg(double a_deg, double period_deg) {
    double r = std::fmod(std::abs(a_deg), period_deg);
    return std::min(r, period_deg - r);
}

}  // namespace ewd

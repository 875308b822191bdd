#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ewd/grad.hpp"
#include "ewd/loss.hpp"

// Toy regression experiments: gradient-descent fits of a predicted box to a
// target under each loss, loss-vs-angle curve sweeps, and matching turning
// point detection.

namespace ewd {

struct Optimizer {
    double lr = 0.01;
    double momentum = 0.9;
    int max_steps = 2000;
};

struct StopRule {
    double grad_tol = 1e-10;  // <= 0 disables
    double iou_target = 0.0;  // <= 0 disables
};

struct FitScenario {
    std::string name = "scenario";
    OBox5 target;
    OBox5 init;
    LossConfig cfg;
    Optimizer opt;
    StopRule stop;
    std::uint64_t seed = 0;
};

enum class FitStatus { Converged, Stalled, Diverged };

struct FitStep {
    int step = 0;
    OBox5 params;
    double loss = 0.0;
    double grad_norm = 0.0;
    double iou = 0.0;
    int match_k = -1;
};

struct FitTrace {
    std::vector<FitStep> steps;
    FitStatus status = FitStatus::Stalled;
};

const char* fit_status_name(FitStatus s);

/// Gradient descent with momentum on the scenario's loss. EWD losses use
/// analytic gradients, baselines central finite differences; w and h are
/// clamped at 1e-6. Deterministic given the scenario.
FitTrace fit(const FitScenario& s);

struct NamedLoss {
    std::string name;
    LossConfig cfg;
};

struct CurveSpec {
    std::vector<double> ratios;  // aspect ratios >= 1
    double dtheta_lo_deg = -90.0;
    double dtheta_hi_deg = 90.0;
    double dtheta_step_deg = 1.0;
    std::vector<NamedLoss> losses;
    double area = 1.0;
};

struct CurveRow {
    double ratio = 1.0;
    double dtheta_deg = 0.0;
    std::string loss;
    double value = 0.0;
    int match_k = -1;
};

/// For each ratio r: box (0, 0, sqrt(area*r), sqrt(area/r), 0) against the
/// same box rotated by dtheta, every loss evaluated on the grid. Rows are
/// ordered by (ratio, dtheta, loss).
std::vector<CurveRow> sweep_curve(const CurveSpec& spec);

/// Grid angles where the active matching switches, for one (ratio, loss)
/// series sorted by dtheta. Of the two grid points bracketing a switch the
/// one with the larger curvature kink is reported.
std::vector<double> detect_turning_points(const std::vector<CurveRow>& series);

struct CompareCell {
    std::string scenario;
    std::string loss;
    int steps_to_iou90 = -1;
    double final_dtheta_deg = 0.0;
    double final_iou = 0.0;
    FitStatus status = FitStatus::Stalled;
};

/// Runs every scenario template under every loss (cfg overridden, the rest
/// of the scenario kept). Divergent cells are recorded, never fatal.
std::vector<CompareCell> compare_losses(const std::vector<FitScenario>& scenarios,
                                        const std::vector<NamedLoss>& losses);

/// Minimal |a - k*period| over integer k, both in degrees.
double angle_dist_mod_deg(double a_deg, double period_deg);

}  // namespace ewd

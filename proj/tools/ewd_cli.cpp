// Batch front end: loss-vs-angle curves, gradient checking, toy fits,
// oracle verification, loss comparison. CSV/JSON/SVG output.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage/validation error,
// 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewd/harness.hpp"
#include "ewd/io.hpp"
#include "ewd/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

int write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return kExitOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return kExitIo;
    }
    out << content;
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return kExitIo;
    }
    return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct CurveArgs {
    std::string ratios = "1,2,4,8";
    std::string dtheta = "-90:90:1";
    std::string losses = "edwd,kld,smoothl1_min";
    std::string format = "csv";
    std::string out = "-";
    std::string norm = "none";
    std::string post = "identity";
    double area = 1.0;
};

int run_curve(const CurveArgs& args) {
    ewd::CurveSpec spec;
    spec.area = args.area;
    for (const std::string& tok : split_list(args.ratios)) {
        const double r = std::stod(tok);
        if (!(r >= 1.0)) {
            std::cerr << "error: ratios must be >= 1 (got " << tok
                      << "); use the reciprocal box\n";
            return kExitUsage;
        }
        spec.ratios.push_back(r);
    }
    {
        std::vector<std::string> seg;
        std::string cur;
        for (char c : args.dtheta) {
            if (c == ':') {
                seg.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        seg.push_back(cur);
        if (seg.size() != 3) {
            std::cerr << "error: --dtheta expects LO:HI:STEP in degrees\n";
            return kExitUsage;
        }
        spec.dtheta_lo_deg = std::stod(seg[0]);
        spec.dtheta_hi_deg = std::stod(seg[1]);
        spec.dtheta_step_deg = std::stod(seg[2]);
        if (!(spec.dtheta_step_deg > 0.0) || spec.dtheta_hi_deg < spec.dtheta_lo_deg) {
            std::cerr << "error: bad --dtheta grid\n";
            return kExitUsage;
        }
    }
    ewd::NormScheme norm;
    ewd::PostFn post;
    try {
        norm = ewd::parse_norm_token(args.norm);
        post = ewd::parse_post_token(args.post);
        for (const std::string& tok : split_list(args.losses)) {
            ewd::NamedLoss nl = ewd::parse_loss_token(tok);
            nl.cfg.norm = norm;
            nl.cfg.post = post;
            spec.losses.push_back(nl);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (spec.losses.empty()) {
        std::cerr << "error: no losses requested\n";
        return kExitUsage;
    }

    const auto rows = ewd::sweep_curve(spec);
    std::string content;
    if (args.format == "csv") {
        content = ewd::curve_csv(rows);
    } else if (args.format == "json") {
        content = ewd::curve_json(rows);
    } else if (args.format == "svg") {
        content = ewd::curve_svg(rows);
    } else {
        std::cerr << "error: unknown format '" << args.format << "'\n";
        return kExitUsage;
    }
    return write_output(args.out, content);
}

struct GradcheckArgs {
    long long trials = 10000;
    std::uint64_t seed = 0;
    double tol = 1e-4;
    double h = 1e-5;
    std::string losses = "egwd,edwd";
};

int run_gradcheck_cmd(const GradcheckArgs& args) {
    if (args.trials < 1) {
        std::cerr << "error: --trials must be >= 1\n";
        return kExitUsage;
    }
    std::vector<ewd::LossVariant> variants;
    for (const std::string& tok : split_list(args.losses)) {
        if (tok == "egwd") {
            variants.push_back(ewd::LossVariant::Egwd);
        } else if (tok == "edwd") {
            variants.push_back(ewd::LossVariant::Edwd);
        } else {
            std::cerr << "error: gradcheck supports losses egwd, edwd (got '" << tok << "')\n";
            return kExitUsage;
        }
    }
    bool all_ok = true;
    for (ewd::LossVariant v : variants) {
        // Absolute floor rides two decades under the relative tolerance
        // (1e-6 at the default 1e-4).
        const auto rep =
            ewd::run_gradcheck({v}, args.trials, args.seed, args.tol, args.tol * 1e-2, args.h);
        const char* name = (v == ewd::LossVariant::Egwd) ? "egwd" : "edwd";
        std::cout << name << ": checked " << rep.checked << " (skipped " << rep.skipped_ties
                  << " near matching ties), max relative error " << ewd::format_g12(rep.max_rel_err)
                  << "\n";
        if (!rep.ok) {
            all_ok = false;
            std::cout << name << ": FAILED, worst case " << rep.worst << "\n";
        }
    }
    return all_ok ? kExitOk : kExitVerification;
}

struct FitArgs {
    std::string manifest;
    std::string loss_override;
    std::string format = "csv";
    std::string out = "-";
};

int run_fit(const FitArgs& args) {
    std::vector<ewd::FitScenario> scenarios;
    try {
        scenarios = ewd::load_manifest_file(args.manifest);
    } catch (const ewd::ManifestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    if (scenarios.empty()) {
        std::cerr << "error: manifest holds no scenarios\n";
        return kExitUsage;
    }
    if (!args.loss_override.empty()) {
        try {
            const ewd::NamedLoss nl = ewd::parse_loss_token(args.loss_override);
            for (auto& s : scenarios) {
                s.cfg.variant = nl.cfg.variant;
                s.cfg.box_def = nl.cfg.box_def;
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    std::vector<std::string> names;
    std::vector<ewd::FitTrace> traces;
    for (const auto& s : scenarios) {
        names.push_back(s.name);
        traces.push_back(ewd::fit(s));
    }
    std::string content;
    if (args.format == "csv") {
        content = ewd::traces_csv(names, traces);
    } else if (args.format == "json") {
        content = ewd::traces_json(names, traces);
    } else if (args.format == "svg") {
        content = ewd::traces_svg(names, traces);
    } else {
        std::cerr << "error: unknown format '" << args.format << "'\n";
        return kExitUsage;
    }
    return write_output(args.out, content);
}

struct VerifyArgs {
    std::string suite;
    long long trials = 0;  // 0 = suite default
    std::uint64_t seed = 0;
};

int run_verify(const VerifyArgs& args) {
    ewd::DeviationReport rep;
    if (args.suite == "egwd-oracle") {
        rep = ewd::verify_egwd_oracle(args.trials > 0 ? args.trials : 10000, args.seed);
    } else if (args.suite == "edwd-integral") {
        rep = ewd::verify_edwd_integral(args.trials > 0 ? args.trials : 1000, args.seed);
    } else if (args.suite == "ot-bound") {
        rep = ewd::verify_ot_bound(args.trials > 0 ? args.trials : 500, args.seed);
    } else if (args.suite == "iou-mc") {
        rep = ewd::verify_iou_mc(args.trials > 0 ? args.trials : 100, args.seed);
    } else {
        std::cerr << "error: unknown suite '" << args.suite
                  << "' (suites: egwd-oracle, edwd-integral, ot-bound, iou-mc)\n";
        return kExitUsage;
    }
    std::cout << args.suite << ": " << rep.checked << " trials, max deviation "
              << ewd::format_g12(rep.max_dev) << "\n";
    if (!rep.ok) {
        std::cout << args.suite << ": FAILED, worst case " << rep.worst << "\n";
        return kExitVerification;
    }
    return kExitOk;
}

struct CompareArgs {
    std::string manifest;
    std::string losses = "edwd,egwd,gwd,kld,smoothl1_min";
    std::string out = "-";
};

int run_compare(const CompareArgs& args) {
    std::vector<ewd::FitScenario> scenarios;
    try {
        scenarios = ewd::load_manifest_file(args.manifest);
    } catch (const ewd::ManifestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    std::vector<ewd::NamedLoss> losses;
    try {
        for (const std::string& tok : split_list(args.losses)) {
            losses.push_back(ewd::parse_loss_token(tok));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto cells = ewd::compare_losses(scenarios, losses);
    return write_output(args.out, ewd::compare_csv(cells));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge Wasserstein distance losses for oriented boxes"};
    app.require_subcommand(1);

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Emit loss-vs-angle curves");
    curve->add_option("--ratios", curve_args.ratios, "Comma list of aspect ratios >= 1");
    curve->add_option("--dtheta", curve_args.dtheta, "Angle grid LO:HI:STEP in degrees");
    curve->add_option("--losses", curve_args.losses, "Comma list of loss names");
    curve->add_option("--format", curve_args.format, "csv | json | svg");
    curve->add_option("--out", curve_args.out, "Output path ('-' = stdout)");
    curve->add_option("--norm", curve_args.norm, "Normalization scheme token");
    curve->add_option("--post", curve_args.post, "Post function token");
    curve->add_option("--area", curve_args.area, "Fixed box area");

    GradcheckArgs grad_args;
    auto* gradcheck = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
    gradcheck->add_option("--trials", grad_args.trials, "Random triples per loss");
    gradcheck->add_option("--seed", grad_args.seed, "RNG seed (default 0)");
    gradcheck->add_option("--tol", grad_args.tol, "Relative tolerance");
    gradcheck->add_option("--fd-step", grad_args.h, "Finite-difference step");
    gradcheck->add_option("--losses", grad_args.losses, "Comma list: egwd, edwd");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Run gradient-descent fits from a scenario manifest");
    fit->add_option("--manifest", fit_args.manifest, "Scenario manifest path")->required();
    fit->add_option("--loss", fit_args.loss_override, "Override every scenario's loss");
    fit->add_option("--format", fit_args.format, "csv | json | svg");
    fit->add_option("--out", fit_args.out, "Output path ('-' = stdout)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run an oracle-equivalence suite");
    verify->add_option("suite", verify_args.suite,
                       "egwd-oracle | edwd-integral | ot-bound | iou-mc")
        ->required();
    verify->add_option("--trials", verify_args.trials, "Trial count (0 = suite default)");
    verify->add_option("--seed", verify_args.seed, "RNG seed (default 0)");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "Loss x scenario summary table");
    compare->add_option("--manifest", compare_args.manifest, "Scenario manifest path")->required();
    compare->add_option("--losses", compare_args.losses, "Comma list of loss names");
    compare->add_option("--out", compare_args.out, "Output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return kExitUsage;
    }

    try {
        if (curve->parsed()) return run_curve(curve_args);
        if (gradcheck->parsed()) return run_gradcheck_cmd(grad_args);
        if (fit->parsed()) return run_fit(fit_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (compare->parsed()) return run_compare(compare_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ewd/io.hpp"

namespace ewd {
namespace {

TEST(Format, TwelveSignificantDigits) {
    EXPECT_EQ(format_g12(0.0), "0");
    EXPECT_EQ(format_g12(45.0), "45");
    EXPECT_EQ(format_g12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_g12(123456789012345.0), "1.23456789012e+14");
    EXPECT_EQ(format_g12(-2.5e-9), "-2.5e-09");
}

TEST(ParseTokens, LossNormPostVariance) {
    EXPECT_EQ(parse_loss_token("edwd").cfg.variant, LossVariant::Edwd);
    EXPECT_EQ(parse_loss_token("smoothl1_le").cfg.box_def, BoxDef::LE);
    EXPECT_THROW(parse_loss_token("bogus"), std::invalid_argument);

    EXPECT_EQ(parse_norm_token("target_wh").kind, NormKind::TargetWH);
    EXPECT_DOUBLE_EQ(parse_norm_token("image:512").scale, 512.0);
    EXPECT_EQ(parse_norm_token("anchor:16").kind, NormKind::AnchorSize);
    EXPECT_THROW(parse_norm_token("image:0"), std::invalid_argument);
    EXPECT_THROW(parse_norm_token("nope"), std::invalid_argument);

    EXPECT_EQ(parse_post_token("sqrt").kind, PostKind::Sqrt);
    const PostFn p = parse_post_token("invtau:2:log1p");
    EXPECT_EQ(p.kind, PostKind::InvTau);
    EXPECT_DOUBLE_EQ(p.tau, 2.0);
    EXPECT_EQ(p.inner, PostKind::Log1p);
    EXPECT_THROW(parse_post_token("invtau:0"), std::invalid_argument);

    LossConfig cfg;
    parse_variance_token("constant:0.5", cfg);
    EXPECT_EQ(cfg.variance_mode, VarianceMode::Constant);
    EXPECT_DOUBLE_EQ(cfg.variance_const, 0.5);
    EXPECT_THROW(parse_variance_token("wat", cfg), std::invalid_argument);
}

TEST(Manifest, ParsesScenario) {
    const std::string text =
        "# comment\n"
        "[scenario]\n"
        "name = demo\n"
        "target = 0 0 4 2 30\n"
        "init = 1 1 4 2 -10\n"
        "loss = edwd\n"
        "norm = target_wh\n"
        "post = sqrt\n"
        "variance = constant:2\n"
        "lr = 0.005\n"
        "momentum = 0.8\n"
        "max_steps = 100\n";
    const auto scenarios = parse_manifest(text);
    ASSERT_EQ(scenarios.size(), 1u);
    const FitScenario& s = scenarios[0];
    EXPECT_EQ(s.name, "demo");
    EXPECT_DOUBLE_EQ(s.target.w, 4.0);
    EXPECT_NEAR(s.target.theta, 30.0 * 3.14159265358979323846 / 180.0, 1e-12);
    EXPECT_EQ(s.cfg.variant, LossVariant::Edwd);
    EXPECT_EQ(s.cfg.norm.kind, NormKind::TargetWH);
    EXPECT_EQ(s.cfg.post.kind, PostKind::Sqrt);
    EXPECT_DOUBLE_EQ(s.cfg.variance_const, 2.0);
    EXPECT_DOUBLE_EQ(s.opt.lr, 0.005);
    EXPECT_EQ(s.opt.max_steps, 100);
}

TEST(Manifest, ReportsLineAndColumn) {
    try {
        parse_manifest("[scenario]\ntarget = 0 0 1 1 0\ninit = 1 2 three 1 0\n");
        FAIL() << "expected ManifestError";
    } catch (const ManifestError& e) {
        EXPECT_EQ(e.line, 3);
        EXPECT_GT(e.col, 1);
        EXPECT_NE(std::string(e.what()).find("manifest:3:"), std::string::npos);
    }
    EXPECT_THROW(parse_manifest("[scenario]\ninit = 0 0 1 1 0\n"), ManifestError);
    EXPECT_THROW(parse_manifest("target = 0 0 1 1 0\n"), ManifestError);
    EXPECT_THROW(parse_manifest("[scenario]\ntarget = 0 0 1 1 0\ninit = 0 0 1 1 0\nwat = 3\n"),
                 ManifestError);
    EXPECT_THROW(parse_manifest("[scenario]\ntarget = 0 0 -1 1 0\ninit = 0 0 1 1 0\n"),
                 ManifestError);
}

TEST(CsvWriters, ExactHeaders) {
    EXPECT_EQ(curve_csv({}).substr(0, 27), "ratio,dtheta_deg,loss,value");
    EXPECT_EQ(traces_csv({}, {}).substr(0, 40), "scenario,step,loss,grad_norm,iou,match_k");
    const std::vector<CurveRow> rows = {CurveRow{1.0, -90.0, "edwd", 0.5, 0}};
    EXPECT_EQ(curve_csv(rows), "ratio,dtheta_deg,loss,value\n1,-90,edwd,0.5\n");
}

#ifdef EWD_CLI_PATH

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const std::string out_path = ::testing::TempDir() + "/cli_out.txt";
    const std::string err_path = ::testing::TempDir() + "/cli_err.txt";
    const std::string cmd =
        std::string(EWD_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

TEST(Cli, CurveRowCount) {
    const CliResult r =
        run_cli("curve --ratios 1,2,4,8 --dtheta -90:90:1 --losses edwd,kld,smoothl1_min");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), 1 + 4 * 181 * 3);
    EXPECT_EQ(r.out.substr(0, 28), "ratio,dtheta_deg,loss,value\n");
}

TEST(Cli, CurveSvgHasOnePolylinePerSeries) {
    const CliResult r = run_cli("curve --ratios 1,4 --dtheta -90:90:5 --losses edwd,kld --format svg");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    size_t count = 0, pos = 0;
    while ((pos = r.out.find("<polyline", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    EXPECT_EQ(count, 4u);  // 2 ratios x 2 losses
}

TEST(Cli, CurveRejectsSubUnitRatio) {
    const CliResult r = run_cli("curve --ratios 0.5");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("reciprocal"), std::string::npos);
}

TEST(Cli, UnknownSuiteListsSuites) {
    const CliResult r = run_cli("verify nope");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("egwd-oracle"), std::string::npos);
}

TEST(Cli, VerifySuitesPass) {
    EXPECT_EQ(run_cli("verify egwd-oracle --trials 500 --seed 3").exit_code, 0);
    EXPECT_EQ(run_cli("verify edwd-integral --trials 100 --seed 3").exit_code, 0);
    EXPECT_EQ(run_cli("verify ot-bound --trials 50 --seed 3").exit_code, 0);
}

TEST(Cli, GradcheckUsageAndNegativeControl) {
    EXPECT_EQ(run_cli("gradcheck --trials 0").exit_code, 2);
    EXPECT_EQ(run_cli("gradcheck --trials 300 --seed 7 --tol 1e-4").exit_code, 0);
    // Impossibly tight tolerance must trip the verification exit code.
    const CliResult r = run_cli("gradcheck --trials 300 --seed 7 --tol 1e-15");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.out.find("FAILED"), std::string::npos);
}

TEST(Cli, FitManifestAndOverrides) {
    const std::string manifest = std::string(EWD_TEST_DATA_DIR) + "/scenarios_standard.manifest";
    const CliResult edwd = run_cli("fit --manifest " + manifest);
    EXPECT_EQ(edwd.exit_code, 0) << edwd.err;
    EXPECT_EQ(edwd.out.substr(0, 41), "scenario,step,loss,grad_norm,iou,match_k\n");

    const CliResult gwd = run_cli("fit --manifest " + manifest + " --loss gwd");
    EXPECT_EQ(gwd.exit_code, 0) << gwd.err;
    // square_rot30 under gwd: angle frozen, iou never reaches 0.99
    std::istringstream lines(gwd.out);
    std::string line;
    std::getline(lines, line);  // header
    double last_iou = -1.0;
    while (std::getline(lines, line)) {
        if (line.rfind("square_rot30,", 0) == 0) {
            const size_t p1 = line.rfind(',');
            const size_t p2 = line.rfind(',', p1 - 1);
            last_iou = std::stod(line.substr(p2 + 1, p1 - p2 - 1));
        }
    }
    EXPECT_GT(last_iou, 0.73);
    EXPECT_LT(last_iou, 0.74);
}

TEST(Cli, FitMissingFileIsIoError) {
    EXPECT_EQ(run_cli("fit --manifest /nonexistent/m.manifest").exit_code, 1);
}

TEST(Cli, FitManifestParseErrorIsUsageError) {
    const std::string bad = ::testing::TempDir() + "/bad.manifest";
    {
        std::ofstream out(bad);
        out << "[scenario]\ntarget = 0 0 1 1 0\ninit = oops\n";
    }
    const CliResult r = run_cli("fit --manifest " + bad);
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("manifest:3:"), std::string::npos);
}

TEST(Cli, BadArgumentsGiveUsageExit) {
    EXPECT_EQ(run_cli("").exit_code, 2);
    EXPECT_EQ(run_cli("curve --format wat").exit_code, 2);
    EXPECT_EQ(run_cli("curve --losses wat").exit_code, 2);
}

TEST(Cli, CompareEmitsTable) {
    const std::string manifest = std::string(EWD_TEST_DATA_DIR) + "/scenarios_standard.manifest";
    const CliResult r = run_cli("compare --manifest " + manifest + " --losses edwd,gwd");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), 1 + 3 * 2);
}

#endif  // EWD_CLI_PATH

}  // namespace
}  // namespace ewd

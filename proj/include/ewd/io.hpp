#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ewd/harness.hpp"

// Text interfaces shared by the CLI and tests: locale-independent number
// formatting, CSV/JSON/SVG emission, loss-token parsing, and the scenario
// manifest parser.

namespace ewd {

/// Shortest round-trippable representation at 12 significant digits,
/// decimal point always '.', no locale involvement.
std::string format_g12(double v);

/// Parse failure with the manifest position attached.
struct ManifestError : std::runtime_error {
    ManifestError(const std::string& msg, int line, int col);
    int line;
    int col;
};

/// Loss token -> config: egwd, edwd, gwd, kld, smoothl1_oc, smoothl1_le,
/// smoothl1_min. Throws std::invalid_argument on unknown tokens.
NamedLoss parse_loss_token(const std::string& token);

/// none | image:S | anchor:S | target_wh | target_min | target_max
NormScheme parse_norm_token(const std::string& token);

/// identity | sqrt | log1p | invtau:TAU[:INNER]
PostFn parse_post_token(const std::string& token);

/// aspect_ratio | constant:V | raw_length
void parse_variance_token(const std::string& token, LossConfig& cfg);

/// Scenario manifest: '[scenario]' sections of 'key = value' lines.
/// Boxes are 5-tuples "cx cy w h theta_deg". See README for the schema.
std::vector<FitScenario> parse_manifest(const std::string& text);

std::vector<FitScenario> load_manifest_file(const std::string& path);

std::string curve_csv(const std::vector<CurveRow>& rows);
std::string curve_json(const std::vector<CurveRow>& rows);
/// One polyline per (ratio, loss) series.
std::string curve_svg(const std::vector<CurveRow>& rows);

std::string traces_csv(const std::vector<std::string>& names,
                       const std::vector<FitTrace>& traces);
std::string traces_json(const std::vector<std::string>& names,
                        const std::vector<FitTrace>& traces);
/// Loss-vs-step polyline per scenario.
std::string traces_svg(const std::vector<std::string>& names,
                       const std::vector<FitTrace>& traces);

std::string compare_csv(const std::vector<CompareCell>& cells);

}  // namespace ewd

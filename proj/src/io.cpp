#include "ewd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ewd {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int line, int col) {
    const std::string t = trim(s);
    double v = 0.0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ManifestError("expected a number, got '" + t + "'", line, col);
    }
    return v;
}

}  // namespace

std::string format_g12(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

ManifestError::ManifestError(const std::string& msg, int line_, int col_)
    : std::runtime_error("manifest:" + std::to_string(line_) + ":" + std::to_string(col_) +
                         ": " + msg),
      line(line_),
      col(col_) {}

NamedLoss parse_loss_token(const std::string& token) {
    NamedLoss nl;
    nl.name = token;
    LossConfig& cfg = nl.cfg;
    if (token == "egwd") {
        cfg.variant = LossVariant::Egwd;
    } else if (token == "edwd") {
        cfg.variant = LossVariant::Edwd;
    } else if (token == "gwd") {
        cfg.variant = LossVariant::Gwd;
    } else if (token == "kld") {
        cfg.variant = LossVariant::Kld;
    } else if (token == "smoothl1_oc") {
        cfg.variant = LossVariant::SmoothL1;
        cfg.box_def = BoxDef::OC;
    } else if (token == "smoothl1_le") {
        cfg.variant = LossVariant::SmoothL1;
        cfg.box_def = BoxDef::LE;
    } else if (token == "smoothl1_min") {
        cfg.variant = LossVariant::SmoothL1;
        cfg.box_def = BoxDef::MIN;
    } else {
        throw std::invalid_argument(
            "unknown loss '" + token +
            "' (expected egwd, edwd, gwd, kld, smoothl1_oc, smoothl1_le, smoothl1_min)");
    }
    return nl;
}

NormScheme parse_norm_token(const std::string& token) {
    NormScheme n;
    if (token == "none") {
        n.kind = NormKind::None;
    } else if (token == "target_wh") {
        n.kind = NormKind::TargetWH;
    } else if (token == "target_min") {
        n.kind = NormKind::TargetMin;
    } else if (token == "target_max") {
        n.kind = NormKind::TargetMax;
    } else if (token.rfind("image:", 0) == 0 || token.rfind("anchor:", 0) == 0) {
        const bool image = token[0] == 'i';
        n.kind = image ? NormKind::ImageSize : NormKind::AnchorSize;
        const std::string num = token.substr(token.find(':') + 1);
        try {
            n.scale = std::stod(num);
        } catch (...) {
            throw std::invalid_argument("bad scale in norm token '" + token + "'");
        }
        if (!(n.scale > 0.0)) throw std::invalid_argument("norm scale must be positive");
    } else {
        throw std::invalid_argument(
            "unknown norm '" + token +
            "' (expected none, image:S, anchor:S, target_wh, target_min, target_max)");
    }
    return n;
}

PostFn parse_post_token(const std::string& token) {
    PostFn p;
    auto inner_of = [](const std::string& s) {
        if (s == "identity") return PostKind::Identity;
        if (s == "sqrt") return PostKind::Sqrt;
        if (s == "log1p") return PostKind::Log1p;
        throw std::invalid_argument("unknown inner post '" + s + "'");
    };
    if (token == "identity" || token == "sqrt" || token == "log1p") {
        p.kind = inner_of(token);
        return p;
    }
    if (token.rfind("invtau:", 0) == 0) {
        const auto parts = split(token, ':');
        if (parts.size() < 2 || parts.size() > 3) {
            throw std::invalid_argument("invtau expects invtau:TAU[:INNER]");
        }
        p.kind = PostKind::InvTau;
        try {
            p.tau = std::stod(parts[1]);
        } catch (...) {
            throw std::invalid_argument("bad tau in post token '" + token + "'");
        }
        if (!(p.tau > 0.0)) throw std::invalid_argument("tau must be positive");
        p.inner = parts.size() == 3 ? inner_of(parts[2]) : PostKind::Identity;
        return p;
    }
    throw std::invalid_argument("unknown post '" + token +
                                "' (expected identity, sqrt, log1p, invtau:TAU[:INNER])");
}

void parse_variance_token(const std::string& token, LossConfig& cfg) {
    if (token == "aspect_ratio") {
        cfg.variance_mode = VarianceMode::AspectRatio;
    } else if (token == "raw_length") {
        cfg.variance_mode = VarianceMode::RawLength;
    } else if (token.rfind("constant:", 0) == 0) {
        cfg.variance_mode = VarianceMode::Constant;
        try {
            cfg.variance_const = std::stod(token.substr(9));
        } catch (...) {
            throw std::invalid_argument("bad value in variance token '" + token + "'");
        }
        if (cfg.variance_const < 0.0) throw std::invalid_argument("variance must be >= 0");
    } else {
        throw std::invalid_argument(
            "unknown variance '" + token +
            "' (expected aspect_ratio, constant:V, raw_length)");
    }
}

namespace {

OBox5 parse_box_tuple(const std::string& value, int line, int col) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : value) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    if (parts.size() != 5) {
        throw ManifestError("box needs 5 values: cx cy w h theta_deg", line, col);
    }
    OBox5 b;
    b.cx = parse_double(parts[0], line, col);
    b.cy = parse_double(parts[1], line, col);
    b.w = parse_double(parts[2], line, col);
    b.h = parse_double(parts[3], line, col);
    b.theta = parse_double(parts[4], line, col) * kDegToRad;
    if (!box_is_valid(b)) {
        throw ManifestError("box sizes must be positive and finite", line, col);
    }
    return b;
}

}  // namespace

std::vector<FitScenario> parse_manifest(const std::string& text) {
    std::vector<FitScenario> out;
    FitScenario cur;
    bool open = false;
    bool has_target = false, has_init = false;
    int line_no = 0;

    auto finish = [&](int line) {
        if (!open) return;
        if (!has_target || !has_init) {
            throw ManifestError("scenario needs both 'target' and 'init'", line, 1);
        }
        if (cur.name == "scenario") cur.name += std::to_string(out.size());
        out.push_back(cur);
    };

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string s = raw;
        const size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s == "[scenario]") {
            finish(line_no);
            cur = FitScenario{};
            open = true;
            has_target = has_init = false;
            continue;
        }
        if (!open) throw ManifestError("expected '[scenario]' before keys", line_no, 1);
        const size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ManifestError("expected 'key = value'", line_no, 1);
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const int vcol = static_cast<int>(raw.find(value.empty() ? "=" : value)) + 1;
        try {
            if (key == "name") {
                cur.name = value;
            } else if (key == "target") {
                cur.target = parse_box_tuple(value, line_no, vcol);
                has_target = true;
            } else if (key == "init") {
                cur.init = parse_box_tuple(value, line_no, vcol);
                has_init = true;
            } else if (key == "loss") {
                const NamedLoss nl = parse_loss_token(value);
                cur.cfg.variant = nl.cfg.variant;
                cur.cfg.box_def = nl.cfg.box_def;
            } else if (key == "norm") {
                cur.cfg.norm = parse_norm_token(value);
            } else if (key == "post") {
                cur.cfg.post = parse_post_token(value);
            } else if (key == "variance") {
                parse_variance_token(value, cur.cfg);
            } else if (key == "beta") {
                cur.cfg.smooth_l1_beta = parse_double(value, line_no, vcol);
            } else if (key == "lr") {
                cur.opt.lr = parse_double(value, line_no, vcol);
                if (!(cur.opt.lr > 0.0)) throw ManifestError("lr must be positive", line_no, vcol);
            } else if (key == "momentum") {
                cur.opt.momentum = parse_double(value, line_no, vcol);
                if (cur.opt.momentum < 0.0 || cur.opt.momentum >= 1.0) {
                    throw ManifestError("momentum must lie in [0, 1)", line_no, vcol);
                }
            } else if (key == "max_steps") {
                cur.opt.max_steps = static_cast<int>(parse_double(value, line_no, vcol));
                if (cur.opt.max_steps < 1) throw ManifestError("max_steps must be >= 1", line_no, vcol);
            } else if (key == "grad_tol") {
                cur.stop.grad_tol = parse_double(value, line_no, vcol);
            } else if (key == "iou_target") {
                cur.stop.iou_target = parse_double(value, line_no, vcol);
            } else if (key == "seed") {
                cur.seed = static_cast<std::uint64_t>(parse_double(value, line_no, vcol));
            } else {
                throw ManifestError("unknown key '" + key + "'", line_no, 1);
            }
        } catch (const ManifestError&) {
            throw;
        } catch (const std::exception& e) {
            throw ManifestError(e.what(), line_no, vcol);
        }
    }
    finish(line_no);
    return out;
}

std::vector<FitScenario> load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open manifest '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::string out = "ratio,dtheta_deg,loss,value\n";
    for (const CurveRow& r : rows) {
        out += format_g12(r.ratio);
        out += ',';
        out += format_g12(r.dtheta_deg);
        out += ',';
        out += r.loss;
        out += ',';
        out += format_g12(r.value);
        out += '\n';
    }
    return out;
}

std::string curve_json(const std::vector<CurveRow>& rows) {
    std::string out = "[";
    for (size_t i = 0; i < rows.size(); ++i) {
        const CurveRow& r = rows[i];
        out += i == 0 ? "\n" : ",\n";
        out += "  {\"ratio\": " + format_g12(r.ratio) +
               ", \"dtheta_deg\": " + format_g12(r.dtheta_deg) + ", \"loss\": \"" + r.loss +
               "\", \"value\": " + format_g12(r.value) +
               ", \"match_k\": " + std::to_string(r.match_k) + "}";
    }
    out += "\n]\n";
    return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
    std::string label;
    std::vector<double> x, y;
};

std::string polyline_svg(const std::vector<Series>& series, const std::string& xlabel) {
    const double width = 800.0, height = 500.0, margin = 50.0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    auto px = [&](double x) {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto py = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n"
        "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<line x1=\"" + format_g12(margin) + "\" y1=\"" + format_g12(height - margin) +
           "\" x2=\"" + format_g12(width - margin) + "\" y2=\"" + format_g12(height - margin) +
           "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + format_g12(margin) + "\" y1=\"" + format_g12(margin) + "\" x2=\"" +
           format_g12(margin) + "\" y2=\"" + format_g12(height - margin) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"400\" y=\"495\" text-anchor=\"middle\" font-size=\"12\">" + xlabel +
           "</text>\n";
    int idx = 0;
    for (const Series& s : series) {
        const char* color = kPalette[idx % 8];
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (i != 0) out += ' ';
            out += format_g12(px(s.x[i])) + "," + format_g12(py(s.y[i]));
        }
        out += "\"/>\n";
        out += "<text x=\"" + format_g12(width - margin + 4) + "\" y=\"" +
               format_g12(margin + 14.0 * idx) + "\" font-size=\"10\" fill=\"" + color + "\">" +
               s.label + "</text>\n";
        ++idx;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace

std::string curve_svg(const std::vector<CurveRow>& rows) {
    std::map<std::string, Series> by_key;
    std::vector<std::string> order;
    for (const CurveRow& r : rows) {
        const std::string key = r.loss + " r=" + format_g12(r.ratio);
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            order.push_back(key);
            it = by_key.emplace(key, Series{key, {}, {}}).first;
        }
        it->second.x.push_back(r.dtheta_deg);
        it->second.y.push_back(r.value);
    }
    std::vector<Series> series;
    for (const std::string& key : order) series.push_back(by_key[key]);
    return polyline_svg(series, "dtheta_deg");
}

std::string traces_csv(const std::vector<std::string>& names,
                       const std::vector<FitTrace>& traces) {
    std::string out = "scenario,step,loss,grad_norm,iou,match_k\n";
    for (size_t t = 0; t < traces.size(); ++t) {
        for (const FitStep& s : traces[t].steps) {
            out += names[t];
            out += ',';
            out += std::to_string(s.step);
            out += ',';
            out += format_g12(s.loss);
            out += ',';
            out += format_g12(s.grad_norm);
            out += ',';
            out += format_g12(s.iou);
            out += ',';
            out += std::to_string(s.match_k);
            out += '\n';
        }
    }
    return out;
}

std::string traces_json(const std::vector<std::string>& names,
                        const std::vector<FitTrace>& traces) {
    std::string out = "[";
    for (size_t t = 0; t < traces.size(); ++t) {
        out += t == 0 ? "\n" : ",\n";
        out += "  {\"scenario\": \"" + names[t] + "\", \"status\": \"" +
               fit_status_name(traces[t].status) + "\", \"steps\": [";
        for (size_t i = 0; i < traces[t].steps.size(); ++i) {
            const FitStep& s = traces[t].steps[i];
            out += i == 0 ? "\n" : ",\n";
            out += "    {\"step\": " + std::to_string(s.step) + ", \"loss\": " +
                   format_g12(s.loss) + ", \"grad_norm\": " + format_g12(s.grad_norm) +
                   ", \"iou\": " + format_g12(s.iou) +
                   ", \"match_k\": " + std::to_string(s.match_k) + "}";
        }
        out += "\n  ]}";
    }
    out += "\n]\n";
    return out;
}

std::string traces_svg(const std::vector<std::string>& names,
                       const std::vector<FitTrace>& traces) {
    std::vector<Series> series;
    for (size_t t = 0; t < traces.size(); ++t) {
        Series s;
        s.label = names[t];
        for (const FitStep& st : traces[t].steps) {
            s.x.push_back(st.step);
            s.y.push_back(st.loss);
        }
        series.push_back(std::move(s));
    }
    return polyline_svg(series, "step");
}

std::string compare_csv(const std::vector<CompareCell>& cells) {
    std::string out = "scenario,loss,steps_to_iou90,final_dtheta_deg,final_iou,status\n";
    for (const CompareCell& c : cells) {
        out += c.scenario + "," + c.loss + "," + std::to_string(c.steps_to_iou90) + "," +
               format_g12(c.final_dtheta_deg) + "," + format_g12(c.final_iou) + "," +
               fit_status_name(c.status) + "\n";
    }
    return out;
}

}  // namespace ewd

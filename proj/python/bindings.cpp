#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ewd/grad.hpp"
#include "ewd/harness.hpp"
#include "ewd/io.hpp"
#include "ewd/loss.hpp"
#include "ewd/oracle.hpp"

namespace py = pybind11;
using namespace ewd;

namespace {

LossConfig config_from_tokens(const std::string& loss_name, const std::string& norm,
                              const std::string& post, const std::string& variance,
                              double beta) {
    LossConfig cfg = parse_loss_token(loss_name).cfg;
    cfg.norm = parse_norm_token(norm);
    cfg.post = parse_post_token(post);
    parse_variance_token(variance, cfg);
    cfg.smooth_l1_beta = beta;
    return cfg;
}

Quad quad_from_list(const std::vector<std::pair<double, double>>& corners) {
    if (corners.size() != 4) throw std::invalid_argument("quad needs 4 corners");
    Quad q;
    for (int i = 0; i < 4; ++i) q.corners[i] = Vec2{corners[i].first, corners[i].second};
    return q;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Edge Wasserstein distance losses for oriented boxes";

    py::class_<OBox5>(m, "OBox5")
        .def(py::init<>())
        .def(py::init([](double cx, double cy, double w, double h, double theta) {
                 return OBox5{cx, cy, w, h, theta};
             }),
             py::arg("cx"), py::arg("cy"), py::arg("w"), py::arg("h"), py::arg("theta"))
        .def_readwrite("cx", &OBox5::cx)
        .def_readwrite("cy", &OBox5::cy)
        .def_readwrite("w", &OBox5::w)
        .def_readwrite("h", &OBox5::h)
        .def_readwrite("theta", &OBox5::theta)
        .def("__repr__", [](const OBox5& b) {
            return "OBox5(" + format_g12(b.cx) + ", " + format_g12(b.cy) + ", " +
                   format_g12(b.w) + ", " + format_g12(b.h) + ", " + format_g12(b.theta) + ")";
        });

    py::enum_<BoxDef>(m, "BoxDef")
        .value("OC", BoxDef::OC)
        .value("LE", BoxDef::LE)
        .value("MIN", BoxDef::MIN);

    py::class_<LossConfig>(m, "LossConfig")
        .def(py::init(&config_from_tokens), py::arg("loss") = "edwd", py::arg("norm") = "none",
             py::arg("post") = "identity", py::arg("variance") = "aspect_ratio",
             py::arg("beta") = 1.0 / 9.0);

    py::class_<LossResult>(m, "LossResult")
        .def_readonly("value", &LossResult::value)
        .def_readonly("distance", &LossResult::distance)
        .def_readonly("match_k", &LossResult::match_k);

    py::class_<BoxGrad>(m, "BoxGrad")
        .def_readonly("d_cx", &BoxGrad::d_cx)
        .def_readonly("d_cy", &BoxGrad::d_cy)
        .def_readonly("d_w", &BoxGrad::d_w)
        .def_readonly("d_h", &BoxGrad::d_h)
        .def_readonly("d_theta", &BoxGrad::d_theta)
        .def("__iter__", [](const BoxGrad& g) {
            py::list xs;
            xs.append(g.d_cx);
            xs.append(g.d_cy);
            xs.append(g.d_w);
            xs.append(g.d_h);
            xs.append(g.d_theta);
            return py::iter(xs);
        });

    m.def("loss", &loss, py::arg("pred"), py::arg("target"), py::arg("cfg"),
          "Loss value for a (pred, target) box pair under cfg.");
    m.def(
        "quad_loss",
        [](const std::vector<std::pair<double, double>>& pred,
           const std::vector<std::pair<double, double>>& target, const LossConfig& cfg) {
            return quad_loss(quad_from_list(pred), quad_from_list(target), cfg);
        },
        py::arg("pred"), py::arg("target"), py::arg("cfg"),
        "EGWD/EDWD for clockwise quadrilaterals given as 4 (x, y) pairs.");
    m.def(
        "gradient",
        [](const OBox5& pred, const OBox5& target, const LossConfig& cfg) {
            return edwd_grad(pred, target, cfg).grad;
        },
        py::arg("pred"), py::arg("target"), py::arg("cfg"),
        "Analytic gradient of the EGWD/EDWD loss w.r.t. pred's parameters.");
    m.def(
        "fd_gradient",
        [](const std::function<double(const OBox5&)>& f, const OBox5& at, double h) {
            return fd_gradient(f, at, h);
        },
        py::arg("f"), py::arg("at"), py::arg("h") = 1e-5,
        "Central finite-difference gradient of an arbitrary box loss.");
    m.def(
        "rotated_iou",
        [](const OBox5& a, const OBox5& b) { return rotated_iou(to_corners(a), to_corners(b)); },
        py::arg("a"), py::arg("b"), "IoU of two oriented boxes.");
    m.def(
        "corners",
        [](const OBox5& b) {
            const Quad q = to_corners(b);
            std::vector<std::pair<double, double>> out;
            for (const Vec2& p : q.corners) out.emplace_back(p.x, p.y);
            return out;
        },
        py::arg("box"), "Clockwise corner list of a box.");
    m.def(
        "canonicalize",
        [](const OBox5& b, BoxDef def) { return canonicalize(b, def); },
        py::arg("box"), py::arg("def"),
        "Canonical parameters of the same rectangle under a box definition.");
    m.def(
        "egwd",
        [](const OBox5& a, const OBox5& b) { return egwd_obox(a, b).value; },
        py::arg("pred"), py::arg("target"), "Raw EGWD distance (min over matchings).");
    m.def(
        "fit",
        [](const OBox5& target, const OBox5& init, const LossConfig& cfg, double lr,
           double momentum, int max_steps, double grad_tol, double iou_target) {
            FitScenario s;
            s.target = target;
            s.init = init;
            s.cfg = cfg;
            s.opt = Optimizer{lr, momentum, max_steps};
            s.stop = StopRule{grad_tol, iou_target};
            const FitTrace trace = fit(s);
            py::list steps;
            for (const FitStep& st : trace.steps) {
                py::dict d;
                d["step"] = st.step;
                d["box"] = st.params;
                d["loss"] = st.loss;
                d["grad_norm"] = st.grad_norm;
                d["iou"] = st.iou;
                d["match_k"] = st.match_k;
                steps.append(d);
            }
            py::dict out;
            out["status"] = fit_status_name(trace.status);
            out["steps"] = steps;
            return out;
        },
        py::arg("target"), py::arg("init"), py::arg("cfg"), py::arg("lr") = 0.01,
        py::arg("momentum") = 0.9, py::arg("max_steps") = 2000, py::arg("grad_tol") = 1e-10,
        py::arg("iou_target") = 0.0, "Gradient-descent fit of init toward target.");
    m.def(
        "sweep_curve",
        [](const std::vector<double>& ratios, double lo, double hi, double step,
           const std::vector<std::string>& losses, double area) {
            CurveSpec spec;
            spec.ratios = ratios;
            spec.dtheta_lo_deg = lo;
            spec.dtheta_hi_deg = hi;
            spec.dtheta_step_deg = step;
            spec.area = area;
            for (const std::string& tok : losses) spec.losses.push_back(parse_loss_token(tok));
            py::list out;
            for (const CurveRow& r : sweep_curve(spec)) {
                out.append(py::make_tuple(r.ratio, r.dtheta_deg, r.loss, r.value, r.match_k));
            }
            return out;
        },
        py::arg("ratios"), py::arg("dtheta_lo_deg") = -90.0, py::arg("dtheta_hi_deg") = 90.0,
        py::arg("dtheta_step_deg") = 1.0,
        py::arg("losses") = std::vector<std::string>{"edwd", "kld", "smoothl1_min"},
        py::arg("area") = 1.0,
        "Loss-vs-angle table: (ratio, dtheta_deg, loss, value, match_k) rows.");

    m.attr("__version__") = "0.1.0";
}

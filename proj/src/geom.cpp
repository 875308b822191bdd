#include "ewd/geom.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace ewd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

Vec2 width_halfvec(const OBox5& b) {
    return {0.5 * b.w * std::cos(b.theta), -0.5 * b.w * std::sin(b.theta)};
}

Vec2 height_halfvec(const OBox5& b) {
    return {0.5 * b.h * std::sin(b.theta), 0.5 * b.h * std::cos(b.theta)};
}

}  // namespace

bool box_is_valid(const OBox5& b) {
    return std::isfinite(b.cx) && std::isfinite(b.cy) && std::isfinite(b.theta) &&
           std::isfinite(b.w) && std::isfinite(b.h) && b.w > 0.0 && b.h > 0.0;
}

double wrap_angle(double a, double lo, double period) {
    double r = std::fmod(a - lo, period);
    if (r < 0.0) r += period;
    return r + lo;
}

Quad to_corners(const OBox5& b) {
    const Vec2 o{b.cx, b.cy};
    const Vec2 a = width_halfvec(b);
    const Vec2 c = height_halfvec(b);
    return Quad{{o - a - c, o + a - c, o + a + c, o - a + c}};
}

EdgeSeq to_edges(const OBox5& b) {
    const Quad q = to_corners(b);
    return quad_edges(q);
}

EdgeSeq quad_edges(const Quad& q) {
    EdgeSeq edges;
    edges.reserve(4);
    for (int i = 0; i < 4; ++i) {
        edges.push_back(DirectedEdge{q.corners[i], q.corners[(i + 1) % 4]});
    }
    return edges;
}

OBox5 shift_parameterization(const OBox5& b, int k) {
    OBox5 r = b;
    k = ((k % 4) + 4) % 4;
    for (int i = 0; i < k; ++i) {
        r = OBox5{r.cx, r.cy, r.h, r.w, r.theta - kHalfPi};
    }
    return r;
}

OBox5 rotated(const OBox5& b, double dtheta) {
    return OBox5{b.cx, b.cy, b.w, b.h, b.theta + dtheta};
}

OBox5 canonicalize(const OBox5& b, BoxDef def) {
    OBox5 r = b;
    switch (def) {
        case BoxDef::OC:
            // theta in [-pi/2, 0); one w/h swap when the pi-wrapped angle
            // lands in the upper half.
            r.theta = wrap_angle(r.theta, -kHalfPi, kPi);
            if (r.theta >= 0.0) {
                std::swap(r.w, r.h);
                r.theta -= kHalfPi;
            }
            return r;
        case BoxDef::LE:
            if (r.w < r.h) {
                std::swap(r.w, r.h);
                r.theta += kHalfPi;
            }
            r.theta = wrap_angle(r.theta, -kHalfPi, kPi);
            return r;
        case BoxDef::MIN:
            r.theta = wrap_angle(r.theta, -kHalfPi, kPi);
            if (r.theta >= kPi / 4.0) {
                std::swap(r.w, r.h);
                r.theta -= kHalfPi;
            } else if (r.theta < -kPi / 4.0) {
                std::swap(r.w, r.h);
                r.theta += kHalfPi;
            }
            return r;
    }
    throw std::invalid_argument("unknown box definition");
}

double polygon_area(const Vec2* pts, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % n];
        s += cross(p, q);
    }
    return 0.5 * s;
}

namespace {

// Sutherland-Hodgman clip of a convex polygon against the half-plane to the
// left of the directed edge (a, b). Both polygons are kept in positive
// shoelace orientation.
int clip_halfplane(const Vec2* in, int n, Vec2 a, Vec2 b, Vec2* out) {
    int m = 0;
    const Vec2 dir = b - a;
    for (int i = 0; i < n; ++i) {
        const Vec2 p = in[i];
        const Vec2 q = in[(i + 1) % n];
        const double sp = cross(dir, p - a);
        const double sq = cross(dir, q - a);
        if (sp >= 0.0) out[m++] = p;
        if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
            const double t = sp / (sp - sq);
            out[m++] = p + t * (q - p);
        }
    }
    return m;
}

// Quad as positive-orientation point list; returns count (0 if degenerate).
int oriented_points(const Quad& q, Vec2* out) {
    double area = polygon_area(q.corners.data(), 4);
    if (area == 0.0) return 0;
    if (area > 0.0) {
        for (int i = 0; i < 4; ++i) out[i] = q.corners[i];
    } else {
        for (int i = 0; i < 4; ++i) out[i] = q.corners[3 - i];
    }
    return 4;
}

bool point_in_convex(const Vec2* poly, int n, Vec2 p) {
    for (int i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        if (cross(b - a, p - a) < 0.0) return false;
    }
    return true;
}

}  // namespace

double rotated_iou(const Quad& qa, const Quad& qb) {
    Vec2 a[4], b[4];
    const int na = oriented_points(qa, a);
    const int nb = oriented_points(qb, b);
    if (na == 0 || nb == 0) return 0.0;

    const double area_a = polygon_area(a, 4);
    const double area_b = polygon_area(b, 4);

    // Clip a against b's four half-planes; intersection of two quads has at
    // most 8 vertices.
    Vec2 buf0[16], buf1[16];
    int n = na;
    std::copy(a, a + na, buf0);
    Vec2* cur = buf0;
    Vec2* nxt = buf1;
    for (int i = 0; i < nb && n > 2; ++i) {
        n = clip_halfplane(cur, n, b[i], b[(i + 1) % 4], nxt);
        std::swap(cur, nxt);
    }
    const double inter = (n > 2) ? polygon_area(cur, n) : 0.0;
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double rotated_iou_mc(const Quad& qa, const Quad& qb, int samples, unsigned long long seed) {
    Vec2 a[4], b[4];
    const int na = oriented_points(qa, a);
    const int nb = oriented_points(qb, b);
    if (na == 0 || nb == 0) return 0.0;

    double xmin = a[0].x, xmax = a[0].x, ymin = a[0].y, ymax = a[0].y;
    for (int i = 0; i < 4; ++i) {
        xmin = std::min({xmin, a[i].x, b[i].x});
        xmax = std::max({xmax, a[i].x, b[i].x});
        ymin = std::min({ymin, a[i].y, b[i].y});
        ymax = std::max({ymax, a[i].y, b[i].y});
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(xmin, xmax);
    std::uniform_real_distribution<double> uy(ymin, ymax);
    long long n_inter = 0, n_union = 0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 p{ux(rng), uy(rng)};
        const bool ina = point_in_convex(a, 4, p);
        const bool inb = point_in_convex(b, 4, p);
        if (ina && inb) ++n_inter;
        if (ina || inb) ++n_union;
    }
    if (n_union == 0) return 0.0;
    return static_cast<double>(n_inter) / static_cast<double>(n_union);
}

}  // namespace ewd

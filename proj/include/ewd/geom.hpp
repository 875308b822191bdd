#pragma once

#include <array>
#include <cmath>
#include <vector>

// Oriented-box and polygon geometry.
//
// Coordinate convention, used everywhere in this library: y-down image
// coordinates. "Clockwise" (as seen on screen) corresponds to positive
// signed area of the shoelace formula in these raw coordinates.
// Angles are radians internally; degrees appear only at CLI boundaries.

namespace ewd {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(norm2(v)); }

/// Rotated rectangle: center, size, rotation. w and h must be positive;
/// theta is unrestricted at construction.
struct OBox5 {
    double cx = 0.0;
    double cy = 0.0;
    double w = 1.0;
    double h = 1.0;
    double theta = 0.0;
};

bool box_is_valid(const OBox5& b);

/// Angle-range conventions for the 5-parameter encoding.
///   OC:  theta in [-pi/2, 0)            (OpenCV style)
///   LE:  w >= h, theta in [-pi/2, pi/2) (long-edge)
///   MIN: theta in [-pi/4, pi/4)
enum class BoxDef { OC, LE, MIN };

struct DirectedEdge {
    Vec2 p0;
    Vec2 p1;

    Vec2 center() const { return 0.5 * (p0 + p1); }
    Vec2 vec() const { return p1 - p0; }
    double length() const { return norm(vec()); }
    /// Direction angle of the edge vector, atan2 convention.
    double angle() const { return std::atan2(p1.y - p0.y, p1.x - p0.x); }
};

/// Closed sequence of directed edges, clockwise in image coordinates.
using EdgeSeq = std::vector<DirectedEdge>;

/// Four corners in clockwise order; must form a simple polygon.
struct Quad {
    std::array<Vec2, 4> corners;
};

/// Wrap an angle into [lo, lo + period).
double wrap_angle(double a, double lo, double period);

/// Corner order: starting at center - wvec/2 - hvec/2, clockwise, where
/// wvec = w*(cos t, -sin t) and hvec = h*(sin t, cos t).
Quad to_corners(const OBox5& b);

/// Edges in clockwise order. Edge 0 has length w and center at
/// center - hvec/2; lengths then alternate w, h, w, h.
EdgeSeq to_edges(const OBox5& b);

EdgeSeq quad_edges(const Quad& q);

/// Re-parameterization of the identical rectangle whose edge sequence is
/// b's shifted by k positions: one shift maps (w, h, theta) to
/// (h, w, theta - pi/2).
OBox5 shift_parameterization(const OBox5& b, int k);

/// Same box with theta increased by dtheta.
OBox5 rotated(const OBox5& b, double dtheta);

/// Unique representation of the same rectangle point set under the given
/// definition. For LE, a w == h tie keeps the input orientation.
OBox5 canonicalize(const OBox5& b, BoxDef def);

double polygon_area(const Vec2* pts, int n);

/// Intersection-over-union of two convex quads via polygon clipping.
/// Degenerate (zero-area) inputs yield 0.
double rotated_iou(const Quad& a, const Quad& b);

/// Monte-Carlo point-membership estimate of IoU; verification oracle for
/// rotated_iou.
double rotated_iou_mc(const Quad& a, const Quad& b, int samples, unsigned long long seed);

}  // namespace ewd

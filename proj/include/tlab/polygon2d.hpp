#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tlab/sampler.hpp"

namespace tlab::poly {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) noexcept { return {s * a.x, s * a.y}; }
    friend bool operator==(Point, Point) = default;
};

inline double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }

inline constexpr double kPredicateTol = 1e-12;

/// Convex polygon with counter-clockwise vertices. The constructor enforces
/// the invariants (>= 3 vertices, convex turns, positive area, no repeated
/// consecutive vertices) and throws InvalidPolygon otherwise.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point> vertices);

    [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return v_; }
    [[nodiscard]] std::size_t size() const noexcept { return v_.size(); }

private:
    std::vector<Point> v_;
};

/// Convex hull (Andrew's monotone chain), collinear points dropped.
ConvexPolygon convex_hull(std::vector<Point> points);

double area(const ConvexPolygon& p);
double support(const ConvexPolygon& p, Point theta);
Point barycenter(const ConvexPolygon& p);
ConvexPolygon translate(const ConvexPolygon& p, Point v);
ConvexPolygon scale(const ConvexPolygon& p, double s);
ConvexPolygon reflect(const ConvexPolygon& p);

/// Edge-merge Minkowski sum.
ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q);
/// P + {v}.
ConvexPolygon minkowski_sum(const ConvexPolygon& p, Point v);

/// Clips P by the half-planes of Q. Returns nullopt when the intersection
/// has area below 1e-12.
std::optional<ConvexPolygon> intersect(const ConvexPolygon& p, const ConvexPolygon& q);

/// {x : <a, x> <= b}.
struct HalfPlane {
    Point normal;
    double offset = 0.0;
};

std::optional<ConvexPolygon> clip(const ConvexPolygon& p, const HalfPlane& h);

/// Polar body. Requires the origin at distance > 1e-9 from every edge line.
ConvexPolygon polar(const ConvexPolygon& p);

/// area(P - P) / area(P); lies in [4, 6].
double rogers_shephard_ratio(const ConvexPolygon& p);

/// area(P ∩ -P) / area(P) for P with barycenter at the origin; lies in [1/4, 1].
double milman_pajor_ratio(const ConvexPolygon& p);

ConvexPolygon regular_polygon(std::size_t m, double circumradius, double phase = 0.0);

struct ZpPolygon {
    ConvexPolygon body;
    double volume_radius = 0.0;  // sqrt(area / pi)
    std::vector<double> support_values;
};

/// Outer model of Z_p of a planar batch: intersection of the half-planes
/// <x, theta_k> <= h_{Z_p}(theta_k) over angle_count equispaced angles
/// starting at angle 0.
ZpPolygon zp_polygon(const Matrix& data, double p, std::size_t angle_count);

/// Plain-text vertex list: one "x y" per line, CCW. '#' starts a comment.
void write_polygon(std::ostream& out, const ConvexPolygon& p);
ConvexPolygon read_polygon(std::istream& in);

}  // namespace tlab::poly

#include "tlab/polygon2d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "tlab/centroid.hpp"
#include "tlab/error.hpp"

namespace tlab::poly {
namespace {

double signed_area(const std::vector<Point>& v) {
    double a = 0.0;
    const Point o = v.front();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) a += cross(v[i] - o, v[i + 1] - o);
    return 0.5 * a;
}

double norm(Point a) { return std::hypot(a.x, a.y); }

// Drops repeated consecutive vertices and merges collinear runs.
std::vector<Point> simplify(std::vector<Point> v) {
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        std::vector<Point> out;
        out.reserve(v.size());
        for (const Point& p : v)
            if (out.empty() || norm(p - out.back()) > kPredicateTol) out.push_back(p);
        while (out.size() >= 2 && norm(out.front() - out.back()) <= kPredicateTol) out.pop_back();
        if (out.size() < 3) return out;
        std::vector<Point> kept;
        const std::size_t m = out.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Point a = out[(i + m - 1) % m], b = out[i], c = out[(i + 1) % m];
            const Point e1 = b - a, e2 = c - b;
            const double turn = cross(e1, e2) / (norm(e1) * norm(e2));
            if (std::abs(turn) <= kPredicateTol && dot(e1, e2) > 0.0) {
                changed = true;
                continue;
            }
            kept.push_back(b);
        }
        v = std::move(kept);
    }
    return v;
}

std::optional<ConvexPolygon> make_if_nondegenerate(std::vector<Point> v) {
    v = simplify(std::move(v));
    if (v.size() < 3 || signed_area(v) < kPredicateTol) return std::nullopt;
    try {
        return ConvexPolygon(std::move(v));
    } catch (const InvalidPolygon&) {
        return std::nullopt;
    }
}

// Index of the lowest vertex (then leftmost).
std::size_t bottom_index(const std::vector<Point>& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i].y < v[k].y || (v[i].y == v[k].y && v[i].x < v[k].x)) k = i;
    return k;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices) : v_(simplify(std::move(vertices))) {
    if (v_.size() < 3) throw InvalidPolygon("polygon needs at least 3 distinct, non-collinear vertices");
    for (const Point& p : v_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidPolygon("polygon has non-finite vertex");
    const std::size_t m = v_.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point e1 = v_[(i + 1) % m] - v_[i];
        const Point e2 = v_[(i + 2) % m] - v_[(i + 1) % m];
        if (cross(e1, e2) < -kPredicateTol) throw InvalidPolygon("polygon is not convex or not counter-clockwise");
    }
    if (signed_area(v_) <= 0.0) throw InvalidPolygon("polygon has non-positive area");
}

ConvexPolygon convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw InvalidPolygon("convex_hull: fewer than 3 distinct points");
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return ConvexPolygon(std::move(hull));
}

double area(const ConvexPolygon& p) { return signed_area(p.vertices()); }

double support(const ConvexPolygon& p, Point theta) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Point& v : p.vertices()) best = std::max(best, dot(v, theta));
    return best;
}

Point barycenter(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    const Point o = v.front();
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const Point b = v[i] - o, c = v[i + 1] - o;
        const double w = cross(b, c);
        a += w;
        cx += w * (b.x + c.x);
        cy += w * (b.y + c.y);
    }
    return {o.x + cx / (3.0 * a), o.y + cy / (3.0 * a)};
}

ConvexPolygon translate(const ConvexPolygon& p, Point v) {
    std::vector<Point> out;
    out.reserve(p.size());
    for (const Point& q : p.vertices()) out.push_back(q + v);
    return ConvexPolygon(std::move(out));
}

ConvexPolygon scale(const ConvexPolygon& p, double s) {
    require(s > 0.0, "scale: factor must be positive");
    std::vector<Point> out;
    out.reserve(p.size());
    for (const Point& q : p.vertices()) out.push_back(s * q);
    return ConvexPolygon(std::move(out));
}

ConvexPolygon reflect(const ConvexPolygon& p) {
    // Negation is a rotation by pi, so CCW order is preserved.
    std::vector<Point> out;
    out.reserve(p.size());
    for (const Point& q : p.vertices()) out.push_back(-1.0 * q);
    return ConvexPolygon(std::move(out));
}

ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
    const auto& a = p.vertices();
    const auto& b = q.vertices();
    const std::size_t n = a.size(), m = b.size();
    const std::size_t ia = bottom_index(a), ib = bottom_index(b);
    std::vector<Point> out;
    out.reserve(n + m);
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        out.push_back(a[(ia + i) % n] + b[(ib + j) % m]);
        const Point ea = a[(ia + i + 1) % n] - a[(ia + i) % n];
        const Point eb = b[(ib + j + 1) % m] - b[(ib + j) % m];
        if (j == m) {
            ++i;
        } else if (i == n) {
            ++j;
        } else {
            const double c = cross(ea, eb);
            if (c > 0.0) {
                ++i;
            } else if (c < 0.0) {
                ++j;
            } else {
                ++i;
                ++j;
            }
        }
    }
    return ConvexPolygon(std::move(out));
}

ConvexPolygon minkowski_sum(const ConvexPolygon& p, Point v) { return translate(p, v); }

std::optional<ConvexPolygon> clip(const ConvexPolygon& p, const HalfPlane& h) {
    const auto& v = p.vertices();
    std::vector<Point> out;
    out.reserve(v.size() + 1);
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point a = v[i], b = v[(i + 1) % m];
        const double da = dot(h.normal, a) - h.offset;
        const double db = dot(h.normal, b) - h.offset;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    if (out.size() < 3) return std::nullopt;
    return make_if_nondegenerate(std::move(out));
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& p, const ConvexPolygon& q) {
    std::optional<ConvexPolygon> cur = p;
    const auto& w = q.vertices();
    const std::size_t m = w.size();
    for (std::size_t i = 0; i < m && cur; ++i) {
        const Point e = w[(i + 1) % m] - w[i];
        const Point outward{e.y, -e.x};
        cur = clip(*cur, {outward, dot(outward, w[i])});
    }
    return cur;
}

ConvexPolygon polar(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    const std::size_t m = v.size();
    std::vector<Point> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point e = v[(i + 1) % m] - v[i];
        const Point outward{e.y, -e.x};
        const double c = dot(outward, v[i]);
        if (c / norm(outward) <= 1e-9) throw InvalidArgument("polar: origin is not in the interior");
        out.push_back((1.0 / c) * outward);
    }
    return ConvexPolygon(std::move(out));
}

double rogers_shephard_ratio(const ConvexPolygon& p) {
    return area(minkowski_sum(p, reflect(p))) / area(p);
}

double milman_pajor_ratio(const ConvexPolygon& p) {
    const Point b = barycenter(p);
    require(std::hypot(b.x, b.y) <= 1e-9, "milman_pajor_ratio: barycenter must be at the origin");
    const auto sym = intersect(p, reflect(p));
    // The origin is interior, so the symmetric part is never empty.
    if (!sym) throw InvalidPolygon("milman_pajor_ratio: empty symmetric part");
    return area(*sym) / area(p);
}

ConvexPolygon regular_polygon(std::size_t m, double circumradius, double phase) {
    require(m >= 3, "regular_polygon: need at least 3 vertices");
    require(circumradius > 0.0, "regular_polygon: radius must be positive");
    std::vector<Point> v;
    for (std::size_t k = 0; k < m; ++k) {
        const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        v.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return ConvexPolygon(std::move(v));
}

ZpPolygon zp_polygon(const Matrix& data, double p, std::size_t angle_count) {
    require(data.cols() == 2, "zp_polygon: batch must be planar");
    require(angle_count >= 16, "zp_polygon: need at least 16 angles");
    std::vector<Direction> dirs;
    dirs.reserve(angle_count);
    for (std::size_t k = 0; k < angle_count; ++k) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angle_count);
        dirs.emplace_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    const double ps[] = {p};
    const auto prof = support_profile(data, dirs, ps);
    std::vector<double> h(angle_count);
    double hmax = 0.0;
    for (std::size_t k = 0; k < angle_count; ++k) {
        h[k] = prof[k][0].zp.value;
        hmax = std::max(hmax, h[k]);
    }
    const double box = 4.0 * hmax + 1.0;
    std::optional<ConvexPolygon> body = ConvexPolygon({{-box, -box}, {box, -box}, {box, box}, {-box, box}});
    for (std::size_t k = 0; k < angle_count && body; ++k) {
        const auto& c = dirs[k].coords();
        body = clip(*body, {{c[0], c[1]}, h[k]});
    }
    if (!body) throw DegenerateEstimate("zp_polygon: empty body");
    const double vr = std::sqrt(area(*body) / std::numbers::pi);
    return {std::move(*body), vr, std::move(h)};
}

void write_polygon(std::ostream& out, const ConvexPolygon& p) {
    const auto old = out.precision(17);
    for (const Point& v : p.vertices()) out << v.x << ' ' << v.y << '\n';
    out.precision(old);
}

ConvexPolygon read_polygon(std::istream& in) {
    std::vector<Point> v;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Point pt;
        if (!(ls >> pt.x)) continue;
        if (!(ls >> pt.y)) throw InvalidPolygon("read_polygon: expected \"x y\" per line");
        std::string extra;
        if (ls >> extra) throw InvalidPolygon("read_polygon: trailing data on line");
        v.push_back(pt);
    }
    return ConvexPolygon(std::move(v));
}

}  // namespace tlab::poly

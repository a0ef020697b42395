#include "bimcheck/model/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bimcheck::geom {

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(Point2 p, Point2 a, Point2 b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

Point2 vertex(std::span<const Point2> poly, std::size_t i) { return poly[i % poly.size()]; }

}  // namespace

double norm(Point2 v) { return std::hypot(v.x, v.y); }

double signed_area(std::span<const Point2> poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        twice += cross(poly[i], vertex(poly, i + 1));
    }
    return twice / 2.0;
}

double area(std::span<const Point2> poly) { return std::abs(signed_area(poly)); }

Point2 centroid(std::span<const Point2> poly) {
    const double a = signed_area(poly);
    if (a == 0.0) {
        Point2 sum;
        for (const auto& p : poly) sum = sum + p;
        return poly.empty() ? sum : (1.0 / static_cast<double>(poly.size())) * sum;
    }
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2 p = poly[i];
        const Point2 q = vertex(poly, i + 1);
        const double w = cross(p, q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

bool is_simple(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    if (signed_area(poly) == 0.0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (poly[i] == vertex(poly, i + 1)) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a0 = poly[i];
        const Point2 a1 = vertex(poly, i + 1);
        // Consecutive edges must not fold back over each other.
        const Point2 a2 = vertex(poly, i + 2);
        if (cross(a1 - a0, a2 - a1) == 0.0 && dot(a1 - a0, a2 - a1) < 0.0) return false;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
            if (segments_intersect(a0, a1, poly[j], vertex(poly, j + 1))) return false;
        }
    }
    return true;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    const int o1 = orientation(a0, a1, b0);
    const int o2 = orientation(a0, a1, b1);
    const int o3 = orientation(b0, b1, a0);
    const int o4 = orientation(b0, b1, a1);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(b0, a0, a1)) return true;
    if (o2 == 0 && on_segment(b1, a0, a1)) return true;
    if (o3 == 0 && on_segment(a0, b0, b1)) return true;
    if (o4 == 0 && on_segment(a1, b0, b1)) return true;
    return false;
}

double segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

bool point_in_polygon(Point2 p, std::span<const Point2> poly, double boundary_eps) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = poly[i];
        const Point2 b = poly[j];
        if (point_segment_distance(p, a, b) <= boundary_eps) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double polygon_distance(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    // Containment without boundary crossings still means overlap.
    if (point_in_polygon(a[0], b, 0.0) || point_in_polygon(b[0], a, 0.0)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Point2 a0 = a[i];
        const Point2 a1 = vertex(a, i + 1);
        for (std::size_t j = 0; j < b.size(); ++j) {
            best = std::min(best, segment_distance(a0, a1, b[j], vertex(b, j + 1)));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

Polygon clip_to_convex(std::span<const Point2> subject, std::span<const Point2> clip) {
    Polygon window(clip.begin(), clip.end());
    if (signed_area(window) < 0.0) std::reverse(window.begin(), window.end());

    Polygon output(subject.begin(), subject.end());
    for (std::size_t i = 0; i < window.size() && !output.empty(); ++i) {
        const Point2 c0 = window[i];
        const Point2 c1 = window[(i + 1) % window.size()];
        const Point2 edge = c1 - c0;
        auto side = [&](Point2 p) { return cross(edge, p - c0); };

        Polygon input;
        input.swap(output);
        for (std::size_t k = 0; k < input.size(); ++k) {
            const Point2 cur = input[k];
            const Point2 prev = input[(k + input.size() - 1) % input.size()];
            const double s_cur = side(cur);
            const double s_prev = side(prev);
            if (s_cur >= 0.0) {
                if (s_prev < 0.0) {
                    const double t = s_prev / (s_prev - s_cur);
                    output.push_back(prev + t * (cur - prev));
                }
                output.push_back(cur);
            } else if (s_prev >= 0.0) {
                const double t = s_prev / (s_prev - s_cur);
                output.push_back(prev + t * (cur - prev));
            }
        }
    }
    return output;
}

double overlap_area(std::span<const Point2> subject, std::span<const Point2> convex_clip) {
    return area(clip_to_convex(subject, convex_clip));
}

Polygon rectangle(Point2 min, Point2 max) {
    return {{min.x, min.y}, {max.x, min.y}, {max.x, max.y}, {min.x, max.y}};
}

Polygon plan_rectangle(const Box3& box) {
    return rectangle({box.min.x, box.min.y}, {box.max.x, box.max.y});
}

}  // namespace bimcheck::geom

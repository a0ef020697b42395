#pragma once

#include <span>
#include <vector>

namespace bimcheck::geom {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

// Axis-aligned box; min <= max on every axis.
struct Box3 {
    Point3 min;
    Point3 max;

    double size_x() const { return max.x - min.x; }
    double size_y() const { return max.y - min.y; }
    Point2 plan_center() const { return {(min.x + max.x) / 2.0, (min.y + max.y) / 2.0}; }

    friend bool operator==(const Box3&, const Box3&) = default;
};

using Polygon = std::vector<Point2>;

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 v);

// Shoelace sum; positive for counter-clockwise rings.
double signed_area(std::span<const Point2> poly);
double area(std::span<const Point2> poly);
Point2 centroid(std::span<const Point2> poly);

// True when no two non-adjacent edges touch and no adjacent edges fold back.
bool is_simple(std::span<const Point2> poly);

double point_segment_distance(Point2 p, Point2 a, Point2 b);
bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1);
double segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

// Boundary points (within boundary_eps) count as inside.
bool point_in_polygon(Point2 p, std::span<const Point2> poly, double boundary_eps = 1e-6);

// Minimum boundary-to-boundary distance, 0 when the polygons touch or overlap.
double polygon_distance(std::span<const Point2> a, std::span<const Point2> b);

// Part of `subject` inside the convex polygon `clip` (Sutherland-Hodgman).
Polygon clip_to_convex(std::span<const Point2> subject, std::span<const Point2> clip);
double overlap_area(std::span<const Point2> subject, std::span<const Point2> convex_clip);

Polygon rectangle(Point2 min, Point2 max);
Polygon plan_rectangle(const Box3& box);

}  // namespace bimcheck::geom

#include <doctest.h>

#include "bimcheck/model/geometry.hpp"

using namespace bimcheck::geom;

TEST_CASE("shoelace area and orientation") {
    const Polygon square = rectangle({0, 0}, {2, 3});
    CHECK(signed_area(square) == doctest::Approx(6.0));
    Polygon cw(square.rbegin(), square.rend());
    CHECK(signed_area(cw) == doctest::Approx(-6.0));
    CHECK(area(cw) == doctest::Approx(6.0));
}

TEST_CASE("L-shaped hexagon area matches a hand decomposition") {
    // 15 x 8 slab plus an 8 x 7 wing.
    const Polygon l = {{20, 0}, {35, 0}, {35, 8}, {28, 8}, {28, 15}, {20, 15}};
    CHECK(area(l) == doctest::Approx(15.0 * 8.0 + 8.0 * 7.0));
    CHECK(is_simple(l));
}

TEST_CASE("simplicity check") {
    const Polygon bowtie = {{0, 0}, {2, 2}, {2, 0}, {0, 2}};
    CHECK_FALSE(is_simple(bowtie));
    const Polygon collinear = {{0, 0}, {1, 0}, {2, 0}};
    CHECK_FALSE(is_simple(collinear));
}

TEST_CASE("point in polygon counts the boundary as inside") {
    const Polygon sq = rectangle({0, 0}, {10, 10});
    CHECK(point_in_polygon({5, 5}, sq));
    CHECK(point_in_polygon({0, 5}, sq));
    CHECK(point_in_polygon({10, 10}, sq));
    CHECK_FALSE(point_in_polygon({10.001, 5}, sq));
    const Polygon l = {{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 4}, {0, 4}};
    CHECK_FALSE(point_in_polygon({3, 3}, l));
    CHECK(point_in_polygon({0.5, 3}, l));
}

TEST_CASE("segment and polygon distances") {
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
    CHECK(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    CHECK(segment_distance({0, 0}, {1, 0}, {0, 2}, {1, 2}) == doctest::Approx(2.0));

    const Polygon a = rectangle({0, 0}, {3, 3});
    const Polygon b = rectangle({8, 0}, {11, 3});
    CHECK(polygon_distance(a, b) == doctest::Approx(5.0));
    const Polygon diag = rectangle({6, 7}, {7, 8});
    CHECK(polygon_distance(a, diag) == doctest::Approx(5.0));
    const Polygon inner = rectangle({1, 1}, {2, 2});
    CHECK(polygon_distance(a, inner) == 0.0);
    CHECK(polygon_distance(a, rectangle({3, 0}, {4, 1})) == 0.0);
}

TEST_CASE("convex clipping and overlap area") {
    const Polygon a = rectangle({0, 0}, {4, 4});
    const Polygon b = rectangle({2, 2}, {6, 6});
    CHECK(overlap_area(a, b) == doctest::Approx(4.0));
    CHECK(overlap_area(a, rectangle({5, 5}, {6, 6})) == doctest::Approx(0.0));
    CHECK(area(clip_to_convex(a, rectangle({-1, -1}, {5, 5}))) == doctest::Approx(16.0));
}

TEST_CASE("centroid and plan rectangle") {
    const Polygon sq = rectangle({0, 0}, {4, 2});
    const Point2 c = centroid(sq);
    CHECK(c.x == doctest::Approx(2.0));
    CHECK(c.y == doctest::Approx(1.0));
    const Box3 box{{1, 2, 0}, {3, 5, 1}};
    CHECK(area(plan_rectangle(box)) == doctest::Approx(6.0));
    CHECK(box.plan_center() == Point2{2, 3.5});
}

#include "bimcheck/model/spatial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace bimcheck {

namespace {

// Overlaps below this many square millimeters are treated as touching.
constexpr double kOverlapSlackMm2 = 1.0;

bool is_obstacle(Category c) {
    return c == Category::Wall || c == Category::PlumbingFixture || c == Category::Stair ||
           c == Category::Railing;
}

std::optional<geom::Box3> plan_bounds(const Element& e) {
    if (e.geometry.bbox) return e.geometry.bbox;
    if (e.geometry.footprint) {
        const auto& fp = *e.geometry.footprint;
        geom::Box3 b{{fp[0].x, fp[0].y, 0.0}, {fp[0].x, fp[0].y, 0.0}};
        for (const auto& p : fp) {
            b.min.x = std::min(b.min.x, p.x);
            b.min.y = std::min(b.min.y, p.y);
            b.max.x = std::max(b.max.x, p.x);
            b.max.y = std::max(b.max.y, p.y);
        }
        return b;
    }
    return std::nullopt;
}

}  // namespace

std::optional<geom::Point2> reference_point(const Element& e) {
    if (e.geometry.location) return geom::Point2{e.geometry.location->x, e.geometry.location->y};
    if (e.geometry.bbox) return e.geometry.bbox->plan_center();
    if (e.geometry.footprint) return geom::centroid(*e.geometry.footprint);
    return std::nullopt;
}

std::optional<geom::Polygon> plan_polygon(const Element& e) {
    if (e.geometry.footprint) return e.geometry.footprint;
    if (e.geometry.bbox) return geom::plan_rectangle(*e.geometry.bbox);
    return std::nullopt;
}

std::optional<double> plan_width(const Element& e) {
    const auto b = plan_bounds(e);
    if (!b) return std::nullopt;
    return std::min(b->size_x(), b->size_y());
}

bool room_contains(const Element& room, const Element& e) {
    if (room.category != Category::Room || !room.geometry.footprint) return false;
    if (room.level_id != e.level_id) return false;
    const auto p = reference_point(e);
    return p && geom::point_in_polygon(*p, *room.geometry.footprint);
}

const Element* containing_room(const BuildingModel& model, const Element& e) {
    for (const Element& room : model.elements()) {
        if (&room != &e && room_contains(room, e)) return &room;
    }
    return nullptr;
}

std::optional<double> level_height(const BuildingModel& model, const Element& e) {
    const Level* own = model.find_level(e.level_id);
    if (own == nullptr) return std::nullopt;
    const Level* above = model.level_above(*own);
    if (above == nullptr) return std::nullopt;
    return above->elevation.value - own->elevation.value;
}

std::optional<double> footprint_area(const Element& e) {
    if (!e.geometry.footprint) return std::nullopt;
    return geom::area(*e.geometry.footprint);
}

std::optional<geom::Polygon> clearance_rectangle(const Element& fixture, double depth_mm) {
    const auto bounds = plan_bounds(fixture);
    if (!bounds || !fixture.geometry.facing) return std::nullopt;
    const geom::Point2 f = *fixture.geometry.facing;
    const geom::Point2 side{-f.y, f.x};
    const double dx = bounds->size_x();
    const double dy = bounds->size_y();
    const double half_depth = (std::abs(dx * f.x) + std::abs(dy * f.y)) / 2.0;
    const double half_width = (std::abs(dx * side.x) + std::abs(dy * side.y)) / 2.0;
    const geom::Point2 front = bounds->plan_center() + half_depth * f;
    const geom::Point2 a = front - half_width * side;
    const geom::Point2 b = front + half_width * side;
    return geom::Polygon{a, b, b + depth_mm * f, a + depth_mm * f};
}

std::string clearance_inapplicable_reason(const BuildingModel& model, const Element& fixture) {
    if (!fixture.geometry.facing) return "fixture has no facing direction";
    if (!plan_bounds(fixture)) return "fixture has no bbox or footprint";
    if (containing_room(model, fixture) == nullptr) return "fixture is not inside any room";
    return {};
}

ClearanceCheck check_clearance(const BuildingModel& model, const Element& fixture, double depth_mm) {
    const auto rect = clearance_rectangle(fixture, depth_mm);
    const Element* room = containing_room(model, fixture);
    if (!rect || room == nullptr) return {false, clearance_inapplicable_reason(model, fixture)};

    const double rect_area = geom::area(*rect);
    const double inside = geom::overlap_area(*room->geometry.footprint, *rect);
    if (rect_area - inside > kOverlapSlackMm2) {
        return {false, fmt::format("clear space extends outside room {}", room->id)};
    }
    for (const Element& other : model.elements()) {
        if (&other == &fixture || other.level_id != fixture.level_id || !is_obstacle(other.category)) {
            continue;
        }
        const auto outline = plan_polygon(other);
        if (!outline) continue;
        if (geom::overlap_area(*outline, *rect) > kOverlapSlackMm2) {
            return {false, fmt::format("clear space obstructed by {} {}", to_string(other.category),
                                       other.id)};
        }
    }
    return {true, {}};
}

double clear_depth(const BuildingModel& model, const Element& fixture) {
    if (check_clearance(model, fixture, kClearDepthSearchCapMm).clear) return kClearDepthSearchCapMm;
    double lo = 0.0;
    double hi = kClearDepthSearchCapMm;
    while (hi - lo > 0.01) {
        const double mid = (lo + hi) / 2.0;
        if (check_clearance(model, fixture, mid).clear) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace bimcheck

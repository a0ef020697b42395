#pragma once

#include <optional>
#include <string>

#include "bimcheck/model/model.hpp"

namespace bimcheck {

// Plan point used for containment: location, else bbox center, else footprint centroid.
std::optional<geom::Point2> reference_point(const Element& e);

// Plan outline: footprint, else the bbox rectangle.
std::optional<geom::Polygon> plan_polygon(const Element& e);

// Smaller horizontal extent of the element's bbox (or footprint bounds), in mm.
std::optional<double> plan_width(const Element& e);

// First room in model order, on the element's level, whose footprint contains
// the element's reference point. Boundary counts as inside.
const Element* containing_room(const BuildingModel& model, const Element& e);

// True when `room` has a footprint containing e's reference point and both share a level.
bool room_contains(const Element& room, const Element& e);

// Level above minus the element's own level elevation, in mm.
std::optional<double> level_height(const BuildingModel& model, const Element& e);

// Footprint area in square millimeters.
std::optional<double> footprint_area(const Element& e);

// Clearance in front of a fixture: a rectangle as wide as the fixture,
// extending `depth_mm` along its facing vector from its front edge.
std::optional<geom::Polygon> clearance_rectangle(const Element& fixture, double depth_mm);

struct ClearanceCheck {
    bool clear = false;
    std::string reason;  // empty when clear
};

// The rectangle must not overlap any obstacle (walls, plumbing fixtures, stairs,
// railings on the same level) and must stay inside the fixture's room.
// Requires facing, a plan outline and a containing room; callers check
// clearance_applicable() first.
ClearanceCheck check_clearance(const BuildingModel& model, const Element& fixture, double depth_mm);

// Empty string when the fixture has the data the clearance test needs,
// otherwise the reason it cannot be evaluated.
std::string clearance_inapplicable_reason(const BuildingModel& model, const Element& fixture);

inline constexpr double kClearDepthSearchCapMm = 120.0 * kMillimetersPerInch;

// Largest depth (capped) for which check_clearance passes, to 0.01 mm.
double clear_depth(const BuildingModel& model, const Element& fixture);

}  // namespace bimcheck

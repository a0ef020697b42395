#include <algorithm>
#include <optional>

#include <fmt/format.h>

#include "bimcheck/model/spatial.hpp"
#include "bimcheck/rules/rules.hpp"

namespace bimcheck::rules {

namespace {

// A typed parameter lookup that explains why a value is unusable.
template <typename T>
struct Lookup {
    std::optional<T> value;
    std::string problem;
};

template <typename T>
Lookup<T> get_param(const Element& e, std::string_view name, ParamKind expected) {
    const ParamValue* v = e.find_param(name);
    if (v == nullptr) return {std::nullopt, fmt::format("missing parameter '{}'", name)};
    if (const T* typed = std::get_if<T>(v)) return {*typed, {}};
    return {std::nullopt, fmt::format("parameter '{}' is a {}, expected a {}", name,
                                      to_string(kind_of(*v)), to_string(expected))};
}

Lookup<Quantity> length_param(const Element& e, std::string_view name) {
    auto l = get_param<LengthQuantity>(e, name, ParamKind::length);
    if (!l.value) return {std::nullopt, l.problem};
    return {Quantity::length(*l.value), {}};
}

Lookup<std::string> text_param(const Element& e, std::string_view name) {
    return get_param<std::string>(e, name, ParamKind::text);
}

Finding element_finding(const Element& e, Status status, std::string note = {}) {
    Finding f;
    f.element_id = e.id;
    f.status = status;
    f.note = std::move(note);
    return f;
}

Finding subject_finding(std::string subject, Status status, std::string note = {}) {
    Finding f;
    f.subject = std::move(subject);
    f.status = status;
    f.note = std::move(note);
    return f;
}

std::string fixture_type(const Element& e) {
    const auto t = text_param(e, "fixture_type");
    return t.value.value_or("");
}

// Check measured >= required for each named dimension; every pair goes into the finding.
struct MinimumChecks {
    std::vector<std::tuple<std::string, Quantity, Quantity>> items;

    void add(std::string name, Quantity measured, Quantity required) {
        items.emplace_back(std::move(name), measured, required);
    }

    Finding verdict(const Element& e) const {
        Finding f = element_finding(e, Status::compliant);
        for (const auto& [name, measured, required] : items) {
            if (!at_least(measured, required)) f.status = Status::non_compliant;
            f.measured.emplace(name, measured);
            f.required.emplace(name, required);
        }
        return f;
    }
};

CheckResult minimum_width_rule(const BuildingModel& model, int rule_id, Category category,
                               const Quantity& min_width) {
    CheckResult result{rule_id, {}};
    for (const Element* e : collect(model, category)) {
        const auto width = length_param(*e, "width");
        if (!width.value) {
            result.findings.push_back(element_finding(*e, Status::not_applicable, width.problem));
            continue;
        }
        MinimumChecks checks;
        checks.add("width", *width.value, min_width);
        result.findings.push_back(checks.verdict(*e));
    }
    return result;
}

}  // namespace

CheckResult check_exit_openings(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{1, {}};
    for (const Element* door : collect(model, Category::Door)) {
        if (const auto exit = get_param<bool>(*door, "exit", ParamKind::flag); exit.value && !*exit.value) {
            result.findings.push_back(element_finding(*door, Status::not_applicable, "not a required exit"));
            continue;
        }
        const auto width = length_param(*door, "width");
        const auto height = length_param(*door, "height");
        if (!width.value || !height.value) {
            result.findings.push_back(element_finding(
                *door, Status::not_applicable, !width.value ? width.problem : height.problem));
            continue;
        }
        MinimumChecks checks;
        checks.add("width", *width.value, config.threshold("exit_min_width"));
        checks.add("height", *height.value, config.threshold("exit_min_height"));
        if (const auto clear = length_param(*door, "clear_width"); clear.value) {
            checks.add("clear_width", *clear.value, config.threshold("exit_min_clear_width"));
        }
        result.findings.push_back(checks.verdict(*door));
    }
    return result;
}

CheckResult check_stair_width(const BuildingModel& model, const RuleConfig& config) {
    return minimum_width_rule(model, 2, Category::Stair, config.threshold("stair_min_width"));
}

CheckResult check_guard_height(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{3, {}};
    const Quantity trigger = config.threshold("guard_trigger_height");
    for (const Element* rail : collect(model, Category::Railing)) {
        const auto surface = length_param(*rail, "walking_surface_height");
        if (!surface.value) {
            result.findings.push_back(element_finding(*rail, Status::not_applicable, surface.problem));
            continue;
        }
        if (at_most(*surface.value, trigger)) {
            result.findings.push_back(element_finding(
                *rail, Status::not_applicable,
                fmt::format("walking surface is not more than {} above the floor or grade",
                            format_quantity(trigger))));
            continue;
        }
        const auto height = length_param(*rail, "height");
        if (!height.value) {
            result.findings.push_back(element_finding(*rail, Status::not_applicable, height.problem));
            continue;
        }
        MinimumChecks checks;
        checks.add("guard_height", *height.value, config.threshold("guard_min_height"));
        result.findings.push_back(checks.verdict(*rail));
    }
    return result;
}

CheckResult check_ceiling_height(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{4, {}};
    for (const Element* room : collect(model, Category::Room)) {
        if (!is_habitable(*room, config)) continue;
        const auto storey = level_height(model, *room);
        if (!storey) {
            result.findings.push_back(element_finding(*room, Status::not_applicable, "no level above"));
            continue;
        }
        double allowance = 0.0;
        if (room->has_param("ceiling_allowance")) {
            const auto a = length_param(*room, "ceiling_allowance");
            if (!a.value) {
                result.findings.push_back(element_finding(*room, Status::not_applicable, a.problem));
                continue;
            }
            allowance = a.value->value;
        }
        MinimumChecks checks;
        checks.add("ceiling_height", Quantity::length_mm(*storey - allowance),
                   config.threshold("ceiling_min_height"));
        result.findings.push_back(checks.verdict(*room));
    }
    return result;
}

CheckResult check_window_wall_ratio(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{5, {}};
    double window_area = 0.0;
    double wall_area = 0.0;
    int skipped = 0;
    for (const Element* w : collect(model, Category::Window)) {
        const auto width = length_param(*w, "width");
        const auto height = length_param(*w, "height");
        if (!width.value || !height.value) {
            ++skipped;
            continue;
        }
        window_area += width.value->value * height.value->value;
    }
    for (const Element* w : collect(model, Category::Wall)) {
        const auto exterior = get_param<bool>(*w, "exterior", ParamKind::flag);
        if (!exterior.value || !*exterior.value) continue;
        const auto length = length_param(*w, "length");
        const auto height = length_param(*w, "height");
        if (!length.value || !height.value) {
            ++skipped;
            continue;
        }
        wall_area += length.value->value * height.value->value;
    }

    const std::string subject = "window-to-wall ratio";
    if (wall_area <= 0.0) {
        result.findings.push_back(subject_finding(subject, Status::not_applicable, "no exterior wall area"));
        return result;
    }
    const Quantity ratio = Quantity::number(window_area / wall_area);
    const Quantity limit = config.threshold("window_wall_ratio_max");
    Finding f = subject_finding(subject, at_most(ratio, limit) ? Status::compliant : Status::non_compliant);
    f.measured.emplace("ratio", ratio);
    f.required.emplace("ratio", limit);
    f.note = fmt::format("windows {} / exterior walls {}", format_quantity(Quantity::area_mm2(window_area)),
                         format_quantity(Quantity::area_mm2(wall_area)));
    if (skipped > 0) f.note += fmt::format("; {} element(s) skipped for missing dimensions", skipped);
    result.findings.push_back(std::move(f));
    return result;
}

CheckResult check_room_areas(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{6, {}};
    std::optional<Quantity> largest;
    for (const Element* room : collect(model, Category::Room)) {
        if (!is_habitable(*room, config)) continue;
        const auto a = footprint_area(*room);
        if (!a) {
            result.findings.push_back(element_finding(*room, Status::not_applicable, "room has no footprint"));
            continue;
        }
        const Quantity area = Quantity::area_mm2(*a);
        if (!largest || area.value > largest->value) largest = area;
        if (is_kitchen(*room, config)) continue;
        MinimumChecks checks;
        checks.add("area", area, config.threshold("room_min_area"));
        result.findings.push_back(checks.verdict(*room));
    }

    const std::string subject = "largest habitable room";
    if (!largest) {
        result.findings.push_back(subject_finding(subject, Status::not_applicable, "no habitable rooms"));
        return result;
    }
    const Quantity required = config.threshold("primary_room_min_area");
    Finding f = subject_finding(subject, at_least(*largest, required) ? Status::compliant : Status::non_compliant);
    f.measured.emplace("area", *largest);
    f.required.emplace("area", required);
    result.findings.push_back(std::move(f));
    return result;
}

CheckResult check_fixture_clearance(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{7, {}};
    const Quantity depth = config.threshold("fixture_clear_depth");
    for (const Element* fixture : collect(model, Category::PlumbingFixture)) {
        if (!needs_front_clearance(fixture_type(*fixture))) continue;
        if (auto reason = clearance_inapplicable_reason(model, *fixture); !reason.empty()) {
            result.findings.push_back(element_finding(*fixture, Status::not_applicable, std::move(reason)));
            continue;
        }
        const ClearanceCheck check = check_clearance(model, *fixture, depth.value);
        Finding f = element_finding(*fixture, check.clear ? Status::compliant : Status::non_compliant,
                                    check.reason);
        f.measured.emplace("clear_depth", Quantity::length_mm(clear_depth(model, *fixture)));
        f.required.emplace("clear_depth", depth);
        result.findings.push_back(std::move(f));
    }
    return result;
}

CheckResult check_toilet_facilities(const BuildingModel& model, const RuleConfig&) {
    CheckResult result{8, {}};
    int water_closets = 0;
    int lavatories = 0;
    int bathing = 0;
    for (const Element* fixture : collect(model, Category::PlumbingFixture)) {
        const std::string type = fixture_type(*fixture);
        if (type == "water_closet") ++water_closets;
        if (type == "lavatory") ++lavatories;
        if (type == "bathtub" || type == "shower") ++bathing;
    }
    auto presence = [&](std::string subject, int count) {
        Finding f = subject_finding(std::move(subject), count >= 1 ? Status::compliant : Status::non_compliant);
        f.measured.emplace("count", Quantity::number(count));
        f.required.emplace("count", Quantity::number(1));
        result.findings.push_back(std::move(f));
    };
    presence("water closet", water_closets);
    presence("lavatory", lavatories);
    presence("bathtub or shower", bathing);
    return result;
}

CheckResult check_kitchen_sink(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{9, {}};
    const auto fixtures = collect(model, Category::PlumbingFixture);
    for (const Element* room : collect(model, Category::Room)) {
        if (!is_kitchen(*room, config)) continue;
        if (!room->geometry.footprint) {
            result.findings.push_back(element_finding(*room, Status::not_applicable, "room has no footprint"));
            continue;
        }
        const auto sinks = std::count_if(fixtures.begin(), fixtures.end(), [&](const Element* f) {
            return fixture_type(*f) == "sink" && room_contains(*room, *f);
        });
        Finding f = element_finding(*room, sinks >= 1 ? Status::compliant : Status::non_compliant,
                                    sinks >= 1 ? "" : "no sink inside the kitchen");
        f.measured.emplace("sinks", Quantity::number(static_cast<double>(sinks)));
        f.required.emplace("sinks", Quantity::number(1));
        result.findings.push_back(std::move(f));
    }
    return result;
}

CheckResult check_floor_panels(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{10, {}};
    for (const Element* floor : collect(model, Category::Floor)) {
        const auto material = text_param(*floor, "material");
        const auto thickness = length_param(*floor, "thickness");
        if (!material.value || !thickness.value) {
            result.findings.push_back(element_finding(
                *floor, Status::not_applicable, !material.value ? material.problem : thickness.problem));
            continue;
        }
        MinimumChecks checks;
        checks.add("material_match", Quantity::number(allowed_floor_material(*material.value, config) ? 1 : 0),
                   Quantity::number(1));
        checks.add("thickness", *thickness.value, config.threshold("floor_panel_min_thickness"));
        checks.add("span_rating", Quantity::number(floor->has_param("span_rating") ? 1 : 0),
                   Quantity::number(1));
        Finding f = checks.verdict(*floor);
        if (f.status == Status::non_compliant) {
            std::vector<std::string> problems;
            if (!allowed_floor_material(*material.value, config)) {
                problems.push_back(fmt::format("material '{}' is not an allowed panel", *material.value));
            }
            if (!at_least(*thickness.value, config.threshold("floor_panel_min_thickness"))) {
                problems.push_back("panel too thin");
            }
            if (!floor->has_param("span_rating")) problems.push_back("missing span_rating");
            f.note = fmt::format("{}", fmt::join(problems, "; "));
        }
        result.findings.push_back(std::move(f));
    }
    return result;
}

CheckResult check_footing_spacing(const BuildingModel& model, const RuleConfig&) {
    CheckResult result{11, {}};
    struct Footing {
        const Element* element;
        geom::Polygon outline;
        double width;
    };
    std::vector<Footing> footings;
    for (const Element* e : collect(model, Category::Footing)) {
        auto outline = plan_polygon(*e);
        if (!outline) {
            result.findings.push_back(element_finding(*e, Status::not_applicable, "footing has no geometry"));
            continue;
        }
        footings.push_back({e, std::move(*outline), *plan_width(*e)});
    }

    const std::string summary = "footing spacing";
    if (footings.size() < 2) {
        result.findings.push_back(
            subject_finding(summary, Status::not_applicable, "fewer than two footings with geometry"));
        return result;
    }
    bool any_violation = false;
    for (std::size_t i = 0; i < footings.size(); ++i) {
        for (std::size_t j = i + 1; j < footings.size(); ++j) {
            const Quantity distance = Quantity::length(bimcheck::polygon_distance(footings[i].outline, footings[j].outline));
            const Quantity required = Quantity::length_mm(std::max(footings[i].width, footings[j].width));
            if (at_least(distance, required)) continue;
            any_violation = true;
            Finding f = subject_finding(
                fmt::format("footings {}/{}", footings[i].element->id, footings[j].element->id),
                Status::non_compliant);
            f.measured.emplace("distance", distance);
            f.required.emplace("distance", required);
            result.findings.push_back(std::move(f));
        }
    }
    if (!any_violation) result.findings.push_back(subject_finding(summary, Status::compliant));
    return result;
}

CheckResult check_ventilation(const BuildingModel& model, const RuleConfig& config) {
    CheckResult result{12, {}};
    const Quantity per_person = config.threshold("ventilation_per_person");
    const double per_sqft = config.threshold("ventilation_per_sqft").value;
    const auto terminals = collect(model, Category::AirTerminal);

    for (const Element* room : collect(model, Category::Room)) {
        if (!is_habitable(*room, config)) continue;
        const auto a = footprint_area(*room);
        if (!a) {
            result.findings.push_back(element_finding(*room, Status::not_applicable, "room has no footprint"));
            continue;
        }
        double occupants = 0.0;
        if (const auto n = get_param<std::uint64_t>(*room, "occupants", ParamKind::count); n.value) {
            occupants = static_cast<double>(*n.value);
        }
        const double required = per_sqft * (*a / kSquareMillimetersPerSquareFoot) + per_person.value * occupants;
        double supplied = 0.0;
        int served_by = 0;
        for (const Element* t : terminals) {
            const auto flow = get_param<FlowRate>(*t, "flow", ParamKind::flow);
            if (!flow.value || containing_room(model, *t) != room) continue;
            supplied += flow.value->cfm;
            ++served_by;
        }
        MinimumChecks checks;
        checks.add("outdoor_air", Quantity::flow_cfm(supplied), Quantity::flow_cfm(required));
        Finding f = checks.verdict(*room);
        if (served_by == 0) f.note = "no air terminals assigned";
        result.findings.push_back(std::move(f));
    }
    for (const Element* t : terminals) {
        const auto flow = get_param<FlowRate>(*t, "flow", ParamKind::flow);
        if (!flow.value) {
            result.findings.push_back(element_finding(*t, Status::not_applicable, flow.problem));
        } else if (containing_room(model, *t) == nullptr) {
            result.findings.push_back(element_finding(*t, Status::not_applicable, "not inside any room"));
        }
    }
    return result;
}

CheckResult check_rule(const BuildingModel& model, int rule_id, const RuleConfig& config) {
    switch (rule_id) {
        case 1: return check_exit_openings(model, config);
        case 2: return check_stair_width(model, config);
        case 3: return check_guard_height(model, config);
        case 4: return check_ceiling_height(model, config);
        case 5: return check_window_wall_ratio(model, config);
        case 6: return check_room_areas(model, config);
        case 7: return check_fixture_clearance(model, config);
        case 8: return check_toilet_facilities(model, config);
        case 9: return check_kitchen_sink(model, config);
        case 10: return check_floor_panels(model, config);
        case 11: return check_footing_spacing(model, config);
        case 12: return check_ventilation(model, config);
        default: throw UnknownRule(rule_id);
    }
}

}  // namespace bimcheck::rules

#include <algorithm>

#include "bimcheck/script/checkscript.hpp"
#include "grammar_ebnf.inc"

namespace bimcheck::script {

std::string_view to_string(Unit u) {
    switch (u) {
        case Unit::mm: return "mm";
        case Unit::in: return "in";
        case Unit::ft: return "ft";
        case Unit::sqft: return "sqft";
        case Unit::sqm: return "sqm";
        case Unit::cfm: return "cfm";
    }
    return "?";
}

std::optional<Unit> parse_unit(std::string_view word) {
    for (const Unit u : {Unit::mm, Unit::in, Unit::ft, Unit::sqft, Unit::sqm, Unit::cfm}) {
        if (to_string(u) == word) return u;
    }
    return std::nullopt;
}

Quantity unit_quantity(double value, Unit unit) {
    switch (unit) {
        case Unit::mm: return Quantity::length_mm(value);
        case Unit::in: return Quantity::length(LengthQuantity::inches(value));
        case Unit::ft: return Quantity::length(LengthQuantity::feet(value));
        case Unit::sqft: return Quantity::area(AreaQuantity::sqft(value));
        case Unit::sqm: return Quantity::area(AreaQuantity::sqm(value));
        case Unit::cfm: return Quantity::flow_cfm(value);
    }
    return Quantity::number(value);
}

std::string_view to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return "+";
        case BinaryOp::sub: return "-";
        case BinaryOp::mul: return "*";
        case BinaryOp::div: return "/";
        case BinaryOp::lt: return "<";
        case BinaryOp::le: return "<=";
        case BinaryOp::gt: return ">";
        case BinaryOp::ge: return ">=";
        case BinaryOp::eq: return "==";
        case BinaryOp::ne: return "!=";
        case BinaryOp::logical_and: return "and";
        case BinaryOp::logical_or: return "or";
    }
    return "?";
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::lex: return "lex";
        case Phase::parse: return "parse";
        case Phase::type: return "type";
        case Phase::runtime: return "runtime";
    }
    return "?";
}

ScriptError::ScriptError(Phase phase, SourcePos pos, std::string message)
    : std::runtime_error(std::string(to_string(phase)) + " error at line " + std::to_string(pos.line) +
                         ", column " + std::to_string(pos.column) + ": " + message),
      phase_(phase),
      pos_(pos),
      message_(std::move(message)) {}

const std::string& grammar_ebnf() {
    static const std::string text = kGrammarEbnf;
    return text;
}

const std::vector<FunctionDoc>& function_docs() {
    static const std::vector<FunctionDoc> docs = {
        {"collect(Category) -> list", "all elements of a category in model order, e.g. collect(Door)"},
        {"filter(list, x => boolean) -> list", "elements for which the predicate holds"},
        {"exists(list, x => boolean) -> boolean", "true when some element satisfies the predicate"},
        {"all(list, x => boolean) -> boolean", "true when every element satisfies the predicate"},
        {"count(list) -> number", "number of elements"},
        {"sum(list, x => quantity) -> quantity", "sum of the lambda over the list; 0 for an empty list"},
        {"largest(list, x => quantity) / smallest(list, x => quantity) -> quantity",
         "extreme value of the lambda over a non-empty list"},
        {"min(a, b) / max(a, b) -> quantity", "smaller or larger of two values of the same dimension"},
        {"abs(q) -> quantity", "absolute value"},
        {"flag(boolean) -> number", "1 when true, 0 when false; records pass/fail evidence"},
        {"text(value) -> text", "display form of a number, quantity, boolean or text"},
        {"threshold(\"name\") -> quantity", "configured code threshold, e.g. threshold(\"exit_min_width\")"},
        {"area(e) -> area", "plan area of an element footprint (runtime error without a footprint)"},
        {"width(e) -> length", "smaller plan dimension of an element's bounding box or footprint"},
        {"distance(a, b) -> length", "shortest plan distance between two elements' outlines"},
        {"contains(room, e) -> boolean", "room footprint contains the element's reference point on the same level"},
        {"has_room(e) -> boolean", "some room contains the element"},
        {"room_of(e) -> element", "first room containing the element (runtime error when none)"},
        {"has_level_above(e) -> boolean", "a higher level exists above the element's level"},
        {"level_height(e) -> length", "elevation of the next level up minus the element's level elevation"},
        {"clearance_applicable(f) -> boolean", "fixture has facing, outline and a containing room"},
        {"clearance(f, depth) -> boolean", "clear rectangle of the given depth in front of the fixture"},
        {"clear_depth(f) -> length", "largest unobstructed depth in front of the fixture"},
        {"is_habitable(room) -> boolean", "habitable room by name or the habitable flag"},
        {"is_kitchen(room) -> boolean", "room name marks a kitchen"},
        {"allowed_material(text) -> boolean", "material is an accepted floor panel material"},
        {"has_footprint(e) / has_bbox(e) / has_location(e) / has_facing(e) -> boolean",
         "whether the element carries that geometry"},
        {"e.param(\"name\") -> value", "parameter value (runtime error when missing)"},
        {"e.param(\"name\", default) -> value", "parameter value, or the default when missing"},
        {"e.has(\"name\") -> boolean", "whether the parameter is present"},
        {"e.id, e.name, e.index, e.level, e.elevation, e.category", "element attributes"},
    };
    return docs;
}

const std::vector<ParamDoc>& parameter_schema() {
    static const std::vector<ParamDoc> schema = {
        {"width", ParamKind::length, "opening, stair or fixture width"},
        {"height", ParamKind::length, "opening height, guard height, wall or window height"},
        {"clear_width", ParamKind::length, "net clear opening width of a door"},
        {"length", ParamKind::length, "wall length"},
        {"thickness", ParamKind::length, "floor panel thickness"},
        {"walking_surface_height", ParamKind::length, "height of the walking surface a railing guards"},
        {"ceiling_allowance", ParamKind::length, "floor and ceiling build-up subtracted from level height"},
        {"exit", ParamKind::flag, "door is an exit door"},
        {"habitable", ParamKind::flag, "room is habitable, overriding its name"},
        {"exterior", ParamKind::flag, "wall is an exterior wall"},
        {"material", ParamKind::text, "floor sheathing material"},
        {"span_rating", ParamKind::text, "panel span rating, e.g. 24/16"},
        {"fixture_type", ParamKind::text, "water_closet, lavatory, bidet, bathtub, shower, sink"},
        {"flow", ParamKind::flow, "supply air flow of a terminal"},
        {"occupants", ParamKind::count, "design occupant count of a room"},
        {"area", ParamKind::area, "declared area"},
    };
    return schema;
}

const ParamDoc* find_parameter(std::string_view name) {
    const auto& s = parameter_schema();
    const auto it = std::find_if(s.begin(), s.end(), [&](const ParamDoc& p) { return p.name == name; });
    return it == s.end() ? nullptr : &*it;
}

}  // namespace bimcheck::script

#include "bimcheck/model/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace bimcheck {

using nlohmann::json;

namespace {

constexpr std::array kCategoryNames = {
    "Door", "Stair", "Railing", "Room", "Wall", "Window", "Floor", "PlumbingFixture", "Footing",
    "AirTerminal",
};

constexpr std::array kParamKindNames = {"length", "area", "number", "flow", "count", "text", "flag"};

// Walks the document with a JSON-pointer-like path so every complaint names its location.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

    const json& node() const { return node_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& problem) const { throw SchemaError(path_, problem); }

    void expect_object(std::initializer_list<std::string_view> allowed) const {
        if (!node_.is_object()) fail("expected an object");
        for (const auto& [key, _] : node_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                throw SchemaError(path_ + "." + key, "unknown key");
            }
        }
    }

    bool has(std::string_view key) const { return node_.contains(key); }

    Reader at(std::string_view key) const {
        auto it = node_.find(key);
        if (it == node_.end()) throw SchemaError(path_ + "." + std::string(key), "missing field");
        return Reader(*it, path_ + "." + std::string(key));
    }

    Reader at(std::size_t index) const {
        return Reader(node_.at(index), fmt::format("{}[{}]", path_, index));
    }

    const json& array() const {
        if (!node_.is_array()) fail("expected an array");
        return node_;
    }

    double number() const {
        if (!node_.is_number()) fail("expected a number");
        const double v = node_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    std::int64_t positive_id() const {
        if (!node_.is_number_integer()) fail("expected an integer id");
        const auto v = node_.get<std::int64_t>();
        if (v <= 0) fail("ids must be positive integers");
        return v;
    }

    std::string text() const {
        if (!node_.is_string()) fail("expected a string");
        return node_.get<std::string>();
    }

    bool flag() const {
        if (!node_.is_boolean()) fail("expected true or false");
        return node_.get<bool>();
    }

private:
    const json& node_;
    std::string path_;
};

struct UnitContext {
    LengthUnit file_units;
    double to_mm(double v) const { return LengthQuantity{v, file_units}.millimeters(); }
};

geom::Point2 read_point2(const Reader& r, const UnitContext& units, bool scale) {
    const json& arr = r.array();
    if (arr.size() != 2) r.fail("expected [x, y]");
    const double x = r.at(std::size_t{0}).number();
    const double y = r.at(std::size_t{1}).number();
    return scale ? geom::Point2{units.to_mm(x), units.to_mm(y)} : geom::Point2{x, y};
}

Geometry read_geometry(const Reader& r, const UnitContext& units) {
    r.expect_object({"bbox", "footprint", "location", "facing"});
    Geometry g;
    if (r.has("bbox")) {
        const Reader b = r.at("bbox");
        if (b.array().size() != 6) b.fail("expected [x1, y1, z1, x2, y2, z2]");
        std::array<double, 6> v{};
        for (std::size_t i = 0; i < 6; ++i) v[i] = units.to_mm(b.at(i).number());
        geom::Box3 box{{std::min(v[0], v[3]), std::min(v[1], v[4]), std::min(v[2], v[5])},
                       {std::max(v[0], v[3]), std::max(v[1], v[4]), std::max(v[2], v[5])}};
        g.bbox = box;
    }
    if (r.has("footprint")) {
        const Reader f = r.at("footprint");
        geom::Polygon poly;
        for (std::size_t i = 0; i < f.array().size(); ++i) {
            poly.push_back(read_point2(f.at(i), units, true));
        }
        if (poly.size() < 3) {
            throw GeometryError(fmt::format("{}: footprint needs at least 3 vertices, got {}",
                                            f.path(), poly.size()));
        }
        if (!geom::is_simple(poly)) {
            throw GeometryError(
                fmt::format("{}: footprint is degenerate or self-intersecting", f.path()));
        }
        if (geom::signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
        g.footprint = std::move(poly);
    }
    if (r.has("location")) {
        const Reader l = r.at("location");
        if (l.array().size() != 3) l.fail("expected [x, y, z]");
        g.location = geom::Point3{units.to_mm(l.at(std::size_t{0}).number()),
                                  units.to_mm(l.at(std::size_t{1}).number()),
                                  units.to_mm(l.at(std::size_t{2}).number())};
    }
    if (r.has("facing")) {
        const Reader f = r.at("facing");
        const geom::Point2 d = read_point2(f, units, false);
        const double len = geom::norm(d);
        if (len == 0.0) throw GeometryError(fmt::format("{}: facing vector is zero", f.path()));
        g.facing = geom::Point2{d.x / len, d.y / len};
    }
    return g;
}

ParamValue read_param(const Reader& r, const UnitContext& units) {
    r.expect_object({"kind", "value", "unit"});
    const std::string kind_name = r.at("kind").text();
    const auto kind = parse_param_kind(kind_name);
    if (!kind) r.at("kind").fail(fmt::format("unknown parameter kind '{}'", kind_name));
    const Reader value = r.at("value");
    auto no_unit = [&] {
        if (r.has("unit")) r.at("unit").fail(fmt::format("{} parameters take no unit", kind_name));
    };

    switch (*kind) {
        case ParamKind::length: {
            LengthUnit unit = units.file_units;
            if (r.has("unit")) {
                const std::string s = r.at("unit").text();
                const auto parsed = parse_length_unit(s);
                if (!parsed) r.at("unit").fail(fmt::format("unknown length unit '{}'", s));
                unit = *parsed;
            }
            const double v = value.number();
            if (v < 0.0) value.fail("lengths must be non-negative");
            return LengthQuantity::mm(LengthQuantity{v, unit}.millimeters());
        }
        case ParamKind::area: {
            AreaUnit unit = units.file_units == LengthUnit::millimeter ? AreaUnit::square_meter
                                                                       : AreaUnit::square_foot;
            if (r.has("unit")) {
                const std::string s = r.at("unit").text();
                const auto parsed = parse_area_unit(s);
                if (!parsed) r.at("unit").fail(fmt::format("unknown area unit '{}'", s));
                unit = *parsed;
            }
            const double v = value.number();
            if (v < 0.0) value.fail("areas must be non-negative");
            return AreaQuantity{v, unit};
        }
        case ParamKind::number:
            no_unit();
            return value.number();
        case ParamKind::flow: {
            if (r.has("unit") && r.at("unit").text() != "cfm") r.at("unit").fail("flows use 'cfm'");
            const double v = value.number();
            if (v < 0.0) value.fail("flows must be non-negative");
            return FlowRate{v};
        }
        case ParamKind::count: {
            no_unit();
            if (!value.node().is_number_integer() || value.node().get<std::int64_t>() < 0) {
                value.fail("expected a non-negative integer");
            }
            return value.node().get<std::uint64_t>();
        }
        case ParamKind::text:
            no_unit();
            return value.text();
        case ParamKind::flag:
            no_unit();
            return value.flag();
    }
    r.fail("unreachable parameter kind");
}

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<Category> parse_category(std::string_view name) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (name == kCategoryNames[i]) return static_cast<Category>(i);
    }
    return std::nullopt;
}

std::string_view to_string(ParamKind kind) {
    return kParamKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ParamKind> parse_param_kind(std::string_view name) {
    for (std::size_t i = 0; i < kParamKindNames.size(); ++i) {
        if (name == kParamKindNames[i]) return static_cast<ParamKind>(i);
    }
    return std::nullopt;
}

ParamKind kind_of(const ParamValue& value) { return static_cast<ParamKind>(value.index()); }

const ParamValue* Element::find_param(std::string_view name) const {
    auto it = params.find(name);
    return it == params.end() ? nullptr : &it->second;
}

BuildingModel::BuildingModel(std::string name, LengthUnit source_units, std::vector<Level> levels,
                             std::vector<Element> elements)
    : name_(std::move(name)),
      source_units_(source_units),
      levels_(std::move(levels)),
      elements_(std::move(elements)) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!level_index_.emplace(levels_[i].id, i).second) {
            throw DuplicateIdError("level", levels_[i].id);
        }
    }
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const Element& e = elements_[i];
        if (!element_index_.emplace(e.id, i).second) throw DuplicateIdError("element", e.id);
        if (!level_index_.contains(e.level_id)) throw DanglingReferenceError(e.id, e.level_id);
    }
}

const Element* BuildingModel::find_element(std::int64_t id) const {
    auto it = element_index_.find(id);
    return it == element_index_.end() ? nullptr : &elements_[it->second];
}

const Level* BuildingModel::find_level(std::int64_t id) const {
    auto it = level_index_.find(id);
    return it == level_index_.end() ? nullptr : &levels_[it->second];
}

std::size_t BuildingModel::index_of(const Element& e) const { return element_index_.at(e.id); }

const Level* BuildingModel::level_above(const Level& level) const {
    const Level* best = nullptr;
    for (const Level& l : levels_) {
        if (l.elevation.value > level.elevation.value &&
            (best == nullptr || l.elevation.value < best->elevation.value)) {
            best = &l;
        }
    }
    return best;
}

SchemaError::SchemaError(std::string path, const std::string& problem)
    : ModelError(fmt::format("schema error at {}: {}", path, problem)), path_(std::move(path)) {}

DuplicateIdError::DuplicateIdError(std::string_view what, std::int64_t id)
    : ModelError(fmt::format("duplicate {} id {}", what, id)), id_(id) {}

DanglingReferenceError::DanglingReferenceError(std::int64_t element_id, std::int64_t level_id)
    : ModelError(fmt::format("element {} references unknown level_id {}", element_id, level_id)),
      element_id_(element_id),
      level_id_(level_id) {}

BuildingModel load_model(std::string_view bytes, std::string name) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("$", fmt::format("not valid JSON ({})", e.what()));
    }

    const Reader root(doc, "$");
    root.expect_object({"units", "levels", "elements"});
    const std::string unit_name = root.at("units").text();
    const auto file_units = parse_length_unit(unit_name);
    if (!file_units) root.at("units").fail(fmt::format("expected \"mm\", \"ft\" or \"in\", got \"{}\"", unit_name));
    const UnitContext units{*file_units};

    std::vector<Level> levels;
    std::set<std::string> level_names;
    const Reader level_list = root.at("levels");
    for (std::size_t i = 0; i < level_list.array().size(); ++i) {
        const Reader l = level_list.at(i);
        l.expect_object({"id", "name", "elevation"});
        Level level;
        level.id = l.at("id").positive_id();
        level.name = l.at("name").text();
        level.elevation = LengthQuantity::mm(units.to_mm(l.at("elevation").number()));
        if (!level_names.insert(level.name).second) {
            l.at("name").fail(fmt::format("duplicate level name '{}'", level.name));
        }
        levels.push_back(std::move(level));
    }

    std::vector<Element> elements;
    std::map<std::string, ParamKind, std::less<>> kinds_seen;
    const Reader element_list = root.at("elements");
    for (std::size_t i = 0; i < element_list.array().size(); ++i) {
        const Reader r = element_list.at(i);
        r.expect_object({"id", "category", "name", "level_id", "params", "geometry"});
        Element e;
        e.id = r.at("id").positive_id();
        const std::string category = r.at("category").text();
        const auto parsed = parse_category(category);
        if (!parsed) r.at("category").fail(fmt::format("unknown category '{}'", category));
        e.category = *parsed;
        e.name = r.at("name").text();
        e.level_id = r.at("level_id").positive_id();
        if (r.has("params")) {
            const Reader params = r.at("params");
            if (!params.node().is_object()) params.fail("expected an object");
            for (const auto& [key, _] : params.node().items()) {
                const Reader p = params.at(key);
                ParamValue value = read_param(p, units);
                const ParamKind kind = kind_of(value);
                auto [it, inserted] = kinds_seen.emplace(key, kind);
                if (!inserted && it->second != kind) {
                    p.at("kind").fail(fmt::format("parameter '{}' was declared as {} elsewhere in the model",
                                                  key, to_string(it->second)));
                }
                e.params.emplace(key, std::move(value));
            }
        }
        if (r.has("geometry")) e.geometry = read_geometry(r.at("geometry"), units);
        elements.push_back(std::move(e));
    }

    return BuildingModel(std::move(name), *file_units, std::move(levels), std::move(elements));
}

BuildingModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError(fmt::format("cannot open model file '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_model(buffer.str(), path.stem().string());
}

std::vector<const Element*> collect(const BuildingModel& model, Category category) {
    std::vector<const Element*> out;
    for (const Element& e : model.elements()) {
        if (e.category == category) out.push_back(&e);
    }
    return out;
}

AreaQuantity polygon_area(std::span<const geom::Point2> footprint) {
    if (footprint.size() < 3) {
        throw GeometryError(fmt::format("polygon needs at least 3 vertices, got {}", footprint.size()));
    }
    return AreaQuantity::sqft(geom::area(footprint) / kSquareMillimetersPerSquareFoot);
}

LengthQuantity polygon_distance(std::span<const geom::Point2> a, std::span<const geom::Point2> b) {
    if (a.size() < 3 || b.size() < 3) {
        throw GeometryError("polygon distance needs two polygons with at least 3 vertices");
    }
    return LengthQuantity::mm(geom::polygon_distance(a, b));
}

bool point_in_room(geom::Point2 p, const Element& room) {
    if (!room.geometry.footprint) {
        throw GeometryError(fmt::format("room {} ('{}') has no footprint", room.id, room.name));
    }
    return geom::point_in_polygon(p, *room.geometry.footprint);
}

}  // namespace bimcheck

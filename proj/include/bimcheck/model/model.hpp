#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bimcheck/model/geometry.hpp"
#include "bimcheck/model/units.hpp"

namespace bimcheck {

enum class Category {
    Door,
    Stair,
    Railing,
    Room,
    Wall,
    Window,
    Floor,
    PlumbingFixture,
    Footing,
    AirTerminal,
};

inline constexpr std::array kAllCategories = {
    Category::Door,  Category::Stair,  Category::Railing,         Category::Room,
    Category::Wall,  Category::Window, Category::Floor,           Category::PlumbingFixture,
    Category::Footing, Category::AirTerminal,
};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view name);

struct FlowRate {
    double cfm = 0.0;
    friend bool operator==(const FlowRate&, const FlowRate&) = default;
};

enum class ParamKind { length, area, number, flow, count, text, flag };

std::string_view to_string(ParamKind kind);
std::optional<ParamKind> parse_param_kind(std::string_view name);

// Alternatives are ordered to match ParamKind.
using ParamValue =
    std::variant<LengthQuantity, AreaQuantity, double, FlowRate, std::uint64_t, std::string, bool>;

ParamKind kind_of(const ParamValue& value);

struct Geometry {
    std::optional<geom::Box3> bbox;
    std::optional<geom::Polygon> footprint;  // counter-clockwise after load
    std::optional<geom::Point3> location;
    std::optional<geom::Point2> facing;      // unit vector

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

struct Element {
    std::int64_t id = 0;
    Category category = Category::Door;
    std::string name;
    std::int64_t level_id = 0;
    std::map<std::string, ParamValue, std::less<>> params;
    Geometry geometry;

    const ParamValue* find_param(std::string_view name) const;
    bool has_param(std::string_view name) const { return find_param(name) != nullptr; }

    friend bool operator==(const Element&, const Element&) = default;
};

struct Level {
    std::int64_t id = 0;
    std::string name;
    LengthQuantity elevation;  // millimeters after load

    friend bool operator==(const Level&, const Level&) = default;
};

// Immutable after load. All lengths are millimeters; element order is file order.
class BuildingModel {
public:
    BuildingModel() = default;
    BuildingModel(std::string name, LengthUnit source_units, std::vector<Level> levels,
                  std::vector<Element> elements);

    const std::string& name() const { return name_; }
    LengthUnit source_units() const { return source_units_; }
    const std::vector<Level>& levels() const { return levels_; }
    const std::vector<Element>& elements() const { return elements_; }

    const Element* find_element(std::int64_t id) const;
    const Level* find_level(std::int64_t id) const;
    // Position of the element in model order.
    std::size_t index_of(const Element& e) const;

    // Lowest level strictly above `level`, if any.
    const Level* level_above(const Level& level) const;

    friend bool operator==(const BuildingModel&, const BuildingModel&) = default;

private:
    std::string name_;
    LengthUnit source_units_ = LengthUnit::millimeter;
    std::vector<Level> levels_;
    std::vector<Element> elements_;
    std::map<std::int64_t, std::size_t> element_index_;
    std::map<std::int64_t, std::size_t> level_index_;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public ModelError {
public:
    SchemaError(std::string path, const std::string& problem);
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class DuplicateIdError : public ModelError {
public:
    DuplicateIdError(std::string_view what, std::int64_t id);
    std::int64_t id() const { return id_; }

private:
    std::int64_t id_;
};

class DanglingReferenceError : public ModelError {
public:
    DanglingReferenceError(std::int64_t element_id, std::int64_t level_id);
    std::int64_t element_id() const { return element_id_; }
    std::int64_t level_id() const { return level_id_; }

private:
    std::int64_t element_id_;
    std::int64_t level_id_;
};

class GeometryError : public ModelError {
public:
    using ModelError::ModelError;
};

BuildingModel load_model(std::string_view bytes, std::string name = "model");
// Names the model after the file stem. I/O failures surface as ModelError.
BuildingModel load_model_file(const std::filesystem::path& path);

// All and only elements of `category`, in model order.
std::vector<const Element*> collect(const BuildingModel& model, Category category);

AreaQuantity polygon_area(std::span<const geom::Point2> footprint);
LengthQuantity polygon_distance(std::span<const geom::Point2> a, std::span<const geom::Point2> b);
// Boundary counts as inside. Throws GeometryError when the room has no footprint.
bool point_in_room(geom::Point2 p, const Element& room);

}  // namespace bimcheck

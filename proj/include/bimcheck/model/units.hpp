#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bimcheck {

enum class LengthUnit { millimeter, inch, foot };
enum class AreaUnit { square_foot, square_meter };

inline constexpr double kMillimetersPerInch = 25.4;
inline constexpr double kMillimetersPerFoot = 304.8;
inline constexpr double kSquareMetersPerSquareFoot = 0.09290304;
inline constexpr double kSquareMillimetersPerSquareFoot = kMillimetersPerFoot * kMillimetersPerFoot;

struct LengthQuantity {
    double value = 0.0;
    LengthUnit unit = LengthUnit::millimeter;

    static constexpr LengthQuantity mm(double v) { return {v, LengthUnit::millimeter}; }
    static constexpr LengthQuantity inches(double v) { return {v, LengthUnit::inch}; }
    static constexpr LengthQuantity feet(double v) { return {v, LengthUnit::foot}; }

    double millimeters() const;

    friend bool operator==(const LengthQuantity&, const LengthQuantity&) = default;
};

struct AreaQuantity {
    double value = 0.0;
    AreaUnit unit = AreaUnit::square_foot;

    static constexpr AreaQuantity sqft(double v) { return {v, AreaUnit::square_foot}; }
    static constexpr AreaQuantity sqm(double v) { return {v, AreaUnit::square_meter}; }

    double square_feet() const;

    friend bool operator==(const AreaQuantity&, const AreaQuantity&) = default;
};

LengthQuantity convert_length(LengthQuantity q, LengthUnit target);
AreaQuantity convert_area(AreaQuantity q, AreaUnit target);

std::optional<LengthUnit> parse_length_unit(std::string_view symbol);
std::optional<AreaUnit> parse_area_unit(std::string_view symbol);
std::string_view symbol(LengthUnit unit);
std::string_view symbol(AreaUnit unit);

// Physical dimension of a rule quantity. Values are held in canonical units:
// millimeters, square millimeters and cubic feet per minute.
enum class Dimension { number, length, area, flow };

std::string_view to_string(Dimension dim);

struct Quantity {
    Dimension dim = Dimension::number;
    double value = 0.0;

    static constexpr Quantity number(double v) { return {Dimension::number, v}; }
    static constexpr Quantity length_mm(double v) { return {Dimension::length, v}; }
    static Quantity length(LengthQuantity q) { return {Dimension::length, q.millimeters()}; }
    static constexpr Quantity area_mm2(double v) { return {Dimension::area, v}; }
    static Quantity area(AreaQuantity q) {
        return {Dimension::area, q.square_feet() * kSquareMillimetersPerSquareFoot};
    }
    static constexpr Quantity flow_cfm(double v) { return {Dimension::flow, v}; }

    double square_feet() const { return value / kSquareMillimetersPerSquareFoot; }
    double inches() const { return value / kMillimetersPerInch; }
    double feet() const { return value / kMillimetersPerFoot; }

    friend bool operator==(const Quantity&, const Quantity&) = default;
};

// Comparison slack per dimension: 0.1 mm, 0.01 sq ft, 0.01 cfm, 1e-9 for plain numbers.
double tolerance(Dimension dim);

// measured >= required - tolerance. Quantities must share a dimension.
bool at_least(const Quantity& measured, const Quantity& required);
// measured <= limit + tolerance.
bool at_most(const Quantity& measured, const Quantity& limit);
// |a - b| <= tolerance.
bool approx_equal(const Quantity& a, const Quantity& b);

// Human-readable rendering: lengths in inches, areas in square feet, flows in cfm.
std::string format_quantity(const Quantity& q);
std::string format_number(double v, int max_decimals = 2);

}  // namespace bimcheck

#include "bimcheck/model/units.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace bimcheck {

namespace {

double mm_per(LengthUnit unit) {
    switch (unit) {
        case LengthUnit::millimeter: return 1.0;
        case LengthUnit::inch: return kMillimetersPerInch;
        case LengthUnit::foot: return kMillimetersPerFoot;
    }
    return 1.0;
}

double sqft_per(AreaUnit unit) {
    switch (unit) {
        case AreaUnit::square_foot: return 1.0;
        case AreaUnit::square_meter: return 1.0 / kSquareMetersPerSquareFoot;
    }
    return 1.0;
}

void require_same_dimension(const Quantity& a, const Quantity& b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument(fmt::format("cannot compare {} with {}", to_string(a.dim),
                                                to_string(b.dim)));
    }
}

}  // namespace

double LengthQuantity::millimeters() const { return value * mm_per(unit); }

double AreaQuantity::square_feet() const { return value * sqft_per(unit); }

LengthQuantity convert_length(LengthQuantity q, LengthUnit target) {
    if (q.unit == target) return q;
    // Go through millimeters; dividing by the exact factor keeps 80 in -> 2032 mm exact.
    return {q.millimeters() / mm_per(target), target};
}

AreaQuantity convert_area(AreaQuantity q, AreaUnit target) {
    if (q.unit == target) return q;
    if (target == AreaUnit::square_meter) return {q.value * kSquareMetersPerSquareFoot, target};
    return {q.value / kSquareMetersPerSquareFoot, target};
}

std::optional<LengthUnit> parse_length_unit(std::string_view s) {
    if (s == "mm") return LengthUnit::millimeter;
    if (s == "in") return LengthUnit::inch;
    if (s == "ft") return LengthUnit::foot;
    return std::nullopt;
}

std::optional<AreaUnit> parse_area_unit(std::string_view s) {
    if (s == "sqft") return AreaUnit::square_foot;
    if (s == "sqm") return AreaUnit::square_meter;
    return std::nullopt;
}

std::string_view symbol(LengthUnit unit) {
    switch (unit) {
        case LengthUnit::millimeter: return "mm";
        case LengthUnit::inch: return "in";
        case LengthUnit::foot: return "ft";
    }
    return "?";
}

std::string_view symbol(AreaUnit unit) {
    return unit == AreaUnit::square_foot ? "sqft" : "sqm";
}

std::string_view to_string(Dimension dim) {
    switch (dim) {
        case Dimension::number: return "number";
        case Dimension::length: return "length";
        case Dimension::area: return "area";
        case Dimension::flow: return "flow";
    }
    return "?";
}

double tolerance(Dimension dim) {
    switch (dim) {
        case Dimension::number: return 1e-9;
        case Dimension::length: return 0.1;
        case Dimension::area: return 0.01 * kSquareMillimetersPerSquareFoot;
        case Dimension::flow: return 0.01;
    }
    return 0.0;
}

bool at_least(const Quantity& measured, const Quantity& required) {
    require_same_dimension(measured, required);
    return measured.value >= required.value - tolerance(measured.dim);
}

bool at_most(const Quantity& measured, const Quantity& limit) {
    require_same_dimension(measured, limit);
    return measured.value <= limit.value + tolerance(measured.dim);
}

bool approx_equal(const Quantity& a, const Quantity& b) {
    require_same_dimension(a, b);
    return std::abs(a.value - b.value) <= tolerance(a.dim);
}

std::string format_number(double v, int max_decimals) {
    if (v == 0.0) v = 0.0;  // drop negative zero
    std::string s = fmt::format("{:.{}f}", v, max_decimals);
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string format_quantity(const Quantity& q) {
    switch (q.dim) {
        case Dimension::number: return format_number(q.value, 4);
        case Dimension::length: return format_number(q.inches()) + " in";
        case Dimension::area: return format_number(q.square_feet()) + " sqft";
        case Dimension::flow: return format_number(q.value) + " cfm";
    }
    return format_number(q.value);
}

}  // namespace bimcheck

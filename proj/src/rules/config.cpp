#include <algorithm>
#include <cctype>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bimcheck/rules/rules.hpp"

namespace bimcheck::rules {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Quantity parse_threshold_value(const json& node, const ThresholdInfo& info) {
    if (!node.is_object()) throw ConfigError(fmt::format("threshold '{}' must be an object", info.name));
    for (const auto& [key, _] : node.items()) {
        if (key != "value" && key != "unit") {
            throw ConfigError(fmt::format("threshold '{}': unknown key '{}'", info.name, key));
        }
    }
    if (!node.contains("value") || !node["value"].is_number()) {
        throw ConfigError(fmt::format("threshold '{}' needs a numeric value", info.name));
    }
    const double v = node["value"].get<double>();
    const std::string unit = node.value("unit", "");
    Quantity q;
    if (unit.empty()) {
        q = Quantity::number(v);
    } else if (auto lu = parse_length_unit(unit)) {
        q = Quantity::length(LengthQuantity{v, *lu});
    } else if (auto au = parse_area_unit(unit)) {
        q = Quantity::area(AreaQuantity{v, *au});
    } else if (unit == "cfm") {
        q = Quantity::flow_cfm(v);
    } else {
        throw ConfigError(fmt::format("threshold '{}': unknown unit '{}'", info.name, unit));
    }
    if (q.dim != info.default_value.dim) {
        throw ConfigError(fmt::format("threshold '{}' must be a {}, got a {}", info.name,
                                      to_string(info.default_value.dim), to_string(q.dim)));
    }
    return q;
}

std::vector<std::string> parse_tokens(const json& node, std::string_view key) {
    if (!node.is_array()) throw ConfigError(fmt::format("'{}' must be a list of strings", key));
    std::vector<std::string> out;
    for (const auto& item : node) {
        if (!item.is_string()) throw ConfigError(fmt::format("'{}' must be a list of strings", key));
        out.push_back(lower(item.get<std::string>()));
    }
    return out;
}

json quantity_json(const Quantity& q) {
    switch (q.dim) {
        case Dimension::number: return {{"value", q.value}};
        case Dimension::length: return {{"value", q.inches()}, {"unit", "in"}};
        case Dimension::area: return {{"value", q.square_feet()}, {"unit", "sqft"}};
        case Dimension::flow: return {{"value", q.value}, {"unit", "cfm"}};
    }
    return {};
}

}  // namespace

const std::vector<ThresholdInfo>& threshold_catalog() {
    static const std::vector<ThresholdInfo> catalog = {
        {"exit_min_width", 1, Quantity::length(LengthQuantity::inches(36))},
        {"exit_min_clear_width", 1, Quantity::length(LengthQuantity::inches(32))},
        {"exit_min_height", 1, Quantity::length(LengthQuantity::inches(80))},
        {"stair_min_width", 2, Quantity::length(LengthQuantity::inches(36))},
        {"guard_trigger_height", 3, Quantity::length(LengthQuantity::inches(30))},
        {"guard_min_height", 3, Quantity::length(LengthQuantity::inches(36))},
        {"ceiling_min_height", 4, Quantity::length(LengthQuantity::feet(7))},
        {"window_wall_ratio_max", 5, Quantity::number(0.25)},
        {"primary_room_min_area", 6, Quantity::area(AreaQuantity::sqft(120))},
        {"room_min_area", 6, Quantity::area(AreaQuantity::sqft(70))},
        {"fixture_clear_depth", 7, Quantity::length(LengthQuantity::inches(21))},
        {"floor_panel_min_thickness", 10, Quantity::length(LengthQuantity::mm(19))},
        {"ventilation_per_person", 12, Quantity::flow_cfm(5)},
        // cfm per square foot of floor area
        {"ventilation_per_sqft", 12, Quantity::number(0.06)},
    };
    return catalog;
}

const ThresholdInfo* find_threshold(std::string_view name) {
    for (const auto& t : threshold_catalog()) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

RuleConfig RuleConfig::defaults() {
    RuleConfig c;
    for (const auto& t : threshold_catalog()) c.thresholds.emplace(t.name, t.default_value);
    c.habitable_tokens = {"bedroom", "living", "dining", "study", "office", "den", "hall", "kitchen"};
    c.excluded_tokens = {"bathroom", "toilet", "closet", "garage", "storage", "mechanical"};
    c.kitchen_tokens = {"kitchen"};
    c.floor_material_tokens = {"wood structural panel"};
    return c;
}

Quantity RuleConfig::threshold(std::string_view name) const {
    auto it = thresholds.find(name);
    if (it == thresholds.end()) throw std::out_of_range(fmt::format("unknown threshold '{}'", name));
    return it->second;
}

RuleConfig load_rule_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("rule config is not valid JSON ({})", e.what()));
    }
    if (!doc.is_object()) throw ConfigError("rule config must be an object");

    RuleConfig config = RuleConfig::defaults();
    for (const auto& [key, value] : doc.items()) {
        if (key == "thresholds") {
            if (!value.is_object()) throw ConfigError("'thresholds' must be an object");
            for (const auto& [name, node] : value.items()) {
                const ThresholdInfo* info = find_threshold(name);
                if (info == nullptr) throw ConfigError(fmt::format("unknown threshold '{}'", name));
                config.thresholds[name] = parse_threshold_value(node, *info);
            }
        } else if (key == "habitable_tokens") {
            config.habitable_tokens = parse_tokens(value, key);
        } else if (key == "excluded_tokens") {
            config.excluded_tokens = parse_tokens(value, key);
        } else if (key == "kitchen_tokens") {
            config.kitchen_tokens = parse_tokens(value, key);
        } else if (key == "floor_material_tokens") {
            config.floor_material_tokens = parse_tokens(value, key);
        } else {
            throw ConfigError(fmt::format("unknown rule config key '{}'", key));
        }
    }
    return config;
}

json to_json(const RuleConfig& config) {
    json thresholds = json::object();
    for (const auto& [name, q] : config.thresholds) thresholds[name] = quantity_json(q);
    return {
        {"thresholds", thresholds},
        {"habitable_tokens", config.habitable_tokens},
        {"excluded_tokens", config.excluded_tokens},
        {"kitchen_tokens", config.kitchen_tokens},
        {"floor_material_tokens", config.floor_material_tokens},
    };
}

bool name_matches(std::string_view name, const std::vector<std::string>& tokens) {
    const std::string text = lower(name);
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        const std::string_view word(text.data() + i, j - i);
        for (const auto& token : tokens) {
            if (!word.empty() && word.starts_with(token)) return true;
        }
        i = j;
    }
    return false;
}

bool is_habitable(const Element& room, const RuleConfig& config) {
    if (const auto* flag = room.find_param("habitable")) {
        if (const auto* b = std::get_if<bool>(flag)) return *b;
    }
    if (name_matches(room.name, config.excluded_tokens)) return false;
    return name_matches(room.name, config.habitable_tokens);
}

bool is_kitchen(const Element& room, const RuleConfig& config) {
    return name_matches(room.name, config.kitchen_tokens);
}

bool allowed_floor_material(std::string_view material, const RuleConfig& config) {
    const std::string text = lower(material);
    return std::any_of(config.floor_material_tokens.begin(), config.floor_material_tokens.end(),
                       [&](const std::string& token) { return text.find(token) != std::string::npos; });
}

bool needs_front_clearance(std::string_view fixture_type) {
    return fixture_type == "water_closet" || fixture_type == "lavatory" || fixture_type == "bidet";
}

}  // namespace bimcheck::rules

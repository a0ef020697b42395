#include <array>

#include <fmt/format.h>

#include "bimcheck/rules/rules.hpp"

namespace bimcheck::rules {

namespace {

struct RuleText {
    const char* description;
    const char* reference;
    std::vector<Category> targets;
    const char* hint;  // nullptr where no rule-specific instruction applies
};

const std::array<RuleText, kRuleCount>& rule_texts() {
    static const std::array<RuleText, kRuleCount> texts = {{
        {"The minimum width of the required exit is 36 inches (914 mm), with a net clear width of "
         "32 inches (813 mm). The minimum height of a required exit is 6 feet 8 inches (2032 mm).",
         "IRC Section R311.2.1", {Category::Door}, nullptr},
        {"The minimum clear width of stairways shall be 36 inches.", "IRC Section R311.7.1",
         {Category::Stair}, "Query the Stair category: let stairs = collect(Stair)"},
        {"Porches, balconies, ramps, or raised floor surfaces located more than 30 inches above the "
         "floor or grade shall have guards not less than 36 inches in height.",
         "IRC Section R312.1.1", {Category::Railing},
         "Use collect(Railing). The walking_surface_height parameter is the height of the protected "
         "surface above the floor or grade; the height parameter is the guard height."},
        {"Habitable spaces, hallways, and portions of basements containing these spaces shall have a "
         "ceiling height of not less than 7 feet.",
         "IRC Section R305.1", {Category::Room},
         "Use level elevations as reference: level_height(room) is the distance from the room's level "
         "to the level above; subtract the ceiling_allowance parameter when present."},
        {"The window-to-wall ratio in buildings shall not exceed 25% as stipulated by building code "
         "regulations. The ratio is influenced by energy efficiency standards, which might be covered "
         "under different codes or local amendments.",
         "IRC Section R303", {Category::Window, Category::Wall},
         "Use collect(Window) and collect(Wall); only walls whose exterior flag is true count."},
        {"Every dwelling unit shall have at least one habitable room with not less than 120 square "
         "feet of gross floor area. Each additional habitable room, except kitchens, shall have a "
         "floor area of not less than 70 square feet.",
         "IRC Section R304.1", {Category::Room},
         "Use collect(Room) with is_habitable(room) and area(room) from the room footprint."},
        {"The IRC 2021 Section R307.2 requires a minimum clear space of 21 inches (533 mm) in front of "
         "water closets, lavatories, and bidets.",
         "IRC Section R307.2", {Category::PlumbingFixture}, nullptr},
        {"Toilet Facilities: Every dwelling unit must have a water closet, lavatory, bathtub, or "
         "shower.",
         "IRC Section R306.1", {Category::PlumbingFixture}, "Use collect(PlumbingFixture)."},
        {"Kitchen Requirements: Each dwelling unit must have a kitchen area with a sink.",
         "IRC Section R306.2", {Category::Room, Category::PlumbingFixture},
         "let fixtures = collect(PlumbingFixture)"},
        {"Requirements for wood structural panels used in floor construction. It details material "
         "specifications and installation guidelines to ensure floor assemblies meet structural and "
         "fire safety requirements.",
         "IRC Section R503.2.4", {Category::Floor},
         "Floor parameters available: material, thickness, span_rating."},
        {"The edge-to-edge distance between any two footings must be at least equal to the width of "
         "the larger footing between them.",
         "Bowles, Foundation Analysis and Design (1996)", {Category::Footing}, nullptr},
        {"Minimum outdoor air ventilation rate required for occupied indoor spaces. For Office Spaces "
         "(Business Occupancy), the code states: Each room must receive outdoor air at a rate of: 5 "
         "CFM per person (people-based) 0.06 CFM per ft² of floor area (area-based). Total Minimum "
         "Ventilation = (5 × occupants) + (0.06 × floor area)",
         "IMC 2021, Table 403.3.1.1", {Category::Room, Category::AirTerminal}, nullptr},
    }};
    return texts;
}

}  // namespace

UnknownRule::UnknownRule(int rule_id)
    : std::out_of_range(fmt::format("unknown rule {} (rules are numbered 1 to {})", rule_id, kRuleCount)),
      rule_id_(rule_id) {}

Limit limit_kind(int rule_id) {
    if (rule_id < 1 || rule_id > kRuleCount) throw UnknownRule(rule_id);
    return rule_id == 5 ? Limit::maximum : Limit::minimum;
}

RuleSpec rule_spec(int rule_id, const RuleConfig& config) {
    if (rule_id < 1 || rule_id > kRuleCount) throw UnknownRule(rule_id);
    const RuleText& text = rule_texts()[static_cast<std::size_t>(rule_id - 1)];
    RuleSpec spec;
    spec.id = rule_id;
    spec.description = text.description;
    spec.reference = text.reference;
    spec.target_categories = text.targets;
    if (text.hint != nullptr) spec.dsl_hint = text.hint;
    for (const auto& t : threshold_catalog()) {
        if (t.rule_id == rule_id) spec.thresholds.emplace(t.name, config.threshold(t.name));
    }
    return spec;
}

std::vector<RuleSpec> all_rule_specs(const RuleConfig& config) {
    std::vector<RuleSpec> out;
    for (int id = 1; id <= kRuleCount; ++id) out.push_back(rule_spec(id, config));
    return out;
}

}  // namespace bimcheck::rules

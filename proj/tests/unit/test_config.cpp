#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bimcheck/rules/rules.hpp"
#include "test_support.hpp"

using namespace bimcheck;
using namespace bimcheck::rules;

TEST_CASE("defaults carry the code values") {
    const RuleConfig c = RuleConfig::defaults();
    CHECK(c.threshold("exit_min_width").inches() == doctest::Approx(36));
    CHECK(c.threshold("exit_min_height").inches() == doctest::Approx(80));
    CHECK(c.threshold("ceiling_min_height").feet() == doctest::Approx(7));
    CHECK(c.threshold("window_wall_ratio_max").value == doctest::Approx(0.25));
    CHECK(c.threshold("primary_room_min_area").square_feet() == doctest::Approx(120));
    CHECK(c.threshold("ventilation_per_person").value == doctest::Approx(5));
    CHECK_THROWS_AS((void)c.threshold("nope"), std::out_of_range);
    for (const auto& info : threshold_catalog()) CHECK(c.thresholds.contains(info.name));
}

TEST_CASE("shipped default config equals the built-in defaults") {
    const RuleConfig c = load_rule_config(test::read_file(test::source_path("data/config/rules.default.json")));
    CHECK(to_json(c) == to_json(RuleConfig::defaults()));
}

TEST_CASE("overrides and validation") {
    const RuleConfig c = load_rule_config(R"({"thresholds": {"stair_min_width": {"value": 44, "unit": "in"}},
                                              "kitchen_tokens": ["Galley"]})");
    CHECK(c.threshold("stair_min_width").inches() == doctest::Approx(44));
    CHECK(c.kitchen_tokens == std::vector<std::string>{"galley"});
    CHECK_THROWS_AS(load_rule_config(R"({"thresholds": {"stair_min_width": {"value": 44, "unit": "sqft"}}})"),
                    ConfigError);
    CHECK_THROWS_AS(load_rule_config(R"({"thresholds": {"bogus": {"value": 1}}})"), ConfigError);
    CHECK_THROWS_AS(load_rule_config(R"({"colour": 1})"), ConfigError);
    CHECK_THROWS_AS(load_rule_config("["), ConfigError);
}

TEST_CASE("room classification") {
    const RuleConfig c = RuleConfig::defaults();
    CHECK(name_matches("Master Bedroom", c.habitable_tokens));
    CHECK(name_matches("kitchenette", c.kitchen_tokens));
    CHECK_FALSE(name_matches("Greenhouse", c.habitable_tokens));
    Element room;
    room.name = "Bathroom";
    CHECK_FALSE(is_habitable(room, c));
    room.name = "Basement";
    CHECK_FALSE(is_habitable(room, c));
    room.params.emplace("habitable", true);
    CHECK(is_habitable(room, c));
    CHECK(allowed_floor_material("OSB / Wood Structural Panel", c));
    CHECK_FALSE(allowed_floor_material("concrete", c));
}

TEST_CASE("rule specs") {
    const auto specs = all_rule_specs();
    REQUIRE(specs.size() == 12);
    for (int i = 0; i < 12; ++i) {
        CHECK(specs[i].id == i + 1);
        CHECK_FALSE(specs[i].description.empty());
        CHECK_FALSE(specs[i].reference.empty());
    }
    CHECK(rule_spec(2).dsl_hint.has_value());
    CHECK_FALSE(rule_spec(1).dsl_hint.has_value());
    CHECK(rule_spec(1).thresholds.at("exit_min_width").inches() == doctest::Approx(36));
    CHECK_THROWS_AS(rule_spec(13), UnknownRule);
}

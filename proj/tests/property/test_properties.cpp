#include <doctest.h>

#include "../support/properties.hpp"
#include "../unit/test_support.hpp"
#include "bimcheck/rules/rules.hpp"

using namespace bimcheck;

TEST_CASE("rendered programs parse back to the same tree") {
    const auto r = props::render_round_trip(1, 1500);
    INFO(r.failure);
    CHECK(r.ok);
    CHECK(r.cases >= 1000);
}

TEST_CASE("unit conversions round trip") {
    const auto r = props::unit_round_trip(7, 2000);
    INFO(r.failure);
    CHECK(r.ok);
}

TEST_CASE("enlarging measured dimensions never breaks a compliant element") {
    const auto r = props::monotonicity(11, 25, {&test::residential(), &test::office()});
    INFO(r.failure);
    CHECK(r.ok);
    CHECK(r.cases >= 12 * 2 * 20);
}

TEST_CASE("polygon distance matches a brute force oracle") {
    const auto r = props::polygon_distance_agreement(3, 500);
    INFO(r.failure);
    CHECK(r.ok);
    CHECK(r.cases >= 200);
}

TEST_CASE("verdicts do not depend on the source length unit") {
    for (const char* stem : {"residential", "office"}) {
        const auto text = test::read_file(test::source_path(std::string("data/models/") + stem + ".json"));
        const auto mm = load_model(props::rescale_model_json(text, LengthUnit::millimeter));
        const auto ft = load_model(props::rescale_model_json(text, LengthUnit::foot));
        for (int rule = 1; rule <= rules::kRuleCount; ++rule) {
            const auto a = rules::check_rule(mm, rule);
            const auto b = rules::check_rule(ft, rule);
            REQUIRE(a.findings.size() == b.findings.size());
            for (std::size_t i = 0; i < a.findings.size(); ++i) {
                CHECK(a.findings[i].status == b.findings[i].status);
            }
        }
    }
}

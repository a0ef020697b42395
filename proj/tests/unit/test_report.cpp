#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bimcheck/orchestrator/provider.hpp"
#include "bimcheck/report/report.hpp"
#include "bimcheck/rules/rules.hpp"
#include "test_support.hpp"

using namespace bimcheck;
using namespace bimcheck::report;

namespace {

constexpr const char* kStamp = "2026-01-01T00:00:00Z";

std::vector<rules::CheckResult> check_all(const BuildingModel& m) {
    std::vector<rules::CheckResult> out;
    for (int r = 1; r <= rules::kRuleCount; ++r) out.push_back(rules::check_rule(m, r));
    return out;
}

// One exit door and the three required fixtures; every applicable rule passes.
const BuildingModel& toy_compliant() {
    static const BuildingModel m = load_model_file(test::source_path("tests/fixtures/models/toy_compliant.json"));
    return m;
}

std::filesystem::path mock_root() { return test::source_path("tests/fixtures/mock"); }

}  // namespace

TEST_CASE("residential report matches the golden files") {
    const auto r = build_report(test::residential(), check_all(test::residential()), kStamp);
    CHECK(render_report(r, Format::structured) ==
          test::read_file(test::source_path("tests/golden/residential.report.json")));
    CHECK(render_report(r, Format::text) == test::read_file(test::source_path("tests/golden/residential.report.txt")));
}

TEST_CASE("rendering is deterministic") {
    const auto a = build_report(test::office(), check_all(test::office()), kStamp);
    const auto b = build_report(test::office(), check_all(test::office()), kStamp);
    CHECK(render_report(a, Format::structured) == render_report(b, Format::structured));
    CHECK(render_report(a, Format::text) == render_report(b, Format::text));
}

TEST_CASE("counts add up to the findings") {
    for (const BuildingModel* m : {&test::residential(), &test::office()}) {
        const auto results = check_all(*m);
        const auto r = build_report(*m, results, kStamp);
        REQUIRE(r.per_rule.size() == results.size());
        int failed = 0;
        std::size_t non_compliant = 0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& s = r.per_rule[i];
            CHECK(s.counts.compliant + s.counts.non_compliant + s.counts.not_applicable == results[i].findings.size());
            CHECK(s.overall == results[i].overall());
            if (s.overall == rules::Status::non_compliant) ++failed;
            non_compliant += s.counts.non_compliant;
        }
        CHECK(r.summary.total_rules == 12);
        CHECK(r.summary.rules_failed == failed);
        CHECK(r.recommendations.size() == non_compliant);
        CHECK(r.summary.worst_findings.size() <= kWorstFindings);
        for (std::size_t i = 1; i < r.summary.worst_findings.size(); ++i) {
            CHECK(r.summary.worst_findings[i - 1].shortfall_percent >= r.summary.worst_findings[i].shortfall_percent);
        }
    }
}

TEST_CASE("back door gets a widening recommendation") {
    const auto r = build_report(test::residential(), {rules::check_rule(test::residential(), 1)}, kStamp);
    REQUIRE(r.recommendations.size() == 1);
    CHECK(r.recommendations[0].rule_id == 1);
    CHECK(r.recommendations[0].element_id == 2);
    CHECK(r.recommendations[0].text.find("Back Door") != std::string::npos);
    CHECK(r.recommendations[0].text.find("36 in") != std::string::npos);
    CHECK(render_report(r, Format::text).find("== Rule 1: non-compliant ==") != std::string::npos);
    CHECK(r.element_labels.at(2) == "element 2 (Door 'Back Door')");
    CHECK(r.has_violations());
}

TEST_CASE("a compliant model has no recommendations") {
    const auto r = build_report(toy_compliant(), check_all(toy_compliant()), kStamp);
    CHECK_FALSE(r.has_violations());
    CHECK(r.recommendations.empty());
    CHECK(r.summary.worst_findings.empty());
    CHECK(r.per_rule[0].overall == rules::Status::compliant);
}

TEST_CASE("empty results still render") {
    const auto r = build_report(test::residential(), {}, kStamp);
    CHECK(r.summary.total_rules == 0);
    CHECK_FALSE(r.has_violations());
    const auto j = nlohmann::json::parse(render_report(r, Format::structured));
    CHECK(j["rules"].empty());
    CHECK_FALSE(render_report(r, Format::text).empty());
}

TEST_CASE("element labels") {
    CHECK(element_label(test::residential(), 1) == "element 1 (Door 'Front Door')");
    CHECK(element_label(test::residential(), 99999) == "element 99999");
}

TEST_CASE("narration uses the provider text") {
    orchestrator::FixtureProvider p(mock_root(), "narrator");
    auto r = build_report(test::residential(), check_all(test::residential()), kStamp);
    const auto& text = narrate_report(p, r);
    CHECK(text.find("Back Door") != std::string::npos);
    CHECK_FALSE(r.narrative_notice);
    CHECK(render_report(r, Format::text).find(text) != std::string::npos);
}

TEST_CASE("narration falls back to the recommendations") {
    orchestrator::CallbackProvider p("down", [](const auto&, const auto&) -> std::string {
        throw orchestrator::ProviderError(orchestrator::ProviderErrorKind::network, "unreachable");
    });
    auto r = build_report(test::residential(), check_all(test::residential()), kStamp);
    narrate_report(p, r);
    REQUIRE(r.narrative);
    REQUIRE(r.narrative_notice);
    CHECK(r.narrative_notice->find("unreachable") != std::string::npos);
    CHECK(r.narrative->find(r.recommendations.front().text) != std::string::npos);
}

TEST_CASE("narration request carries the structured report") {
    std::string seen;
    orchestrator::CallbackProvider p("cb", [&](const std::vector<orchestrator::Message>& m,
                                               const orchestrator::RequestContext& req) {
        CHECK(req.task == "report");
        CHECK(req.attempt == 1);
        seen = m.back().content;
        return std::string("All checked rules are met.");
    });
    auto r = build_report(toy_compliant(), check_all(toy_compliant()), kStamp);
    CHECK(narrate_report(p, r) == "All checked rules are met.");
    CHECK(seen.find("Main Exit") != std::string::npos);
}

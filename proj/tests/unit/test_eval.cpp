#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bimcheck/eval/eval.hpp"
#include "bimcheck/orchestrator/provider.hpp"
#include "test_support.hpp"

using namespace bimcheck;
using namespace bimcheck::eval;

namespace {

std::filesystem::path mock_root() { return test::source_path("tests/fixtures/mock"); }

EvalTable mock_eval(const std::vector<std::string>& names, const std::vector<int>& rules, int parallelism = 1) {
    std::vector<std::unique_ptr<orchestrator::Provider>> owned;
    std::vector<orchestrator::Provider*> providers;
    for (const auto& n : names) {
        owned.push_back(std::make_unique<orchestrator::FixtureProvider>(mock_root(), n));
        providers.push_back(owned.back().get());
    }
    EvalOptions opts;
    opts.parallelism = parallelism;
    return run_eval(providers, rules, test::residential(), opts);
}

// Measured times differ run to run; pin them so the table can be compared byte for byte.
EvalTable without_times(const EvalTable& t) {
    auto records = t.records;
    for (auto& r : records) r.processing_time_seconds = 0.25 * r.rule_id;
    return assemble(t.providers, std::move(records));
}

// Set BIMCHECK_UPDATE_GOLDEN=1 to rewrite a golden file after an intended change.
void check_golden(const std::string& relative, const std::string& actual) {
    const auto path = test::source_path(relative);
    if (const char* update = std::getenv("BIMCHECK_UPDATE_GOLDEN"); update != nullptr && *update == '1') {
        std::ofstream(path, std::ios::binary) << actual;
    }
    CHECK(test::read_file(path) == actual);
}

}  // namespace

TEST_CASE("mock claude: five rules, 3.4 corrections and 23.7% on average") {
    const auto t = mock_eval({"claude"}, {1, 2, 3, 4, 5});
    const int corrections[] = {4, 2, 3, 4, 4};
    const double rates[] = {20.0, 33.3, 25.0, 20.0, 20.0};
    for (int r = 1; r <= 5; ++r) {
        const auto* rec = t.find("claude", r);
        REQUIRE(rec != nullptr);
        CHECK(rec->status);
        CHECK(rec->correction_attempts == corrections[r - 1]);
        CHECK(rec->success_rate_percent == doctest::Approx(rates[r - 1]));
    }
    REQUIRE(t.averages.size() == 1);
    CHECK(*t.averages[0].avg_corrections == doctest::Approx(3.4));
    CHECK(t.averages[0].avg_success_rate == doctest::Approx(23.7));
    CHECK(t.averages[0].avg_time_seconds.has_value());
}

TEST_CASE("mock gemini: failures count as zero in the success rate") {
    const auto t = mock_eval({"gemini"}, {1, 2, 3, 4, 5});
    CHECK(t.find("gemini", 1)->status);
    CHECK(t.find("gemini", 2)->correction_attempts == 7);
    CHECK_FALSE(t.find("gemini", 3)->status);
    CHECK_FALSE(t.find("gemini", 5)->status);
    CHECK(t.find("gemini", 5)->correction_attempts == 10);
    CHECK(t.find("gemini", 5)->success_rate_percent == 0.0);
    CHECK(t.averages[0].avg_success_rate == doctest::Approx(9.7));
    // (3 + 7 + 8) / 3 successful rules
    CHECK(*t.averages[0].avg_corrections == doctest::Approx(6.0));
}

TEST_CASE("mock chatgpt: success on the seventh attempt") {
    const auto t = mock_eval({"chatgpt"}, {1});
    const auto* rec = t.find("chatgpt", 1);
    REQUIRE(rec != nullptr);
    CHECK(rec->status);
    CHECK(rec->correction_attempts == 6);
    CHECK(rec->success_rate_percent == doctest::Approx(14.3));
}

TEST_CASE("a provider that never succeeds has no time or correction average") {
    const auto t = assemble({"p"}, {{"p", 1, 3.0, 10, false, 0.0}, {"p", 2, 4.0, 10, false, 0.0}});
    CHECK_FALSE(t.averages[0].avg_time_seconds);
    CHECK_FALSE(t.averages[0].avg_corrections);
    CHECK(t.averages[0].avg_success_rate == 0.0);
    const auto text = render_eval(t, Format::text);
    CHECK(text.find("✗") != std::string::npos);
    CHECK(text.find("-") != std::string::npos);
    const auto j = to_json(t);
    CHECK(j["averages"][0]["avg_corrections"].is_null());
}

TEST_CASE("table shape") {
    const auto one = render_eval(assemble({"p"}, {{"p", 4, 1.0, 0, true, 100.0}}), Format::text);
    CHECK(std::count(one.begin(), one.end(), '\n') == 5);
    CHECK(one.rfind("Model", 0) == 0);
    CHECK(one.find("Rule 4") != std::string::npos);

    const auto empty = render_eval(assemble({}, {}), Format::text);
    CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
}

TEST_CASE("averages are rounded to one decimal") {
    const auto t = assemble({"p"}, {{"p", 1, 1.0, 1, true, 50.0}, {"p", 2, 2.0, 0, true, 100.0},
                                    {"p", 3, 2.0, 2, true, 33.3}});
    CHECK(*t.averages[0].avg_corrections == doctest::Approx(1.0));
    CHECK(t.averages[0].avg_success_rate == doctest::Approx(61.1));
}

TEST_CASE("records are ordered by configured provider, then rule") {
    const auto t = assemble({"b", "a"}, {{"a", 2, 0, 0, true, 100}, {"b", 3, 0, 0, true, 100},
                                         {"a", 1, 0, 0, true, 100}, {"c", 1, 0, 0, true, 100}});
    CHECK(t.providers == std::vector<std::string>{"b", "a", "c"});
    CHECK(t.rule_ids == std::vector<int>{1, 2, 3});
    CHECK(t.records[0].provider == "b");
    CHECK(t.records[1].rule_id == 1);
    CHECK(t.records[2].rule_id == 2);
}

TEST_CASE("golden mock table") {
    const auto t = without_times(mock_eval({"claude", "gemini"}, {1, 2, 3, 4, 5}));
    check_golden("tests/golden/eval.mock.txt", render_eval(t, Format::text));
    check_golden("tests/golden/eval.mock.json", render_eval(t, Format::structured));
}

TEST_CASE("parallel evaluation gives the same table") {
    const auto seq = without_times(mock_eval({"claude", "gemini", "chatgpt"}, {1, 2, 3, 4, 5}, 1));
    const auto par = without_times(mock_eval({"claude", "gemini", "chatgpt"}, {1, 2, 3, 4, 5}, 4));
    CHECK(render_eval(seq, Format::structured) == render_eval(par, Format::structured));
}

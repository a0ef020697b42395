#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <unistd.h>
#include <nlohmann/json.hpp>

#include "bimcheck/cli/cli.hpp"
#include "test_support.hpp"

using namespace bimcheck;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "bimcheck");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string path(const std::string& relative) { return test::source_path(relative).string(); }

// Fresh directory under the system temp dir, removed at scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        dir_ = fs::temp_directory_path() / fmt::format("bimcheck-cli-{}-{}-{}", tag, ::getpid(), counter++);
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~TempDir() { fs::remove_all(dir_); }
    std::string str() const { return dir_.string(); }
    fs::path operator/(const std::string& name) const { return dir_ / name; }

private:
    fs::path dir_;
};

const std::string kResidential = path("data/models/residential.json");
const std::string kMock = path("tests/fixtures/mock");

}  // namespace

TEST_CASE("rule selection syntax") {
    CHECK(cli::parse_rule_selection("all").size() == 12);
    CHECK(cli::parse_rule_selection("1..12").size() == 12);
    CHECK(cli::parse_rule_selection("1-5") == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(cli::parse_rule_selection("1,3,7") == std::vector<int>{1, 3, 7});
    CHECK(cli::parse_rule_selection("12") == std::vector<int>{12});
    CHECK_THROWS_AS(cli::parse_rule_selection("0"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_rule_selection("13"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_rule_selection("5-2"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_rule_selection("x"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_rule_selection(""), std::invalid_argument);
}

TEST_CASE("check exits 2 on violations and writes both reports") {
    TempDir dir("check");
    const auto r = run({"check", "--model", kResidential, "--out", dir.str(), "--timestamp", "2026-01-01T00:00:00Z",
                        "-q"});
    CHECK(r.code == cli::kExitViolations);
    CHECK(r.out.empty());
    CHECK(test::read_file(dir / "report.json") ==
          test::read_file(test::source_path("tests/golden/residential.report.json")));
    CHECK(test::read_file(dir / "report.txt") ==
          test::read_file(test::source_path("tests/golden/residential.report.txt")));
}

TEST_CASE("check exits 0 on a compliant model") {
    TempDir dir("toy");
    const auto r = run({"check", "--model", path("tests/fixtures/models/toy_compliant.json"), "--out", dir.str()});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("Compliance report for toy_compliant") != std::string::npos);
}

TEST_CASE("check with a rule subset") {
    TempDir dir("subset");
    CHECK(run({"check", "--model", kResidential, "--rules", "2", "--out", dir.str(), "-q"}).code == cli::kExitOk);
    const auto j = json::parse(test::read_file(dir / "report.json"));
    CHECK(j["rules"].size() == 1);
}

TEST_CASE("errors exit 1") {
    TempDir dir("errors");
    CHECK(run({"check", "--model", (dir / "missing.json").string()}).code == cli::kExitError);
    CHECK(run({"check", "--model", kResidential, "--rules", "13", "--out", dir.str()}).code == cli::kExitError);
    CHECK(run({"frobnicate"}).code == cli::kExitError);
    CHECK(run({}).code == cli::kExitError);

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << "{\"units\": \"cubits\"}";
    const auto r = run({"check", "--model", bad.string(), "--out", dir.str()});
    CHECK(r.code == cli::kExitError);
    CHECK(r.err.find("error: model") != std::string::npos);
}

TEST_CASE("help exits 0 and documents the exit codes") {
    const auto r = run({"--help"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("Exit codes") != std::string::npos);
}

TEST_CASE("run executes a reference script") {
    TempDir dir("run");
    const auto out = dir / "result.json";
    const auto ok = run({"run", "--model", kResidential, "--script", path("data/scripts/rule02.chk"), "--out",
                         out.string(), "-q"});
    CHECK(ok.code == cli::kExitOk);
    CHECK(json::parse(test::read_file(out))["rule_id"] == 2);

    CHECK(run({"run", "--model", kResidential, "--script", path("data/scripts/rule01.chk"), "-q"}).code ==
          cli::kExitViolations);
}

TEST_CASE("run reports script errors with a caret") {
    TempDir dir("runbad");
    const auto script = dir / "broken.chk";
    std::ofstream(script) << "rule 2\nlet w = 36 in + 1 sqft\n";
    const auto r = run({"run", "--model", kResidential, "--script", script.string()});
    CHECK(r.code == cli::kExitError);
    CHECK(r.err.find("^") != std::string::npos);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("gen with the instant mock writes program, transcript and session") {
    TempDir dir("gen");
    const auto r = run({"gen", "--model", kResidential, "--rule", "2", "--mock", kMock, "--provider", "instant",
                        "--out", dir.str()});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("success after 1 attempt(s)") != std::string::npos);
    CHECK(fs::exists(dir / "rule02.chk"));
    CHECK(fs::exists(dir / "rule02.transcript.txt"));
    const auto session = json::parse(test::read_file(dir / "rule02.session.json"));
    CHECK(session["success_rate_percent"] == 100.0);
}

TEST_CASE("gen that runs out of attempts exits 1 without a program") {
    TempDir dir("genfail");
    const auto r = run({"gen", "--model", kResidential, "--rule", "5", "--mock", kMock, "--provider", "gemini",
                        "--out", dir.str()});
    CHECK(r.code == cli::kExitError);
    CHECK_FALSE(fs::exists(dir / "rule05.chk"));
    const auto session = json::parse(test::read_file(dir / "rule05.session.json"));
    CHECK(session["attempts_used"] == 10);
    CHECK(session["status"] == false);
}

TEST_CASE("gen against a network provider keeps the key out of every file") {
    const std::string key = "sk-cli-test-NEVER-WRITE-ME";
    const std::string script = test::read_file(test::source_path("data/scripts/rule02.chk"));
    std::string seen_auth;
    httplib::Server server;
    server.Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        const json reply = {{"choices", json::array({{{"message", {{"content", "```\n" + script + "```"}}}}})}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    TempDir dir("gennet");
    const auto config = dir / "providers.json";
    json provider = {{"name", "stub"},
                     {"endpoint", fmt::format("http://127.0.0.1:{}/v1/chat", port)},
                     {"model", "m"},
                     {"api_key_env", "BIMCHECK_CLI_STUB_KEY"}};
    std::ofstream(config) << json{{"providers", json::array({provider})}}.dump();
    ::setenv("BIMCHECK_CLI_STUB_KEY", key.c_str(), 1);
    const auto r = run({"gen", "--model", kResidential, "--rule", "2", "--providers", config.string(), "--out",
                        (dir / "out").string()});
    ::unsetenv("BIMCHECK_CLI_STUB_KEY");
    server.stop();
    t.join();

    CHECK(r.code == cli::kExitOk);
    CHECK(seen_auth == "Bearer " + key);
    CHECK(r.out.find(key) == std::string::npos);
    CHECK(r.err.find(key) == std::string::npos);
    for (const auto& entry : fs::recursive_directory_iterator(dir.str())) {
        if (entry.is_regular_file()) CHECK(test::read_file(entry.path()).find(key) == std::string::npos);
    }

    // Without the key the provider cannot be built.
    CHECK(run({"gen", "--model", kResidential, "--rule", "2", "--providers", config.string(), "--out",
               (dir / "out2").string()})
              .code == cli::kExitError);
}

TEST_CASE("eval over the mock providers") {
    TempDir dir("eval");
    const auto r = run({"eval", "--model", kResidential, "--rules", "1-5", "--mock", kMock, "--provider", "claude",
                        "--provider", "gemini", "--out", dir.str(), "-q"});
    CHECK(r.code == cli::kExitOk);
    const auto j = json::parse(test::read_file(dir / "eval.json"));
    REQUIRE(j["averages"].size() == 2);
    CHECK(j["averages"][0]["provider"] == "claude");
    CHECK(j["averages"][0]["avg_corrections"].get<double>() == doctest::Approx(3.4));
    CHECK(j["averages"][0]["avg_success_rate"].get<double>() == doctest::Approx(23.7));
    CHECK(j["averages"][1]["avg_success_rate"].get<double>() == doctest::Approx(9.7));
    const auto text = test::read_file(dir / "eval.txt");
    CHECK(text.find("Rule 5") != std::string::npos);
}

TEST_CASE("report --narrate with the narrator fixture") {
    TempDir dir("narrate");
    const auto r = run({"report", "--model", kResidential, "--narrate", "--mock", kMock, "--provider", "narrator",
                        "--out", dir.str(), "--timestamp", "t", "-q"});
    CHECK(r.code == cli::kExitViolations);
    CHECK(r.err.empty());
    CHECK(test::read_file(dir / "report.txt").find("must be widened to 36 in") != std::string::npos);

    const auto fallback = run({"report", "--model", kResidential, "--narrate", "--mock", kMock, "--provider",
                               "instant", "--out", dir.str(), "--timestamp", "t", "-q"});
    CHECK(fallback.code == cli::kExitViolations);
    CHECK(fallback.err.find("warning:") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs with a fixed timestamp") {
    TempDir a("det-a"), b("det-b");
    for (const auto* d : {&a, &b}) {
        run({"check", "--model", path("data/models/office.json"), "--out", d->str(), "--timestamp", "fixed", "-q"});
    }
    CHECK(test::read_file(a / "report.json") == test::read_file(b / "report.json"));
    CHECK(test::read_file(a / "report.txt") == test::read_file(b / "report.txt"));
}

TEST_CASE("report without a provider uses the template recommendations only") {
    TempDir dir("plain");
    const auto r = run({"report", "--model", kResidential, "--out", dir.str(), "--timestamp", "t", "-q"});
    CHECK(r.code == cli::kExitViolations);
    const auto text = test::read_file(dir / "report.txt");
    CHECK(text.find("Recommendations:") != std::string::npos);
    CHECK(text.find("Narrative") == std::string::npos);
    CHECK(json::parse(test::read_file(dir / "report.json"))["narrative"].is_null());

    CHECK(run({"report", "--model", kResidential, "--narrate", "--out", dir.str()}).code == cli::kExitError);
}

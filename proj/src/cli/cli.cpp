#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bimcheck/cli/cli.hpp"
#include "bimcheck/eval/eval.hpp"
#include "bimcheck/orchestrator/repair.hpp"
#include "bimcheck/report/report.hpp"
#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFooter = R"(Check programs are CheckScript files with the .chk extension; see docs/checkscript.ebnf.
Fixture providers (--mock DIR) replay DIR/<provider>/<rule>/attempt<N>.txt for generation
and DIR/<provider>/report/attempt1.txt for report narration.
Network providers read their key from the environment variable named in the provider config.
Exit codes: 0 compliant or success, 2 non-compliant findings, 1 error.)";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError(fmt::format("cannot write {}", path.string()));
    out << text;
}

std::string utc_now() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

struct Common {
    std::string model_path;
    std::string rules = "all";
    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;
};

struct ProviderChoice {
    std::string providers_path;
    std::string mock_dir;
    std::vector<std::string> names;
};

rules::RuleConfig load_config(const std::string& path) {
    return path.empty() ? rules::RuleConfig::defaults() : rules::load_rule_config(read_text(path));
}

// Providers by name, from the mock directory or the provider config file.
std::vector<std::unique_ptr<orchestrator::Provider>> make_providers(const ProviderChoice& choice) {
    std::vector<std::unique_ptr<orchestrator::Provider>> out;
    if (!choice.mock_dir.empty()) {
        std::vector<std::string> names = choice.names;
        if (names.empty() && !choice.providers_path.empty()) {
            for (const auto& c : orchestrator::load_provider_configs(read_text(choice.providers_path))) {
                names.push_back(c.name);
            }
        }
        if (names.empty()) {
            for (const auto& entry : fs::directory_iterator(choice.mock_dir)) {
                if (entry.is_directory()) names.push_back(entry.path().filename().string());
            }
            std::sort(names.begin(), names.end());
        }
        for (const auto& n : names) out.push_back(std::make_unique<orchestrator::FixtureProvider>(choice.mock_dir, n));
        return out;
    }
    if (choice.providers_path.empty()) throw UsageError("give --providers <config> or --mock <fixtures-dir>");
    const auto configs = orchestrator::load_provider_configs(read_text(choice.providers_path));
    for (const auto& c : configs) {
        if (!choice.names.empty() && std::find(choice.names.begin(), choice.names.end(), c.name) == choice.names.end()) {
            continue;
        }
        out.push_back(orchestrator::make_provider(c));
    }
    for (const auto& n : choice.names) {
        if (std::none_of(out.begin(), out.end(), [&](const auto& p) { return p->name() == n; })) {
            throw UsageError(fmt::format("provider '{}' is not in {}", n, choice.providers_path));
        }
    }
    return out;
}

void add_provider_options(CLI::App& cmd, ProviderChoice& choice, bool many) {
    cmd.add_option("--providers", choice.providers_path, "provider config file (JSON)")->check(CLI::ExistingFile);
    cmd.add_option("--mock", choice.mock_dir, "fixture directory replacing network providers")
        ->check(CLI::ExistingDirectory);
    if (many) {
        cmd.add_option("--provider", choice.names, "provider name(s) to use, in order");
    } else {
        cmd.add_option("--provider", choice.names, "provider name")->expected(1);
    }
}

std::vector<rules::CheckResult> run_oracles(const BuildingModel& model, const std::vector<int>& ids,
                                            const rules::RuleConfig& config) {
    std::vector<rules::CheckResult> results;
    for (const int id : ids) results.push_back(rules::check_rule(model, id, config));
    return results;
}

void write_report(const report::ComplianceReport& r, const fs::path& dir, std::ostream& out, bool quiet) {
    const std::string text = report::render_report(r, report::Format::text);
    write_text(dir / "report.json", report::render_report(r, report::Format::structured));
    write_text(dir / "report.txt", text);
    if (!quiet) out << text;
}

}  // namespace

std::vector<int> parse_rule_selection(const std::string& text) {
    std::vector<int> ids;
    auto check = [](int id) {
        if (id < 1 || id > rules::kRuleCount) {
            throw std::invalid_argument(fmt::format("rule {} is outside 1..{}", id, rules::kRuleCount));
        }
        return id;
    };
    if (text == "all") {
        for (int i = 1; i <= rules::kRuleCount; ++i) ids.push_back(i);
        return ids;
    }
    static const std::regex range(R"(^\s*(\d+)\s*(?:\.\.|-)\s*(\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, range)) {
        const int lo = check(std::stoi(m[1]));
        const int hi = check(std::stoi(m[2]));
        if (lo > hi) throw std::invalid_argument(fmt::format("empty rule range '{}'", text));
        for (int i = lo; i <= hi; ++i) ids.push_back(i);
        return ids;
    }
    static const std::regex item(R"(^\s*(\d+)\s*$)");
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        if (!std::regex_match(part, m, item)) {
            throw std::invalid_argument(fmt::format("cannot read rule selection '{}'; use all, 1..12 or 1,3,5", text));
        }
        const int id = check(std::stoi(m[1]));
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    if (ids.empty()) throw std::invalid_argument("no rules selected");
    std::sort(ids.begin(), ids.end());
    return ids;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bimcheck: building-code compliance checks over BIM models"};
    app.footer(kFooter);
    app.require_subcommand(1);

    Common common;
    ProviderChoice choice;
    std::string timestamp;
    std::string script_path;
    int rule_id = 0;
    int max_attempts = 10;
    int parallelism = 1;
    bool narrate = false;

    auto add_common = [&](CLI::App& cmd, bool with_rules) {
        cmd.add_option("--model", common.model_path, "building model file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        if (with_rules) cmd.add_option("--rules", common.rules, "rules to check: all, 1..12, 1-5 or 1,3,7");
        cmd.add_option("--config", common.config_path, "threshold overrides (JSON)")->check(CLI::ExistingFile);
        cmd.add_flag("-q,--quiet", common.quiet, "only write files");
    };

    auto* check = app.add_subcommand("check", "run the built-in rule checks and write the report");
    add_common(*check, true);
    check->add_option("--out", common.out_dir, "output directory for report.json and report.txt");
    check->add_option("--timestamp", timestamp, "fixed report timestamp, for reproducible output");

    auto* run_cmd = app.add_subcommand("run", "execute a CheckScript (.chk) program on a model");
    add_common(*run_cmd, false);
    run_cmd->add_option("--script", script_path, "CheckScript program")->required()->check(CLI::ExistingFile);
    std::string result_path;
    run_cmd->add_option("--out", result_path, "write the CheckResult JSON here");

    auto* gen = app.add_subcommand("gen", "generate a check program with an LLM and repair it from feedback");
    add_common(*gen, false);
    gen->add_option("--rule", rule_id, "rule id")->required()->check(CLI::Range(1, rules::kRuleCount));
    gen->add_option("--max-attempts", max_attempts, "provider calls before giving up")->check(CLI::PositiveNumber);
    gen->add_option("--out", common.out_dir, "output directory for the program, transcript and session");
    add_provider_options(*gen, choice, false);

    auto* eval_cmd = app.add_subcommand("eval", "run repair sessions over providers and rules; print the metrics table");
    add_common(*eval_cmd, true);
    eval_cmd->add_option("--max-attempts", max_attempts, "provider calls per session")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--parallel", parallelism, "sessions to run at once")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--out", common.out_dir, "output directory for eval.txt and eval.json");
    add_provider_options(*eval_cmd, choice, true);

    auto* report_cmd = app.add_subcommand("report", "check the model and write the report, optionally narrated");
    add_common(*report_cmd, true);
    report_cmd->add_option("--out", common.out_dir, "output directory for report.json and report.txt");
    report_cmd->add_option("--timestamp", timestamp, "fixed report timestamp, for reproducible output");
    report_cmd->add_flag("--narrate", narrate, "ask a provider for a narrative section");
    add_provider_options(*report_cmd, choice, false);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        const BuildingModel model = load_model_file(common.model_path);
        const rules::RuleConfig config = load_config(common.config_path);
        const fs::path out_dir = common.out_dir;

        if (check->parsed() || report_cmd->parsed()) {
            const auto ids = parse_rule_selection(common.rules);
            auto r = report::build_report(model, run_oracles(model, ids, config),
                                          timestamp.empty() ? utc_now() : timestamp);
            if (narrate) {
                const auto providers = make_providers(choice);
                if (providers.empty()) throw UsageError("--narrate needs a provider");
                report::narrate_report(*providers.front(), r);
                if (r.narrative_notice) err << "warning: " << *r.narrative_notice << "\n";
            }
            write_report(r, out_dir, out, common.quiet);
            return r.has_violations() ? kExitViolations : kExitOk;
        }

        if (run_cmd->parsed()) {
            const std::string source = read_text(script_path);
            try {
                const auto program = script::parse(source);
                script::typecheck(program);
                script::ExecOptions exec;
                exec.config = config;
                const auto result = script::execute(program, model, exec);
                const std::string json = rules::to_json(result).dump(2) + "\n";
                if (!result_path.empty()) write_text(result_path, json);
                if (!common.quiet) out << json;
                return result.overall() == rules::Status::non_compliant ? kExitViolations : kExitOk;
            } catch (const script::ScriptError& e) {
                err << script::feedback_text(e, source);
                return kExitError;
            }
        }

        if (gen->parsed()) {
            const auto providers = make_providers(choice);
            if (providers.size() != 1) throw UsageError("gen needs exactly one provider; pick it with --provider");
            orchestrator::GenerateOptions opts;
            opts.max_attempts = max_attempts;
            opts.config = config;
            const auto session =
                orchestrator::generate_check(*providers.front(), rules::rule_spec(rule_id, config), model, opts);
            const fs::path stem = out_dir / fmt::format("rule{:02}", rule_id);
            write_text(stem.string() + ".transcript.txt", orchestrator::transcript_text(session));
            write_text(stem.string() + ".session.json", orchestrator::to_json(session).dump(2) + "\n");
            if (session.final_source) write_text(stem.string() + ".chk", *session.final_source + "\n");
            if (!common.quiet) {
                out << fmt::format("rule {} via {}: {} after {} attempt(s), {} correction(s), success rate {:.1f}%\n",
                                   rule_id, session.provider, session.success ? "success" : "failed",
                                   session.attempts_used(), session.correction_attempts, session.success_rate_percent);
            }
            return session.success ? kExitOk : kExitError;
        }

        if (eval_cmd->parsed()) {
            const auto ids = parse_rule_selection(common.rules);
            const auto owned = make_providers(choice);
            std::vector<orchestrator::Provider*> providers;
            for (const auto& p : owned) providers.push_back(p.get());
            eval::EvalOptions opts;
            opts.generate.max_attempts = max_attempts;
            opts.generate.config = config;
            opts.parallelism = parallelism;
            const auto table = eval::run_eval(providers, ids, model, opts);
            const std::string text = eval::render_eval(table, eval::Format::text);
            write_text(out_dir / "eval.txt", text);
            write_text(out_dir / "eval.json", eval::render_eval(table, eval::Format::structured));
            if (!common.quiet) out << text;
            return kExitOk;
        }
    } catch (const ModelError& e) {
        err << "error: model " << common.model_path << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace bimcheck::cli

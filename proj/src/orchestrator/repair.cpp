#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "bimcheck/orchestrator/repair.hpp"

namespace bimcheck::orchestrator {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

Outcome outcome_of(script::Phase phase) {
    switch (phase) {
        case script::Phase::lex: return Outcome::lex_error;
        case script::Phase::parse: return Outcome::parse_error;
        case script::Phase::type: return Outcome::type_error;
        case script::Phase::runtime: return Outcome::runtime_error;
    }
    return Outcome::runtime_error;
}

}  // namespace

std::string extract_source(std::string_view completion) {
    // A fence opens with ``` at the start of a line; the info string (language tag) is skipped.
    std::size_t open = std::string_view::npos;
    for (std::size_t pos = 0; pos < completion.size();) {
        const std::size_t eol = completion.find('\n', pos);
        const std::string_view line =
            completion.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        if (trim(line).starts_with("```")) {
            open = eol == std::string_view::npos ? completion.size() : eol + 1;
            break;
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    std::string_view body = completion;
    if (open != std::string_view::npos) {
        body = completion.substr(open);
        for (std::size_t pos = 0; pos < body.size();) {
            const std::size_t eol = body.find('\n', pos);
            const std::string_view line =
                body.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
            if (trim(line).starts_with("```")) {
                body = body.substr(0, pos);
                break;
            }
            if (eol == std::string_view::npos) break;
            pos = eol + 1;
        }
    }
    const std::string_view text = trim(body);
    if (text.empty()) throw EmptyCompletion();
    return std::string(text);
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::ok: return "ok";
        case Outcome::lex_error: return "lex_error";
        case Outcome::parse_error: return "parse_error";
        case Outcome::type_error: return "type_error";
        case Outcome::runtime_error: return "runtime_error";
        case Outcome::provider_error: return "provider_error";
    }
    return "?";
}

double RepairSession::total_latency_seconds() const {
    return std::accumulate(attempts.begin(), attempts.end(), 0.0,
                           [](double acc, const Attempt& a) { return acc + a.latency_seconds; });
}

double round_one_decimal(double value) {
    // The nudge keeps values such as 0.05 that sit just below a half in binary rounding up.
    return std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0;
}

double success_rate(int attempts_used, bool success) {
    if (attempts_used < 1) throw std::invalid_argument("success rate needs at least one attempt");
    return round_one_decimal(100.0 * (success ? 1.0 : 0.0) / attempts_used);
}

RepairSession generate_check(Provider& provider, const rules::RuleSpec& rule, const BuildingModel& model,
                             const GenerateOptions& options) {
    if (options.max_attempts < 1) throw std::invalid_argument("max_attempts must be at least 1");
    RepairSession session;
    session.rule_id = rule.id;
    session.provider = provider.name();

    std::optional<PriorAttempt> prior;
    for (int index = 1; index <= options.max_attempts; ++index) {
        Attempt attempt;
        attempt.index = index;
        const PromptBundle bundle = build_prompt(rule, prior);
        attempt.prompt_rendered = render_prompt(bundle);

        const auto started = std::chrono::steady_clock::now();
        try {
            attempt.completion = provider.complete(to_messages(bundle), {std::to_string(rule.id), index});
        } catch (const ProviderError& e) {
            attempt.latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            attempt.outcome = Outcome::provider_error;
            attempt.feedback = fmt::format("provider error ({}): {}", to_string(e.kind()), e.what());
            session.attempts.push_back(std::move(attempt));
            // The model never saw a program of its own here, so the next prompt stays the same.
            continue;
        }
        attempt.latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        std::string source;
        try {
            source = extract_source(attempt.completion);
        } catch (const EmptyCompletion& e) {
            attempt.outcome = Outcome::provider_error;
            attempt.feedback = e.what();
            session.attempts.push_back(std::move(attempt));
            continue;
        }
        attempt.extracted_source = source;

        try {
            const script::CheckProgram program = script::parse(source);
            script::typecheck(program);
            script::ExecOptions exec;
            exec.config = options.config;
            exec.step_budget = options.step_budget;
            exec.rule_id = rule.id;
            session.result = script::execute(program, model, exec);
            attempt.outcome = Outcome::ok;
            session.final_source = source;
            session.attempts.push_back(std::move(attempt));
            session.success = true;
            break;
        } catch (const script::ScriptError& e) {
            attempt.outcome = outcome_of(e.phase());
            attempt.feedback = script::feedback_text(e, source);
            attempt.error = e;
            prior = PriorAttempt{source, attempt.feedback};
            session.attempts.push_back(std::move(attempt));
        }
    }

    const int used = session.attempts_used();
    session.correction_attempts = session.success ? used - 1 : used;
    session.success_rate_percent = success_rate(used, session.success);
    return session;
}

json to_json(const RepairSession& s) {
    json attempts = json::array();
    for (const auto& a : s.attempts) {
        json j = {{"index", a.index},
                  {"outcome", to_string(a.outcome)},
                  {"latency_seconds", a.latency_seconds},
                  {"prompt", a.prompt_rendered},
                  {"completion", a.completion}};
        j["source"] = a.extracted_source ? json(*a.extracted_source) : json(nullptr);
        j["feedback"] = a.feedback.empty() ? json(nullptr) : json(a.feedback);
        if (a.error) {
            j["error"] = {{"phase", script::to_string(a.error->phase())},
                          {"line", a.error->line()},
                          {"column", a.error->column()},
                          {"message", a.error->message()}};
        }
        attempts.push_back(std::move(j));
    }
    json out = {{"rule_id", s.rule_id},
                {"provider", s.provider},
                {"status", s.success},
                {"attempts_used", s.attempts_used()},
                {"correction_attempts", s.correction_attempts},
                {"success_rate_percent", s.success_rate_percent},
                {"measured_latency_seconds", s.total_latency_seconds()},
                {"attempts", std::move(attempts)}};
    out["final_source"] = s.final_source ? json(*s.final_source) : json(nullptr);
    out["result"] = s.result ? rules::to_json(*s.result) : json(nullptr);
    return out;
}

std::string transcript_text(const RepairSession& s) {
    std::string out = fmt::format("Repair session: rule {}, provider {}\n", s.rule_id, s.provider);
    for (const auto& a : s.attempts) {
        out += fmt::format("\n=== Attempt {} ({}) ===\n", a.index, to_string(a.outcome));
        out += "--- prompt ---\n" + a.prompt_rendered;
        if (!a.prompt_rendered.ends_with('\n')) out += '\n';
        if (!a.completion.empty()) {
            out += "--- completion ---\n" + a.completion;
            if (!a.completion.ends_with('\n')) out += '\n';
        }
        if (!a.feedback.empty()) {
            out += "--- feedback ---\n" + a.feedback;
            if (!a.feedback.ends_with('\n')) out += '\n';
        }
    }
    out += fmt::format("\nstatus: {}\nattempts used: {}\ncorrection attempts: {}\nsuccess rate: {:.1f}%\n",
                       s.success ? "success" : "failed", s.attempts_used(), s.correction_attempts,
                       s.success_rate_percent);
    return out;
}

}  // namespace bimcheck::orchestrator

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bimcheck/model/model.hpp"
#include "bimcheck/orchestrator/provider.hpp"
#include "bimcheck/rules/rules.hpp"
#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::orchestrator {

class EmptyCompletion : public std::runtime_error {
public:
    EmptyCompletion() : std::runtime_error("the completion contains no program text") {}
};

// Body of the first fenced code block, or the whole completion trimmed when there is none.
std::string extract_source(std::string_view completion);

enum class Outcome { ok, lex_error, parse_error, type_error, runtime_error, provider_error };

std::string_view to_string(Outcome outcome);

struct Attempt {
    int index = 1;
    std::string prompt_rendered;
    std::string completion;
    std::optional<std::string> extracted_source;
    Outcome outcome = Outcome::provider_error;
    std::optional<script::ScriptError> error;
    std::string feedback;  // caret-marked block for script errors, message for provider errors
    double latency_seconds = 0.0;  // wall clock around the provider call
};

struct RepairSession {
    int rule_id = 0;
    std::string provider;
    std::vector<Attempt> attempts;
    bool success = false;
    int correction_attempts = 0;
    double success_rate_percent = 0.0;
    std::optional<std::string> final_source;
    std::optional<rules::CheckResult> result;

    int attempts_used() const { return static_cast<int>(attempts.size()); }
    double total_latency_seconds() const;
};

// One decimal, halves rounded up.
double round_one_decimal(double value);
// 100 x (1 if success else 0) / attempts_used, rounded to one decimal.
double success_rate(int attempts_used, bool success);

struct GenerateOptions {
    int max_attempts = 10;
    rules::RuleConfig config = rules::RuleConfig::defaults();
    std::uint64_t step_budget = script::kDefaultStepBudget;
};

// Generate, run on the model, feed errors back; stops on the first clean run or after
// max_attempts provider calls. Throws std::invalid_argument when max_attempts < 1.
RepairSession generate_check(Provider& provider, const rules::RuleSpec& rule, const BuildingModel& model,
                             const GenerateOptions& options = {});

nlohmann::json to_json(const RepairSession& session);
// Human-readable transcript: each prompt, completion and feedback block in order.
std::string transcript_text(const RepairSession& session);

}  // namespace bimcheck::orchestrator

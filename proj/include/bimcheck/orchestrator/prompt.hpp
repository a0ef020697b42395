#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bimcheck/rules/rules.hpp"

namespace bimcheck::orchestrator {

struct Message {
    std::string role;  // "system", "user" or "assistant"
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

// What went wrong last time, quoted back to the model on a repair attempt.
struct PriorAttempt {
    std::string source;
    std::string feedback;  // feedback_text() output, caret block included
};

// Sections of a generation prompt, declared in the order they are rendered.
struct PromptBundle {
    std::string persona;
    std::string basic_prompt;
    std::string rule_description;
    std::string context;
    std::vector<std::string> general_instructions;
    std::optional<std::string> rule_specific_instructions;
    std::string format_instructions;
    std::string audience;
    std::optional<std::string> repair_section;
};

PromptBundle build_prompt(const rules::RuleSpec& rule, const std::optional<PriorAttempt>& prior = std::nullopt);

// Everything but the persona, section by section.
std::string render_user_message(const PromptBundle& bundle);
// Persona first, then the user message; this is what a transcript records.
std::string render_prompt(const PromptBundle& bundle);
// Two-message conversation: system = persona, user = the rest.
std::vector<Message> to_messages(const PromptBundle& bundle);

}  // namespace bimcheck::orchestrator

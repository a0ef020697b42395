#include <fmt/format.h>

#include "bimcheck/orchestrator/prompt.hpp"
#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::orchestrator {

namespace {

constexpr const char* kPersona =
    "You are a building-code compliance engineer who writes precise CheckScript programs "
    "against BIM element data.";

constexpr const char* kBasicPrompt = "Write a CheckScript program that checks the following building-code rule.";

constexpr const char* kContext =
    "The program runs in the bimcheck CheckScript interpreter against one building model. The model "
    "holds levels and categorized elements with typed parameters and optional plan geometry. The "
    "interpreter is sandboxed: no files, no network, no imports, and a fixed step budget.";

constexpr const char* kFormat =
    "Return exactly one fenced code block containing the whole program and nothing else inside it. "
    "Start the program with the line `rule <id>`. Put a short # comment above each section "
    "explaining what it checks. Use descriptive let names.";

constexpr const char* kAudience =
    "The program will be read by building professionals who know the code but not programming, "
    "so keep it direct and the notes plain.";

std::string categories_line() {
    std::string names;
    for (const Category c : kAllCategories) {
        if (!names.empty()) names += ", ";
        names += to_string(c);
    }
    return names;
}

std::vector<std::string> general_instructions(const rules::RuleSpec& rule) {
    std::vector<std::string> out;
    out.push_back("Write CheckScript only, following this grammar exactly:\n" + script::grammar_ebnf());
    out.push_back("Element categories (use collect(Category)): " + categories_line() + ".");

    std::string functions = "Available functions:";
    for (const auto& f : script::function_docs()) functions += fmt::format("\n  {}: {}", f.signature, f.summary);
    out.push_back(functions);

    std::string params = "Known parameters (read with e.param(\"name\"), guard optional ones with e.has(\"name\")):";
    for (const auto& p : script::parameter_schema()) {
        params += fmt::format("\n  {} ({}): {}", p.name, to_string(p.kind), p.summary);
    }
    out.push_back(params);

    out.push_back(
        "Sort every inspected element into compliant or non_compliant with classify(element, status, "
        "measured=..., required=...). Use not_applicable when the data needed for the check is missing. "
        "A non_compliant verdict must carry both measured= and required= evidence. Use "
        "summary(\"subject\", status, ...) for whole-building results that belong to no single element.");
    out.push_back(
        "Write quantities with unit literals: 36 in, 6.67 ft, 120 sqft, 533 mm, 50 cfm. Lengths, areas and "
        "flows cannot be mixed; 1 ft * 1 ft is an area and (x / 1 sqft) turns an area into a plain number.");
    if (!rule.thresholds.empty()) {
        std::string th = "Read code values with threshold(\"name\") instead of hard-coding them:";
        for (const auto& [name, q] : rule.thresholds) th += fmt::format("\n  {} = {}", name, format_quantity(q));
        out.push_back(th);
    }
    out.push_back("Classify each element at most once and give each summary subject only once.");
    return out;
}

void section(std::string& out, std::string_view title, std::string_view body) {
    if (!out.empty()) out += "\n";
    out += fmt::format("## {}\n{}\n", title, body);
}

}  // namespace

PromptBundle build_prompt(const rules::RuleSpec& rule, const std::optional<PriorAttempt>& prior) {
    PromptBundle b;
    b.persona = kPersona;
    b.basic_prompt = kBasicPrompt;
    b.rule_description = rule.description;
    b.context = kContext;
    b.general_instructions = general_instructions(rule);
    b.rule_specific_instructions = rule.dsl_hint;
    b.format_instructions = fmt::format("{} Here the header is `rule {}`.", kFormat, rule.id);
    b.audience = kAudience;
    if (prior) {
        b.repair_section = fmt::format(
            "Your previous program failed. Fix the error below and return the complete corrected program.\n\n"
            "Previous program:\n```\n{}\n```\n\nError:\n{}",
            prior->source, prior->feedback);
    }
    return b;
}

std::string render_user_message(const PromptBundle& b) {
    std::string out;
    section(out, "Task", b.basic_prompt);
    section(out, "Rule description", b.rule_description);
    section(out, "Context", b.context);
    std::string general;
    for (const auto& item : b.general_instructions) general += "- " + item + "\n";
    if (!general.empty()) general.pop_back();
    section(out, "General instructions", general);
    if (b.rule_specific_instructions) section(out, "Rule-specific instructions", *b.rule_specific_instructions);
    section(out, "Format", b.format_instructions);
    section(out, "Audience", b.audience);
    if (b.repair_section) section(out, "Repair", *b.repair_section);
    return out;
}

std::string render_prompt(const PromptBundle& b) {
    std::string out;
    section(out, "Persona", b.persona);
    return out + "\n" + render_user_message(b);
}

std::vector<Message> to_messages(const PromptBundle& b) {
    return {{"system", b.persona}, {"user", render_user_message(b)}};
}

}  // namespace bimcheck::orchestrator

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bimcheck/model/model.hpp"
#include "bimcheck/rules/rules.hpp"
#include "bimcheck/script/ast.hpp"

namespace bimcheck::script {

enum class Phase { lex, parse, type, runtime };

std::string_view to_string(Phase phase);

// Everything needed to report a failed program back to its author.
class ScriptError : public std::runtime_error {
public:
    ScriptError(Phase phase, SourcePos pos, std::string message);

    Phase phase() const { return phase_; }
    int line() const { return pos_.line; }
    int column() const { return pos_.column; }
    const std::string& message() const { return message_; }

private:
    Phase phase_;
    SourcePos pos_;
    std::string message_;
};

// First lex or parse error is thrown; no partial program is returned.
CheckProgram parse(std::string_view source);

// Canonical pretty-print; parse(render(p)) == p.
std::string render(const CheckProgram& program);

// Throws ScriptError(type) on the first problem found.
void typecheck(const CheckProgram& program);

inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000;

struct ExecOptions {
    rules::RuleConfig config = rules::RuleConfig::defaults();
    std::uint64_t step_budget = kDefaultStepBudget;
    // Rule id stamped on the result; falls back to the program's `rule N` header, then 0.
    std::optional<int> rule_id;
};

// Runs a typechecked program. Throws ScriptError(runtime) for missing parameters,
// division by zero, repeated verdicts or an exhausted step budget.
rules::CheckResult execute(const CheckProgram& program, const BuildingModel& model,
                           const ExecOptions& options = {});

// Self-contained error block: phase, position, message, and the source line with a caret.
std::string feedback_text(const ScriptError& error, std::string_view source);

// What the language offers, used for prompts and documentation.
struct FunctionDoc {
    std::string signature;
    std::string summary;
};

const std::string& grammar_ebnf();
const std::vector<FunctionDoc>& function_docs();

struct ParamDoc {
    std::string name;
    ParamKind kind;
    std::string summary;
};

// Parameters a program may read with e.param("..."); anything else is a type error.
const std::vector<ParamDoc>& parameter_schema();
const ParamDoc* find_parameter(std::string_view name);

}  // namespace bimcheck::script

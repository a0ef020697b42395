#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bimcheck/model/model.hpp"
#include "bimcheck/orchestrator/provider.hpp"
#include "bimcheck/rules/rules.hpp"

namespace bimcheck::report {

struct StatusCounts {
    std::size_t compliant = 0;
    std::size_t non_compliant = 0;
    std::size_t not_applicable = 0;

    friend bool operator==(const StatusCounts&, const StatusCounts&) = default;
};

struct RuleSection {
    int rule_id = 0;
    std::string description;
    std::string reference;
    rules::Status overall = rules::Status::not_applicable;
    StatusCounts counts;
    std::vector<rules::Finding> findings;
};

// A failing finding ranked by how far its worst pair misses the limit.
struct WorstFinding {
    int rule_id = 0;
    std::int64_t element_id = 0;
    std::string label;
    std::string key;
    Quantity measured;
    Quantity required;
    double shortfall_percent = 0.0;
};

struct Summary {
    int total_rules = 0;
    int rules_failed = 0;
    std::vector<WorstFinding> worst_findings;  // at most kWorstFindings
};

inline constexpr std::size_t kWorstFindings = 5;

struct Recommendation {
    int rule_id = 0;
    std::int64_t element_id = 0;  // 0 for aggregate findings
    std::string text;
};

struct ComplianceReport {
    std::string model_name;
    std::string generated_at;
    std::vector<RuleSection> per_rule;
    Summary summary;
    std::vector<Recommendation> recommendations;
    std::map<std::int64_t, std::string> element_labels;  // every element a finding names
    std::optional<std::string> narrative;
    std::optional<std::string> narrative_notice;  // set when narration fell back to the templates

    bool has_violations() const { return summary.rules_failed > 0; }
};

// generated_at is taken as given so that output does not depend on the clock.
ComplianceReport build_report(const BuildingModel& model, const std::vector<rules::CheckResult>& results,
                              std::string generated_at);

// "element 7 (Door 'Back Door')", or "element 7" when the id is not in the model.
std::string element_label(const BuildingModel& model, std::int64_t id);

enum class Format { structured, text };

nlohmann::json to_json(const ComplianceReport& report);
std::string render_report(const ComplianceReport& report, Format format);

// Asks the provider for prose built on the structured report and stores it on the report.
// Provider failures are not fatal: the narrative falls back to the template recommendations
// and narrative_notice says why.
const std::string& narrate_report(orchestrator::Provider& provider, ComplianceReport& report);

}  // namespace bimcheck::report

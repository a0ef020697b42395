#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bimcheck/rules/rules.hpp"

namespace bimcheck::rules {

using nlohmann::json;

namespace {

std::string finding_key(const Finding& f) {
    return f.element_id != 0 ? fmt::format("element {}", f.element_id) : fmt::format("'{}'", f.subject);
}

json quantity_json(const Quantity& q) {
    return {{"dimension", to_string(q.dim)}, {"value", q.value}, {"display", format_quantity(q)}};
}

}  // namespace

std::string_view to_string(Status s) {
    switch (s) {
        case Status::compliant: return "compliant";
        case Status::non_compliant: return "non_compliant";
        case Status::not_applicable: return "not_applicable";
    }
    return "?";
}

std::optional<Status> parse_status(std::string_view s) {
    if (s == "compliant") return Status::compliant;
    if (s == "non_compliant") return Status::non_compliant;
    if (s == "not_applicable") return Status::not_applicable;
    return std::nullopt;
}

Status CheckResult::overall() const {
    bool any_compliant = false;
    for (const auto& f : findings) {
        if (f.status == Status::non_compliant) return Status::non_compliant;
        any_compliant = any_compliant || f.status == Status::compliant;
    }
    return any_compliant ? Status::compliant : Status::not_applicable;
}

std::size_t CheckResult::count(Status s) const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [s](const Finding& f) { return f.status == s; }));
}

std::string verdict_diff(const CheckResult& a, const CheckResult& b) {
    const std::size_t n = std::min(a.findings.size(), b.findings.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Finding& fa = a.findings[i];
        const Finding& fb = b.findings[i];
        if (fa.element_id != fb.element_id || fa.subject != fb.subject) {
            return fmt::format("finding #{}: {} vs {}", i + 1, finding_key(fa), finding_key(fb));
        }
        if (fa.status != fb.status) {
            return fmt::format("finding #{} ({}): {} vs {}", i + 1, finding_key(fa), to_string(fa.status),
                               to_string(fb.status));
        }
    }
    if (a.findings.size() != b.findings.size()) {
        return fmt::format("{} findings vs {} findings", a.findings.size(), b.findings.size());
    }
    return {};
}

bool same_verdicts(const CheckResult& a, const CheckResult& b) { return verdict_diff(a, b).empty(); }

json to_json(const Finding& f) {
    json measured = json::object();
    for (const auto& [k, q] : f.measured) measured[k] = quantity_json(q);
    json required = json::object();
    for (const auto& [k, q] : f.required) required[k] = quantity_json(q);
    json out = {
        {"status", to_string(f.status)},
        {"measured", measured},
        {"required", required},
        {"note", f.note},
    };
    if (f.element_id != 0) out["element_id"] = f.element_id;
    if (!f.subject.empty()) out["subject"] = f.subject;
    return out;
}

json to_json(const CheckResult& r) {
    json findings = json::array();
    for (const auto& f : r.findings) findings.push_back(to_json(f));
    return {
        {"rule_id", r.rule_id},
        {"overall", to_string(r.overall())},
        {"counts",
         {{"compliant", r.count(Status::compliant)},
          {"non_compliant", r.count(Status::non_compliant)},
          {"not_applicable", r.count(Status::not_applicable)}}},
        {"findings", findings},
    };
}

}  // namespace bimcheck::rules

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bimcheck/report/report.hpp"

namespace bimcheck::report {

using nlohmann::json;
using rules::Finding;
using rules::Status;

namespace {

std::string display(const std::string& key, const Quantity& q) {
    if (key == "ratio" && q.dim == Dimension::number) return format_number(q.value * 100.0, 1) + "%";
    return format_quantity(q);
}

rules::Limit limit_for(int rule_id) {
    return rule_id >= 1 && rule_id <= rules::kRuleCount ? rules::limit_kind(rule_id) : rules::Limit::minimum;
}

struct Pair {
    std::string key;
    Quantity measured;
    Quantity required;
};

// Pairs on the wrong side of the limit. Mismatched dimensions can only come from a
// generated program; they are skipped rather than compared.
std::vector<Pair> failing_pairs(int rule_id, const Finding& f) {
    std::vector<Pair> out;
    const rules::Limit limit = limit_for(rule_id);
    for (const auto& [key, m] : f.measured) {
        const auto r = f.required.find(key);
        if (r == f.required.end() || r->second.dim != m.dim) continue;
        const bool ok = limit == rules::Limit::minimum ? at_least(m, r->second) : at_most(m, r->second);
        if (!ok) out.push_back({key, m, r->second});
    }
    return out;
}

double shortfall_percent(rules::Limit limit, const Pair& p) {
    const double gap = limit == rules::Limit::minimum ? p.required.value - p.measured.value
                                                      : p.measured.value - p.required.value;
    const double base = std::abs(p.required.value);
    // Rounded so that equal shortfalls tie exactly and keep rule order.
    return base > 0.0 ? std::round(1e6 * 100.0 * gap / base) / 1e6 : 100.0;
}

std::string change_text(rules::Limit limit, const Pair& p) {
    if (p.key == "material_match") return "use an allowed structural panel material";
    if (p.key == "span_rating") return "record the panel span rating";
    if (p.key == "sinks") return "install a sink inside the room";
    const char* verb = limit == rules::Limit::minimum ? "increase" : "reduce";
    const char* bound = limit == rules::Limit::minimum ? "at least" : "at most";
    return fmt::format("{} {} from {} to {} {}", verb, p.key, display(p.key, p.measured), bound,
                       display(p.key, p.required));
}

std::string action(int rule_id, const Finding& f, const std::string& label) {
    if (f.element_id == 0) {
        switch (rule_id) {
            case 5: return "Reduce glazing on the exterior walls";
            case 6: return "Enlarge the largest habitable room";
            case 8: return fmt::format("Install a {} in the dwelling unit", f.subject);
            case 11: return fmt::format("Move {} further apart", f.subject);
            default: return fmt::format("Resolve '{}'", f.subject);
        }
    }
    switch (rule_id) {
        case 1: return "Enlarge exit door " + label;
        case 2: return "Widen stair " + label;
        case 3: return "Raise guard " + label;
        case 4: return "Raise the ceiling of " + label;
        case 6: return "Enlarge " + label;
        case 7: return "Clear the floor in front of " + label;
        case 9: return "Add a sink to kitchen " + label;
        case 10: return "Replace floor panel " + label;
        case 12: return "Increase outdoor air supplied to " + label;
        default: return "Correct " + label;
    }
}

std::string recommendation_text(const BuildingModel& model, int rule_id, const Finding& f) {
    const std::string label = f.element_id != 0 ? element_label(model, f.element_id) : f.subject;
    std::string text = action(rule_id, f, label);
    const auto pairs = failing_pairs(rule_id, f);
    if (rule_id == 8 && f.element_id == 0) return text + ".";
    if (!pairs.empty()) {
        std::vector<std::string> changes;
        for (const auto& p : pairs) changes.push_back(change_text(limit_for(rule_id), p));
        return fmt::format("{}: {}.", text, fmt::join(changes, "; "));
    }
    return f.note.empty() ? text + "." : fmt::format("{}: {}.", text, f.note);
}

json quantity_json(const std::string& key, const Quantity& q) {
    return {{"dimension", to_string(q.dim)}, {"value", q.value}, {"display", display(key, q)}};
}

std::string label_of(const ComplianceReport& r, std::int64_t id) {
    const auto it = r.element_labels.find(id);
    return it != r.element_labels.end() ? it->second : fmt::format("element {}", id);
}

json finding_json(const ComplianceReport& r, const Finding& f) {
    json j = {{"status", to_string(f.status)}, {"note", f.note}};
    if (f.element_id != 0) {
        j["element_id"] = f.element_id;
        j["element"] = label_of(r, f.element_id);
    } else {
        j["subject"] = f.subject;
    }
    json measured = json::object();
    for (const auto& [k, q] : f.measured) measured[k] = quantity_json(k, q);
    json required = json::object();
    for (const auto& [k, q] : f.required) required[k] = quantity_json(k, q);
    j["measured"] = std::move(measured);
    j["required"] = std::move(required);
    return j;
}

std::string status_heading(Status s) {
    switch (s) {
        case Status::compliant: return "compliant";
        case Status::non_compliant: return "non-compliant";
        case Status::not_applicable: return "not applicable";
    }
    return "?";
}

std::string evidence_line(const Finding& f) {
    std::vector<std::string> parts;
    for (const auto& [key, m] : f.measured) {
        const auto r = f.required.find(key);
        parts.push_back(r == f.required.end() ? fmt::format("{} {}", key, display(key, m))
                                              : fmt::format("{} {} (required {})", key, display(key, m),
                                                            display(key, r->second)));
    }
    if (!f.note.empty()) parts.push_back(f.note);
    return fmt::format("{}", fmt::join(parts, "; "));
}

}  // namespace

std::string element_label(const BuildingModel& model, std::int64_t id) {
    const Element* e = model.find_element(id);
    if (e == nullptr) return fmt::format("element {}", id);
    return fmt::format("element {} ({} '{}')", id, to_string(e->category), e->name);
}

ComplianceReport build_report(const BuildingModel& model, const std::vector<rules::CheckResult>& results,
                              std::string generated_at) {
    ComplianceReport r;
    r.model_name = model.name();
    r.generated_at = std::move(generated_at);
    r.summary.total_rules = static_cast<int>(results.size());

    std::vector<std::pair<std::size_t, WorstFinding>> ranked;  // (order, finding) keeps ties stable
    for (const auto& result : results) {
        RuleSection s;
        s.rule_id = result.rule_id;
        if (result.rule_id >= 1 && result.rule_id <= rules::kRuleCount) {
            const auto spec = rules::rule_spec(result.rule_id);
            s.description = spec.description;
            s.reference = spec.reference;
        }
        s.overall = result.overall();
        s.counts = {result.count(Status::compliant), result.count(Status::non_compliant),
                    result.count(Status::not_applicable)};
        s.findings = result.findings;
        if (s.overall == Status::non_compliant) ++r.summary.rules_failed;

        for (const auto& f : result.findings) {
            if (f.element_id != 0) r.element_labels.emplace(f.element_id, element_label(model, f.element_id));
            if (f.status != Status::non_compliant) continue;
            r.recommendations.push_back({result.rule_id, f.element_id, recommendation_text(model, result.rule_id, f)});
            const auto pairs = failing_pairs(result.rule_id, f);
            if (pairs.empty()) continue;
            const rules::Limit limit = limit_for(result.rule_id);
            const auto worst = std::max_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
                return shortfall_percent(limit, a) < shortfall_percent(limit, b);
            });
            ranked.push_back({ranked.size(),
                              {result.rule_id, f.element_id,
                               f.element_id != 0 ? element_label(model, f.element_id) : f.subject, worst->key,
                               worst->measured, worst->required, shortfall_percent(limit, *worst)}});
        }
        r.per_rule.push_back(std::move(s));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second.shortfall_percent > b.second.shortfall_percent;
    });
    for (std::size_t i = 0; i < ranked.size() && i < kWorstFindings; ++i) {
        r.summary.worst_findings.push_back(ranked[i].second);
    }
    return r;
}

json to_json(const ComplianceReport& r) {
    json rules_json = json::array();
    for (const auto& s : r.per_rule) {
        json findings = json::array();
        for (const auto& f : s.findings) findings.push_back(finding_json(r, f));
        rules_json.push_back({{"rule_id", s.rule_id},
                              {"description", s.description},
                              {"reference", s.reference},
                              {"overall", to_string(s.overall)},
                              {"counts",
                               {{"compliant", s.counts.compliant},
                                {"non_compliant", s.counts.non_compliant},
                                {"not_applicable", s.counts.not_applicable}}},
                              {"findings", std::move(findings)}});
    }
    json worst = json::array();
    for (const auto& w : r.summary.worst_findings) {
        worst.push_back({{"rule_id", w.rule_id},
                         {"element_id", w.element_id},
                         {"label", w.label},
                         {"key", w.key},
                         {"measured", quantity_json(w.key, w.measured)},
                         {"required", quantity_json(w.key, w.required)},
                         {"shortfall_percent", w.shortfall_percent}});
    }
    json recs = json::array();
    for (const auto& rec : r.recommendations) {
        recs.push_back({{"rule_id", rec.rule_id}, {"element_id", rec.element_id}, {"text", rec.text}});
    }
    json out = {{"model_name", r.model_name},
                {"generated_at", r.generated_at},
                {"rules", std::move(rules_json)},
                {"summary",
                 {{"total_rules", r.summary.total_rules},
                  {"rules_failed", r.summary.rules_failed},
                  {"worst_findings", std::move(worst)}}},
                {"recommendations", std::move(recs)}};
    if (r.narrative) out["narrative"] = *r.narrative;
    if (r.narrative_notice) out["narrative_notice"] = *r.narrative_notice;
    return out;
}

namespace {

std::string render_text(const ComplianceReport& r) {
    std::string out = fmt::format("Compliance report for {}\nGenerated: {}\n\n", r.model_name, r.generated_at);
    out += fmt::format("Summary: {} rule(s) checked, {} failed.\n", r.summary.total_rules, r.summary.rules_failed);
    if (!r.summary.worst_findings.empty()) {
        out += "Largest shortfalls:\n";
        for (const auto& w : r.summary.worst_findings) {
            out += fmt::format("  - Rule {}: {}: {} {} against {} ({}% off)\n", w.rule_id, w.label, w.key,
                               display(w.key, w.measured), display(w.key, w.required),
                               format_number(w.shortfall_percent, 1));
        }
    }

    for (const auto& s : r.per_rule) {
        out += fmt::format("\n== Rule {}: {} ==\n", s.rule_id, status_heading(s.overall));
        if (!s.reference.empty()) out += s.reference + "\n";
        if (!s.description.empty()) out += s.description + "\n";
        for (const Status st : {Status::compliant, Status::non_compliant, Status::not_applicable}) {
            std::vector<const Finding*> subset;
            for (const auto& f : s.findings) {
                if (f.status == st) subset.push_back(&f);
            }
            out += fmt::format("{} ({}):\n", status_heading(st), subset.size());
            for (const Finding* f : subset) {
                const std::string who = f->element_id != 0 ? label_of(r, f->element_id) : f->subject;
                const std::string evidence = evidence_line(*f);
                out += evidence.empty() ? fmt::format("  - {}\n", who) : fmt::format("  - {}: {}\n", who, evidence);
            }
        }
    }

    out += "\nRecommendations:\n";
    if (r.recommendations.empty()) out += "  none; every checked rule is satisfied or not applicable.\n";
    for (const auto& rec : r.recommendations) out += fmt::format("  - [Rule {}] {}\n", rec.rule_id, rec.text);

    if (r.narrative) {
        out += "\nNarrative:\n";
        if (r.narrative_notice) out += "(" + *r.narrative_notice + ")\n";
        out += *r.narrative;
        if (!r.narrative->ends_with('\n')) out += '\n';
    }
    return out;
}

}  // namespace

std::string render_report(const ComplianceReport& r, Format format) {
    if (format == Format::structured) return to_json(r).dump(2) + "\n";
    return render_text(r);
}

const std::string& narrate_report(orchestrator::Provider& provider, ComplianceReport& report) {
    ComplianceReport source = report;
    source.narrative.reset();
    source.narrative_notice.reset();
    const std::vector<orchestrator::Message> messages = {
        {"system", "You are a building-code consultant writing for the design team of the building."},
        {"user",
         "Write a compliance report from the check results below. Summarize the key issues, describe each "
         "non-compliant element by its id, give a corrective action for each and explain what it means for "
         "safety and everyday use. When nothing failed, confirm that the model meets every checked rule.\n\n"
         "Check results (JSON):\n" + to_json(source).dump(2)}};
    try {
        std::string text = provider.complete(messages, {"report", 1});
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) throw orchestrator::ProviderError(orchestrator::ProviderErrorKind::malformed, "empty narrative");
        report.narrative = text.substr(first);
        report.narrative_notice.reset();
    } catch (const orchestrator::ProviderError& e) {
        std::string fallback;
        for (const auto& rec : report.recommendations) fallback += fmt::format("- [Rule {}] {}\n", rec.rule_id, rec.text);
        if (fallback.empty()) fallback = "The model satisfies every checked rule.\n";
        report.narrative = fallback;
        report.narrative_notice = fmt::format("narrative unavailable from {}: {}; showing template recommendations",
                                              provider.name(), e.what());
    }
    return *report.narrative;
}

}  // namespace bimcheck::report

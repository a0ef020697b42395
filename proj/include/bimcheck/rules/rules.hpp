#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bimcheck/model/model.hpp"
#include "bimcheck/model/units.hpp"

namespace bimcheck::rules {

inline constexpr int kRuleCount = 12;

enum class Status { compliant, non_compliant, not_applicable };

std::string_view to_string(Status s);
std::optional<Status> parse_status(std::string_view s);

// Findings about one element carry its id. Aggregate findings (whole building,
// footing pairs, fixture kinds) have element_id 0 and a subject key instead.
struct Finding {
    std::int64_t element_id = 0;
    std::string subject;
    Status status = Status::not_applicable;
    std::map<std::string, Quantity> measured;
    std::map<std::string, Quantity> required;
    std::string note;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct CheckResult {
    int rule_id = 0;
    std::vector<Finding> findings;

    // non_compliant if any finding is; not_applicable if all are (or none exist).
    Status overall() const;
    std::size_t count(Status s) const;

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

// Same findings (by element id / subject) with the same statuses, in the same order.
bool same_verdicts(const CheckResult& a, const CheckResult& b);
// Describes the first difference between two results, or returns empty.
std::string verdict_diff(const CheckResult& a, const CheckResult& b);

nlohmann::json to_json(const Finding& f);
nlohmann::json to_json(const CheckResult& r);

// Tunable thresholds and room-name vocabularies. Defaults reproduce the
// code values of the twelve rules.
struct RuleConfig {
    std::map<std::string, Quantity, std::less<>> thresholds;
    std::vector<std::string> habitable_tokens;
    std::vector<std::string> excluded_tokens;
    std::vector<std::string> kitchen_tokens;
    std::vector<std::string> floor_material_tokens;

    static RuleConfig defaults();
    // Throws std::out_of_range for unknown names.
    Quantity threshold(std::string_view name) const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Overrides on top of RuleConfig::defaults(); see data/config/rules.default.json.
RuleConfig load_rule_config(std::string_view json_text);
nlohmann::json to_json(const RuleConfig& config);

struct ThresholdInfo {
    std::string name;
    int rule_id;
    Quantity default_value;
};

// Every configurable threshold, in rule order.
const std::vector<ThresholdInfo>& threshold_catalog();
const ThresholdInfo* find_threshold(std::string_view name);

struct RuleSpec {
    int id = 0;
    std::string description;
    std::string reference;
    std::map<std::string, Quantity> thresholds;
    std::vector<Category> target_categories;
    std::optional<std::string> dsl_hint;
};

class UnknownRule : public std::out_of_range {
public:
    explicit UnknownRule(int rule_id);
    int rule_id() const { return rule_id_; }

private:
    int rule_id_;
};

// Direction of a rule's limits: evidence must be at least (minimum) or at most (maximum)
// the required value. Only the window-to-wall ratio is a maximum.
enum class Limit { minimum, maximum };
Limit limit_kind(int rule_id);

RuleSpec rule_spec(int rule_id, const RuleConfig& config = RuleConfig::defaults());
std::vector<RuleSpec> all_rule_specs(const RuleConfig& config = RuleConfig::defaults());

// Room-name classification: a token matches when some word of the name starts with it.
bool name_matches(std::string_view name, const std::vector<std::string>& tokens);
// The `habitable` flag parameter, when present, overrides the name tokens.
bool is_habitable(const Element& room, const RuleConfig& config);
bool is_kitchen(const Element& room, const RuleConfig& config);
bool allowed_floor_material(std::string_view material, const RuleConfig& config);

// Fixture types counted by the clearance rule.
bool needs_front_clearance(std::string_view fixture_type);

CheckResult check_exit_openings(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_stair_width(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_guard_height(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_ceiling_height(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_window_wall_ratio(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_room_areas(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_fixture_clearance(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_toilet_facilities(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_kitchen_sink(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_floor_panels(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_footing_spacing(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());
CheckResult check_ventilation(const BuildingModel& model, const RuleConfig& config = RuleConfig::defaults());

// Throws UnknownRule outside 1..12.
CheckResult check_rule(const BuildingModel& model, int rule_id,
                       const RuleConfig& config = RuleConfig::defaults());

}  // namespace bimcheck::rules

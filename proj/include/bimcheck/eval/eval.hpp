#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bimcheck/model/model.hpp"
#include "bimcheck/orchestrator/repair.hpp"

namespace bimcheck::eval {

struct EvalRecord {
    std::string provider;
    int rule_id = 0;
    double processing_time_seconds = 0.0;  // measured wall clock over all provider calls
    int correction_attempts = 0;
    bool status = false;
    double success_rate_percent = 0.0;
};

// Success rate is averaged over every attempted rule (failures
// count as 0), time and corrections over successful rules only. Both are empty when no
// rule succeeded, which renders as "-".
struct ProviderAverages {
    std::string provider;
    std::optional<double> avg_time_seconds;
    std::optional<double> avg_corrections;
    double avg_success_rate = 0.0;
};

struct EvalTable {
    std::vector<std::string> providers;  // as configured
    std::vector<int> rule_ids;           // ascending
    std::vector<EvalRecord> records;     // provider order, then rule order
    std::vector<ProviderAverages> averages;

    const EvalRecord* find(const std::string& provider, int rule_id) const;
};

EvalRecord record_of(const orchestrator::RepairSession& session);

// Rebuilds rule_ids, sorts records and recomputes the averages.
EvalTable assemble(std::vector<std::string> providers, std::vector<EvalRecord> records);

struct EvalOptions {
    orchestrator::GenerateOptions generate;
    int parallelism = 1;  // sessions run at once
};

// One repair session per (provider, rule). Provider failures end up as failed rows.
EvalTable run_eval(const std::vector<orchestrator::Provider*>& providers, const std::vector<int>& rule_ids,
                   const BuildingModel& model, const EvalOptions& options = {});

enum class Format { structured, text };

nlohmann::json to_json(const EvalTable& table);
std::string render_eval(const EvalTable& table, Format format);

}  // namespace bimcheck::eval

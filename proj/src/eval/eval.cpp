#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bimcheck/eval/eval.hpp"

namespace bimcheck::eval {

using nlohmann::json;
using orchestrator::round_one_decimal;

const EvalRecord* EvalTable::find(const std::string& provider, int rule_id) const {
    const auto it = std::find_if(records.begin(), records.end(), [&](const EvalRecord& r) {
        return r.provider == provider && r.rule_id == rule_id;
    });
    return it == records.end() ? nullptr : &*it;
}

EvalRecord record_of(const orchestrator::RepairSession& s) {
    return {s.provider, s.rule_id, s.total_latency_seconds(), s.correction_attempts, s.success,
            s.success_rate_percent};
}

EvalTable assemble(std::vector<std::string> providers, std::vector<EvalRecord> records) {
    EvalTable t;
    t.providers = std::move(providers);
    // Providers seen only in the records go after the configured ones, in order of appearance.
    for (const auto& r : records) {
        if (std::find(t.providers.begin(), t.providers.end(), r.provider) == t.providers.end()) {
            t.providers.push_back(r.provider);
        }
    }
    auto rank = [&](const std::string& p) {
        return std::find(t.providers.begin(), t.providers.end(), p) - t.providers.begin();
    };
    std::stable_sort(records.begin(), records.end(), [&](const EvalRecord& a, const EvalRecord& b) {
        if (a.provider != b.provider) return rank(a.provider) < rank(b.provider);
        return a.rule_id < b.rule_id;
    });
    for (const auto& r : records) {
        if (std::find(t.rule_ids.begin(), t.rule_ids.end(), r.rule_id) == t.rule_ids.end()) {
            t.rule_ids.push_back(r.rule_id);
        }
    }
    std::sort(t.rule_ids.begin(), t.rule_ids.end());
    t.records = std::move(records);

    for (const auto& p : t.providers) {
        ProviderAverages avg{p, std::nullopt, std::nullopt, 0.0};
        double time = 0.0;
        double corrections = 0.0;
        double rate = 0.0;
        int attempted = 0;
        int succeeded = 0;
        for (const auto& r : t.records) {
            if (r.provider != p) continue;
            ++attempted;
            rate += r.success_rate_percent;
            if (!r.status) continue;
            ++succeeded;
            time += r.processing_time_seconds;
            corrections += r.correction_attempts;
        }
        if (attempted > 0) avg.avg_success_rate = round_one_decimal(rate / attempted);
        if (succeeded > 0) {
            avg.avg_time_seconds = round_one_decimal(time / succeeded);
            avg.avg_corrections = round_one_decimal(corrections / succeeded);
        }
        t.averages.push_back(std::move(avg));
    }
    return t;
}

EvalTable run_eval(const std::vector<orchestrator::Provider*>& providers, const std::vector<int>& rule_ids,
                   const BuildingModel& model, const EvalOptions& options) {
    struct Job {
        orchestrator::Provider* provider;
        int rule_id;
    };
    std::vector<Job> jobs;
    for (auto* p : providers) {
        for (const int id : rule_ids) jobs.push_back({p, id});
    }
    std::vector<EvalRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const auto spec = rules::rule_spec(job.rule_id, options.generate.config);
            records[i] = record_of(orchestrator::generate_check(*job.provider, spec, model, options.generate));
        }
    };
    const int threads = std::clamp(options.parallelism, 1, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    std::vector<std::string> names;
    for (auto* p : providers) names.push_back(p->name());
    return assemble(std::move(names), std::move(records));
}

json to_json(const EvalTable& t) {
    json records = json::array();
    for (const auto& r : t.records) {
        records.push_back({{"provider", r.provider},
                           {"rule_id", r.rule_id},
                           {"measured_processing_time_seconds", r.processing_time_seconds},
                           {"correction_attempts", r.correction_attempts},
                           {"status", r.status},
                           {"success_rate_percent", r.success_rate_percent}});
    }
    json averages = json::array();
    for (const auto& a : t.averages) {
        json j = {{"provider", a.provider}, {"avg_success_rate", a.avg_success_rate}};
        j["avg_measured_time_seconds"] = a.avg_time_seconds ? json(*a.avg_time_seconds) : json(nullptr);
        j["avg_corrections"] = a.avg_corrections ? json(*a.avg_corrections) : json(nullptr);
        averages.push_back(std::move(j));
    }
    return {{"providers", t.providers}, {"rule_ids", t.rule_ids}, {"records", std::move(records)},
            {"averages", std::move(averages)}};
}

namespace {

std::size_t display_width(const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t width) {
    const std::size_t w = display_width(s);
    return w >= width ? s : s + std::string(width - w, ' ');
}

// Same half-up rounding as the averages; "{:.1f}" alone would round 0.25 down.
std::string one_decimal(double v) { return fmt::format("{:.1f}", round_one_decimal(v)); }

std::string render_text(const EvalTable& t) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"Model", "Metric"};
    for (const int id : t.rule_ids) header.push_back(fmt::format("Rule {}", id));
    header.push_back("Avg");
    rows.push_back(header);

    for (const auto& a : t.averages) {
        std::vector<std::string> time = {a.provider, "Processing time (s, measured)"};
        std::vector<std::string> corr = {"", "Correction attempts"};
        std::vector<std::string> status = {"", "Status"};
        std::vector<std::string> rate = {"", "Success rate (%)"};
        for (const int id : t.rule_ids) {
            const EvalRecord* r = t.find(a.provider, id);
            if (r == nullptr) {
                for (auto* row : {&time, &corr, &status, &rate}) row->push_back("");
                continue;
            }
            time.push_back(r->status ? one_decimal(r->processing_time_seconds) : "-");
            corr.push_back(r->status ? std::to_string(r->correction_attempts) : "-");
            status.push_back(r->status ? "✓" : "✗");
            rate.push_back(one_decimal(r->success_rate_percent));
        }
        time.push_back(a.avg_time_seconds ? one_decimal(*a.avg_time_seconds) : "-");
        corr.push_back(a.avg_corrections ? one_decimal(*a.avg_corrections) : "-");
        status.push_back("");
        rate.push_back(one_decimal(a.avg_success_rate));
        for (auto* row : {&time, &corr, &status, &rate}) rows.push_back(std::move(*row));
    }

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], display_width(row[i]));
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += i + 1 == row.size() ? row[i] : pad(row[i], widths[i] + 2);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

}  // namespace

std::string render_eval(const EvalTable& t, Format format) {
    if (format == Format::structured) return to_json(t).dump(2) + "\n";
    return render_text(t);
}

}  // namespace bimcheck::eval

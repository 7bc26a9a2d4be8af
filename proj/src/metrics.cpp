#include "forage/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace forage {

double net_energy(std::span<const EnergyLedger> ledgers) {
    double collected = 0.0, spent = 0.0;
    for (const auto& l : ledgers) {
        collected += l.collected;
        spent += l.spent_total();
    }
    return collected - spent;
}

double efficiency_from_totals(double collected, double spent) {
    if (spent == 0.0) {
        if (collected == 0.0) return 0.0;
        // Unreachable through the engine (delivery requires movement); report
        // against a one-epsilon floor spend rather than +inf.
        return collected / std::numeric_limits<double>::epsilon();
    }
    return collected / spent;
}

double efficiency(std::span<const EnergyLedger> ledgers) {
    double collected = 0.0, spent = 0.0;
    for (const auto& l : ledgers) {
        collected += l.collected;
        spent += l.spent_total();
    }
    return efficiency_from_totals(collected, spent);
}

Aggregate aggregate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("aggregate: empty group");
    Aggregate a;
    a.min = values[0];
    a.max = values[0];
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        if (v < a.min) a.min = v;
        if (v > a.max) a.max = v;
    }
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - a.mean;
            ss += d * d;
        }
        a.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

std::map<std::string, Aggregate> aggregate_results(const std::vector<RunResult>& results) {
    if (results.empty()) throw std::invalid_argument("aggregate_results: empty group");

    const std::pair<const char*, double (*)(const RunResult&)> fields[] = {
        {"collected", [](const RunResult& r) { return r.collected; }},
        {"move_spent", [](const RunResult& r) { return r.move_spent; }},
        {"comm_spent", [](const RunResult& r) { return r.comm_spent; }},
        {"idle_spent", [](const RunResult& r) { return r.idle_spent; }},
        {"spent_total", [](const RunResult& r) { return r.spent_total(); }},
        {"net_energy", [](const RunResult& r) { return r.net_energy; }},
        {"efficiency", [](const RunResult& r) { return r.efficiency; }},
        {"trips", [](const RunResult& r) { return static_cast<double>(r.trips); }},
        {"successes", [](const RunResult& r) { return static_cast<double>(r.successes); }},
        {"failures", [](const RunResult& r) { return static_cast<double>(r.failures); }},
        {"encounter_pairs",
         [](const RunResult& r) { return static_cast<double>(r.encounter_pairs); }},
        {"final_stimulus", [](const RunResult& r) { return r.final_stimulus; }},
        {"mean_threshold", [](const RunResult& r) { return r.mean_threshold; }},
    };

    std::map<std::string, Aggregate> out;
    std::vector<double> column(results.size());
    for (const auto& [name, get] : fields) {
        for (std::size_t i = 0; i < results.size(); ++i) column[i] = get(results[i]);
        out[name] = aggregate(column);
    }
    return out;
}

} // namespace forage

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "forage/controller.hpp"
#include "forage/world.hpp"

namespace forage {

/// Per-run summary.
struct RunResult {
    std::string run_id;
    std::uint64_t seed = 0;
    std::string controller;
    ControllerParams params; // snapshot of the controller parameters used

    double collected = 0.0;
    double move_spent = 0.0;
    double comm_spent = 0.0;
    double idle_spent = 0.0;
    double net_energy = 0.0;
    double efficiency = 0.0;

    long trips = 0;
    long successes = 0;
    long failures = 0;
    long encounter_pairs = 0;

    double final_stimulus = 0.0;
    double mean_threshold = 0.0;

    double spent_total() const { return move_spent + comm_spent + idle_spent; }
};

/// Sum of collected minus all spend categories across the given ledgers.
double net_energy(std::span<const EnergyLedger> ledgers);

/// collected / spent over the given ledgers. 0 when both are zero; a zero
/// spend with positive collection is reported against a one-epsilon floor
/// spend instead of +inf (unreachable through the engine, where delivery
/// requires movement).
double efficiency(std::span<const EnergyLedger> ledgers);
double efficiency_from_totals(double collected, double spent);

struct Aggregate {
    double mean = 0.0;
    double std_dev = 0.0; // unbiased sample std; 0 for a single value
    double min = 0.0;
    double max = 0.0;
};

/// Standard sample statistics. Throws std::invalid_argument on an empty span.
Aggregate aggregate(std::span<const double> values);

/// aggregate() applied to every numeric RunResult field, keyed by field name.
std::map<std::string, Aggregate> aggregate_results(const std::vector<RunResult>& results);

} // namespace forage

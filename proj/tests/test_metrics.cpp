#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "forage/engine.hpp"
#include "forage/metrics.hpp"

using namespace forage;

TEST_CASE("net_energy sums collections minus every spend category") {
    CHECK(net_energy(std::vector<EnergyLedger>{}) == 0.0);
    CHECK(net_energy(std::vector<EnergyLedger>{{}, {}}) == 0.0);
    CHECK(net_energy(std::vector<EnergyLedger>{{100.0, 30.0, 10.0, 5.0}}) == 55.0);
    CHECK(net_energy(std::vector<EnergyLedger>{{100.0, 30.0, 10.0, 5.0},
                                               {50.0, 20.0, 0.0, 0.0}}) == 85.0);
}

TEST_CASE("efficiency is the collected/spent ratio with pinned degenerate cases") {
    CHECK(efficiency_from_totals(100.0, 50.0) == 2.0);
    CHECK(efficiency_from_totals(0.0, 50.0) == 0.0);
    CHECK(efficiency_from_totals(0.0, 0.0) == 0.0); // zero-activity run
    // Free collection is impossible in-engine; reported against a floor spend.
    CHECK(efficiency_from_totals(1.0, 0.0) > 1e15);
    CHECK(efficiency_from_totals(1.0, 0.0) < 1e17);

    CHECK(efficiency(std::vector<EnergyLedger>{{100.0, 25.0, 15.0, 10.0}}) == 2.0);
    CHECK(efficiency(std::vector<EnergyLedger>{}) == 0.0);
}

TEST_CASE("efficiency above one exactly when net energy is positive") {
    const std::vector<EnergyLedger> groups[] = {
        {{100.0, 30.0, 10.0, 5.0}},
        {{45.0, 30.0, 10.0, 5.0}},  // exact break-even
        {{10.0, 30.0, 10.0, 5.0}},
        {{100.0, 30.0, 10.0, 5.0}, {0.0, 60.0, 0.0, 0.0}},
    };
    for (const auto& g : groups) {
        const double net = net_energy(g);
        const double eff = efficiency(g);
        if (net > 0.0) CHECK(eff > 1.0);
        if (net == 0.0) CHECK(eff == 1.0);
        if (net < 0.0) CHECK(eff < 1.0);
    }
}

TEST_CASE("aggregate computes unbiased sample statistics") {
    const double single[] = {5.0};
    Aggregate a = aggregate(single);
    CHECK(a.mean == 5.0);
    CHECK(a.std_dev == 0.0);
    CHECK(a.min == 5.0);
    CHECK(a.max == 5.0);

    const double three[] = {1.0, 2.0, 3.0};
    a = aggregate(three);
    CHECK(a.mean == 2.0);
    CHECK(a.std_dev == 1.0); // sample std with n-1
    CHECK(a.min == 1.0);
    CHECK(a.max == 3.0);

    CHECK_THROWS_AS(aggregate(std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("aggregate is permutation-invariant") {
    const double fwd[] = {3.0, 1.0, 4.0, 1.0, 5.0, 9.0};
    const double rev[] = {9.0, 5.0, 1.0, 4.0, 1.0, 3.0};
    const Aggregate a = aggregate(fwd), b = aggregate(rev);
    CHECK(a.mean == b.mean);
    CHECK(a.std_dev == b.std_dev);
    CHECK(a.min == b.min);
    CHECK(a.max == b.max);
}

TEST_CASE("aggregate_results covers every numeric field") {
    RunResult r1;
    r1.collected = 10.0;
    r1.move_spent = 4.0;
    r1.net_energy = 6.0;
    r1.efficiency = 2.5;
    r1.trips = 3;
    RunResult r2 = r1;
    r2.collected = 20.0;
    r2.trips = 5;

    const auto stats = aggregate_results({r1, r2});
    CHECK(stats.at("collected").mean == 15.0);
    CHECK(stats.at("collected").min == 10.0);
    CHECK(stats.at("collected").max == 20.0);
    CHECK(stats.at("trips").mean == 4.0);
    CHECK(stats.at("move_spent").std_dev == 0.0);
    CHECK(stats.at("efficiency").mean == 2.5);
    CHECK(stats.count("net_energy") == 1);
    CHECK(stats.count("spent_total") == 1);
    CHECK(stats.count("successes") == 1);
    CHECK(stats.count("failures") == 1);
    CHECK(stats.count("encounter_pairs") == 1);
    CHECK(stats.count("final_stimulus") == 1);
    CHECK(stats.count("mean_threshold") == 1);

    CHECK_THROWS_AS(aggregate_results({}), std::invalid_argument);
}

TEST_CASE("identical runs aggregate with zero deviation on every field") {
    WorldConfig cfg;
    cfg.max_steps = 150;
    Controller ctrl;
    const RunOutput a = run(cfg, ctrl, 77);
    const RunOutput b = run(cfg, ctrl, 77);
    for (const auto& [name, agg] : aggregate_results({a.result, b.result})) {
        CAPTURE(name);
        CHECK(agg.std_dev == 0.0);
        CHECK(agg.min == agg.max);
    }
}

TEST_CASE("run totals equal the final sample's running sums") {
    WorldConfig cfg;
    cfg.max_steps = 250;
    Controller ctrl;
    const RunOutput out = run(cfg, ctrl, 55);
    REQUIRE(!out.series.empty());
    const StepSample& last = out.series.back();
    CHECK(out.result.collected == last.cum_collected);
    CHECK(out.result.move_spent == last.cum_move);
    CHECK(out.result.comm_spent == last.cum_comm);
    CHECK(out.result.idle_spent == last.cum_idle);
    CHECK(out.result.net_energy == last.cum_net);
}

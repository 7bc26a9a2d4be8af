#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "forage/controller.hpp"
#include "forage/metrics.hpp"
#include "forage/world.hpp"

namespace forage {

/// What happened during one step, in the order it happened.
struct StepEvents {
    std::vector<int> departures;
    std::vector<std::pair<int, std::int64_t>> pickups;    // (robot, food)
    std::vector<std::pair<int, std::int64_t>> deliveries; // (robot, food)
    std::vector<int> giveups;
    std::vector<std::pair<int, int>> encounters; // (min id, max id)
};

/// Per-step time-series sample, taken after the step completes. cum_* sums the
/// folded cumulative ledgers plus any in-flight trip ledgers, so it is the
/// swarm's energy truth at that instant; cum_net is computed from the other
/// four cum fields in a fixed expression order.
struct StepSample {
    int step = 0;
    int active_foragers = 0;
    double stimulus = 0.0;
    double mean_threshold = 0.0;
    int food_available = 0;
    double cum_collected = 0.0;
    double cum_move = 0.0;
    double cum_comm = 0.0;
    double cum_idle = 0.0;
    double cum_net = 0.0;
};

/// The only mutable state of a run. Owns the world, the robots, the food
/// table, the stimulus board, the RNG stream and the controller; advances one
/// step at a time in a fixed phase order (see step()).
class SimState {
public:
    /// Throws std::invalid_argument when the config or controller params are
    /// invalid. Robots start at the home center with the initial threshold;
    /// initial food is placed before the first step using the run's stream.
    SimState(const WorldConfig& cfg, const Controller& ctrl, std::uint64_t seed);

    /// Advances one step. Phases, in order: (1) food spawn; (2) departures;
    /// (3) movement; (4) pickup; (5) encounters; (6) give-up; (7) arrivals;
    /// (8) idle cost. All robot iteration ascends by id. Stochastic draws
    /// happen in phase 1 (count, then x,y per item) and phase 3 (one turn
    /// draw per searching robot inside the foraging area, ascending id).
    /// Throws std::logic_error if a world invariant is broken afterwards.
    void step();

    StepSample sample() const;

    int step_index() const { return step_index_; }
    const WorldConfig& config() const { return cfg_; }
    const Controller& controller() const { return ctrl_; }
    const std::vector<RobotState>& robots() const { return robots_; }
    const std::vector<FoodItem>& foods() const { return foods_; }
    const StimulusBoard& board() const { return board_; }
    const StepEvents& events() const { return events_; }
    std::int64_t spawned_total() const { return spawned_total_; }
    long trips() const { return trips_; }
    long successes() const { return successes_; }
    long failures() const { return failures_; }
    long encounter_pairs() const { return encounter_pairs_; }

    // Mutable access for scripted scenarios and tests. add_food keeps the
    // spawn accounting consistent.
    FoodItem& add_food(Vec2 position);
    std::vector<RobotState>& robots_mut() { return robots_; }
    StimulusBoard& board_mut() { return board_; }

    /// Verifies every world-model invariant; throws std::logic_error naming
    /// the first breach. Called automatically at the end of each step.
    void check_invariants() const;

private:
    void phase_spawn();
    void phase_departures();
    void phase_movement();
    void phase_pickup();
    void phase_encounters();
    void phase_giveup();
    void phase_arrivals();
    void phase_idle();

    void depart(RobotState& robot, double stimulus_seen);
    double stimulus_for(const RobotState& robot) const;

    WorldConfig cfg_;
    Controller ctrl_;
    RngStream rng_;
    int step_index_ = 0;
    std::vector<RobotState> robots_;
    std::vector<FoodItem> foods_;
    StimulusBoard board_;
    StepEvents events_;
    std::int64_t next_food_id_ = 0;
    std::int64_t spawned_total_ = 0;
    long trips_ = 0;
    long successes_ = 0;
    long failures_ = 0;
    long encounter_pairs_ = 0;
};

struct RunOutput {
    RunResult result;
    std::vector<StepSample> series;
};

/// Validates, then iterates step() max_steps times, sampling after each step.
/// Identical inputs give identical outputs, bit for bit. Totals in the result
/// include spend accrued on trips still in flight at the final step, matching
/// the last sample.
RunOutput run(const WorldConfig& cfg, const Controller& ctrl, std::uint64_t seed,
              int max_steps);

/// run() with max_steps taken from the config.
RunOutput run(const WorldConfig& cfg, const Controller& ctrl, std::uint64_t seed);

} // namespace forage

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forage/geometry.hpp"
#include "forage/rng.hpp"

namespace forage {

enum class FoodStatus { Available, Carried, Delivered };
enum class RobotMode { AtHome, Searching, Returning };
enum class ActivityLevel { Low, Normal, High };

/// Energy bookkeeping. net() is exact arithmetic over the four fields.
struct EnergyLedger {
    double collected = 0.0;
    double move_spent = 0.0;
    double comm_spent = 0.0;
    double idle_spent = 0.0;

    double spent_total() const { return move_spent + comm_spent + idle_spent; }
    double net() const { return collected - move_spent - comm_spent - idle_spent; }

    void fold(const EnergyLedger& o) {
        collected += o.collected;
        move_spent += o.move_spent;
        comm_spent += o.comm_spent;
        idle_spent += o.idle_spent;
    }

    bool operator==(const EnergyLedger&) const = default;
};

/// Arena geometry, food dynamics, energy costs, sensing radii and step limits.
/// Distances, energies and steps are abstract units. Defaults describe a world
/// where a food item is worth roughly fifty steps of movement, so both trip
/// outcomes are reachable.
struct WorldConfig {
    double arena_width = 120.0;
    double arena_height = 80.0;
    Vec2 home_center{15.0, 40.0};
    double home_radius = 6.0;
    Rect forage_area{{40.0, 10.0}, {110.0, 70.0}};

    double food_spawn_rate = 0.5;     // expected items per step
    double food_spawn_rate_alt = 0.0; // second rate for alternating-abundance worlds
    int food_alternate_period = 0;    // steps per phase; 0 = constant rate
    int initial_food = 30;
    double food_energy = 80.0; // energy granted on delivery, per item

    double move_cost = 1.0;  // energy per unit distance
    double comm_cost = 0.25; // energy per exchanged message
    double idle_cost = 0.0;  // energy per step while at home

    double encounter_radius = 4.0;
    double sense_radius = 5.0;
    double robot_speed = 1.5;           // distance per step
    double max_turn = 0.5235987755982988; // walk heading perturbation bound, radians

    int giveup_steps = 40;
    int max_steps = 2000;
    int num_robots = 20;
};

/// One broken config invariant; field names the offending entry.
struct Violation {
    std::string field;
    std::string message;
};

/// Returns every violated WorldConfig invariant, empty when the config is valid.
std::vector<Violation> validate_config(const WorldConfig& cfg);

struct FoodItem {
    std::int64_t id = 0;
    Vec2 position{};
    double energy = 0.0;
    FoodStatus status = FoodStatus::Available;
};

struct RobotState {
    int id = 0;
    Vec2 position{};
    double heading = 0.0; // radians
    RobotMode mode = RobotMode::AtHome;
    double threshold = 0.0; // personal reluctance to forage, >= 0
    int task_counter = 0;   // signed peer-observation tally for the current trip
    std::optional<std::int64_t> carried_food;
    int steps_in_trip = 0;
    bool trip_failed_flag = false;
    EnergyLedger trip_ledger;
    EnergyLedger cumulative_ledger;
    ActivityLevel activity_level = ActivityLevel::Normal;
    double local_stimulus = 0.0; // per-robot stimulus, used only in local-stimulus mode
};

/// Shared task stimulus held at the home base.
struct StimulusBoard {
    double stimulus = 0.0;
};

/// Draws a Poisson count with the given mean and places that many items
/// uniformly over the foraging area. Ids are strictly increasing. Draw order:
/// count first, then x,y per item.
std::vector<FoodItem> spawn_food(const WorldConfig& cfg, double rate,
                                 std::int64_t& next_food_id, RngStream& rng);

} // namespace forage

#include "forage/world.hpp"

namespace forage {

namespace {

void require(std::vector<Violation>& out, bool ok, const char* field, const char* message) {
    if (!ok) out.push_back({field, message});
}

} // namespace

std::vector<Violation> validate_config(const WorldConfig& cfg) {
    std::vector<Violation> v;
    require(v, cfg.arena_width > 0.0, "arena_width", "must be positive");
    require(v, cfg.arena_height > 0.0, "arena_height", "must be positive");
    require(v, cfg.home_radius > 0.0, "home_radius", "must be positive");

    const Rect arena{{0.0, 0.0}, {cfg.arena_width, cfg.arena_height}};
    require(v,
            cfg.home_center.x - cfg.home_radius >= 0.0 &&
                cfg.home_center.x + cfg.home_radius <= cfg.arena_width &&
                cfg.home_center.y - cfg.home_radius >= 0.0 &&
                cfg.home_center.y + cfg.home_radius <= cfg.arena_height,
            "home_center", "home circle must lie within arena bounds");
    require(v, cfg.forage_area.valid(), "forage_area", "min corner must not exceed max corner");
    require(v,
            cfg.forage_area.valid() && arena.contains(cfg.forage_area.min) &&
                arena.contains(cfg.forage_area.max),
            "forage_area", "must lie within arena bounds");

    require(v, cfg.food_spawn_rate >= 0.0, "food_spawn_rate", "must be nonnegative");
    require(v, cfg.food_spawn_rate_alt >= 0.0, "food_spawn_rate_alt", "must be nonnegative");
    require(v, cfg.food_alternate_period >= 0, "food_alternate_period", "must be nonnegative");
    require(v, cfg.initial_food >= 0, "initial_food", "must be nonnegative");
    require(v, cfg.food_energy > 0.0, "food_energy", "must be positive");
    require(v, cfg.move_cost >= 0.0, "move_cost", "must be nonnegative");
    require(v, cfg.comm_cost >= 0.0, "comm_cost", "must be nonnegative");
    require(v, cfg.idle_cost >= 0.0, "idle_cost", "must be nonnegative");
    require(v, cfg.encounter_radius > 0.0, "encounter_radius", "must be positive");
    require(v, cfg.sense_radius > 0.0, "sense_radius", "must be positive");
    require(v, cfg.robot_speed > 0.0, "robot_speed", "must be positive");
    require(v, cfg.max_turn >= 0.0, "max_turn", "must be nonnegative");
    require(v, cfg.giveup_steps > 0, "giveup_steps", "must be positive");
    require(v, cfg.max_steps > 0, "max_steps", "must be positive");
    require(v, cfg.num_robots > 0, "num_robots", "must be positive");
    return v;
}

std::vector<FoodItem> spawn_food(const WorldConfig& cfg, double rate,
                                 std::int64_t& next_food_id, RngStream& rng) {
    std::vector<FoodItem> born;
    const int count = rng.poisson(rate);
    born.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform(cfg.forage_area.min.x, cfg.forage_area.max.x);
        const double y = rng.uniform(cfg.forage_area.min.y, cfg.forage_area.max.y);
        born.push_back({next_food_id++, {x, y}, cfg.food_energy, FoodStatus::Available});
    }
    return born;
}

} // namespace forage

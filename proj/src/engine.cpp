#include "forage/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace forage {

namespace {

constexpr double kPi = 3.141592653589793;

std::string join_violations(const std::vector<Violation>& vs) {
    std::string msg;
    for (const auto& v : vs) {
        if (!msg.empty()) msg += "; ";
        msg += v.field + ": " + v.message;
    }
    return msg;
}

// Folded cumulative ledgers plus in-flight trip ledgers, summed field by field
// in robot id order. Used by sample() and by run()'s final totals so both see
// the identical floating-point sums.
EnergyLedger sum_ledgers(const std::vector<RobotState>& robots) {
    EnergyLedger total;
    for (const auto& r : robots) {
        total.fold(r.cumulative_ledger);
        total.fold(r.trip_ledger);
    }
    return total;
}

double mean_threshold_of(const std::vector<RobotState>& robots) {
    if (robots.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& r : robots) sum += r.threshold;
    return sum / static_cast<double>(robots.size());
}

// One coordinate folded back into [lo, hi] by mirror reflection; flips tells
// the caller whether the heading component must be negated (odd reflections).
double reflect_coord(double v, double lo, double hi, bool& flips) {
    flips = false;
    if (lo >= hi) return lo; // degenerate interval: pin to it
    while (v < lo || v > hi) {
        if (v < lo)
            v = 2.0 * lo - v;
        else
            v = 2.0 * hi - v;
        flips = !flips;
    }
    return v;
}

double normalize_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a < -kPi) a += 2.0 * kPi;
    return a;
}

} // namespace

SimState::SimState(const WorldConfig& cfg, const Controller& ctrl, std::uint64_t seed)
    : cfg_(cfg), ctrl_(ctrl), rng_(seed) {
    auto violations = validate_config(cfg_);
    {
        auto pv = validate_params(ctrl_.params);
        violations.insert(violations.end(), pv.begin(), pv.end());
        auto av = validate_profile(ctrl_.activity);
        violations.insert(violations.end(), av.begin(), av.end());
    }
    if (ctrl_.kind == ControllerKind::FixedNumber && ctrl_.fixed_target < 0)
        violations.push_back({"fixed_target", "must be >= 0"});
    if (ctrl_.kind == ControllerKind::FixedRatio &&
        !(ctrl_.fixed_ratio >= 0.0 && ctrl_.fixed_ratio <= 1.0))
        violations.push_back({"fixed_ratio", "must be in [0, 1]"});
    if (!violations.empty())
        throw std::invalid_argument("invalid simulation setup: " + join_violations(violations));

    robots_.resize(static_cast<std::size_t>(cfg_.num_robots));
    for (int i = 0; i < cfg_.num_robots; ++i) {
        RobotState& r = robots_[static_cast<std::size_t>(i)];
        r.id = i;
        r.position = cfg_.home_center;
        r.threshold = ctrl_.params.th_init;
        r.local_stimulus = ctrl_.params.s_init;
    }
    board_.stimulus = ctrl_.params.s_init;

    // Initial food: a fixed count placed like spawned food (x then y per item).
    foods_.reserve(static_cast<std::size_t>(cfg_.initial_food));
    for (int i = 0; i < cfg_.initial_food; ++i) {
        FoodItem item;
        item.id = next_food_id_++;
        item.position.x = rng_.uniform(cfg_.forage_area.min.x, cfg_.forage_area.max.x);
        item.position.y = rng_.uniform(cfg_.forage_area.min.y, cfg_.forage_area.max.y);
        item.energy = cfg_.food_energy;
        foods_.push_back(item);
    }
    spawned_total_ = cfg_.initial_food;
}

FoodItem& SimState::add_food(Vec2 position) {
    FoodItem item;
    item.id = next_food_id_++;
    item.position = position;
    item.energy = cfg_.food_energy;
    foods_.push_back(item);
    ++spawned_total_;
    return foods_.back();
}

double SimState::stimulus_for(const RobotState& robot) const {
    return ctrl_.params.local_stimulus ? robot.local_stimulus : board_.stimulus;
}

void SimState::step() {
    events_ = StepEvents{};
    phase_spawn();
    phase_departures();
    phase_movement();
    phase_pickup();
    phase_encounters();
    phase_giveup();
    phase_arrivals();
    phase_idle();
    ++step_index_;
    check_invariants();
}

void SimState::phase_spawn() {
    double rate = cfg_.food_spawn_rate;
    if (cfg_.food_alternate_period > 0 &&
        (step_index_ / cfg_.food_alternate_period) % 2 == 1)
        rate = cfg_.food_spawn_rate_alt;
    auto spawned = spawn_food(cfg_, rate, next_food_id_, rng_);
    spawned_total_ += static_cast<std::int64_t>(spawned.size());
    foods_.insert(foods_.end(), spawned.begin(), spawned.end());
}

void SimState::phase_departures() {
    if (ctrl_.kind == ControllerKind::FixedNumber ||
        ctrl_.kind == ControllerKind::FixedRatio) {
        std::vector<int> at_home;
        int active = 0;
        for (const auto& r : robots_) {
            if (r.mode == RobotMode::AtHome)
                at_home.push_back(r.id);
            else
                ++active;
        }
        std::vector<int> chosen =
            ctrl_.kind == ControllerKind::FixedNumber
                ? fixed_number_decide(at_home, active, ctrl_.fixed_target)
                : fixed_ratio_decide(at_home, active, cfg_.num_robots, ctrl_.fixed_ratio);
        for (int id : chosen) {
            RobotState& r = robots_[static_cast<std::size_t>(id)];
            depart(r, stimulus_for(r));
        }
        return;
    }

    for (auto& r : robots_) {
        if (r.mode != RobotMode::AtHome) continue;
        const double s = stimulus_for(r);
        if (decide_depart(foraging_probability(s, r.threshold), ctrl_.params.p0))
            depart(r, s);
    }
}

void SimState::depart(RobotState& robot, double stimulus_seen) {
    robot.mode = RobotMode::Searching;
    robot.steps_in_trip = 0;
    robot.trip_failed_flag = false;
    robot.task_counter = 0;
    robot.trip_ledger = EnergyLedger{};
    robot.activity_level = ctrl_.kind == ControllerKind::AdaptiveMultilevel
                               ? select_activity_level(stimulus_seen, ctrl_.params)
                               : ActivityLevel::Normal;
    events_.departures.push_back(robot.id);
}

void SimState::phase_movement() {
    for (auto& r : robots_) {
        if (r.mode == RobotMode::AtHome) continue;
        ++r.steps_in_trip;

        const LevelProfile& prof = ctrl_.activity.at(r.activity_level);
        const double speed = cfg_.robot_speed * prof.speed_mult;
        double moved = 0.0;

        if (r.mode == RobotMode::Returning) {
            // Straight line home. Displacement goes through the heading so
            // axis-aligned legs stay exact (cos 0 = 1, cos pi = -1).
            const Vec2 d = cfg_.home_center - r.position;
            const double dist = d.norm();
            if (dist > 0.0) {
                moved = std::min(speed, dist);
                r.heading = std::atan2(d.y, d.x);
                r.position.x += moved * std::cos(r.heading);
                r.position.y += moved * std::sin(r.heading);
            }
        } else if (!cfg_.forage_area.contains(r.position)) {
            // Outbound leg: straight toward the nearest point of the foraging
            // area. Costs energy but consumes no randomness.
            const Vec2 target = cfg_.forage_area.clamp(r.position);
            const Vec2 d = target - r.position;
            const double dist = d.norm();
            if (dist > 0.0) {
                moved = std::min(speed, dist);
                r.heading = std::atan2(d.y, d.x);
                r.position.x += moved * std::cos(r.heading);
                r.position.y += moved * std::sin(r.heading);
            }
        } else {
            // Correlated random walk inside the foraging area, reflecting at
            // its walls. Exactly one turn draw per robot per step.
            r.heading = normalize_angle(
                r.heading + rng_.uniform(-cfg_.max_turn, cfg_.max_turn));
            Vec2 next{r.position.x + speed * std::cos(r.heading),
                      r.position.y + speed * std::sin(r.heading)};
            bool fx = false, fy = false;
            next.x = reflect_coord(next.x, cfg_.forage_area.min.x, cfg_.forage_area.max.x, fx);
            next.y = reflect_coord(next.y, cfg_.forage_area.min.y, cfg_.forage_area.max.y, fy);
            if (fx) r.heading = normalize_angle(kPi - r.heading);
            if (fy) r.heading = normalize_angle(-r.heading);
            moved = distance(next, r.position);
            r.position = next;
        }

        r.trip_ledger.move_spent += moved * cfg_.move_cost * prof.cost_mult;
    }
}

void SimState::phase_pickup() {
    for (auto& r : robots_) {
        if (r.mode != RobotMode::Searching) continue;
        const double radius = cfg_.sense_radius * ctrl_.activity.at(r.activity_level).sense_mult;
        const double radius2 = radius * radius;

        FoodItem* best = nullptr;
        double best_d2 = 0.0;
        for (auto& f : foods_) { // ascending id: ties keep the lowest
            if (f.status != FoodStatus::Available) continue;
            const Vec2 d = f.position - r.position;
            const double d2 = d.x * d.x + d.y * d.y;
            if (d2 > radius2) continue;
            if (!best || d2 < best_d2) {
                best = &f;
                best_d2 = d2;
            }
        }
        if (!best) continue;

        best->status = FoodStatus::Carried; // later robots no longer see it
        r.carried_food = best->id;
        r.mode = RobotMode::Returning;
        events_.pickups.emplace_back(r.id, best->id);
    }
}

void SimState::phase_encounters() {
    const double radius2 = cfg_.encounter_radius * cfg_.encounter_radius;
    auto status_of = [](const RobotState& r) {
        if (r.carried_food) return PeerStatus::FoundFood;
        if (r.trip_failed_flag) return PeerStatus::Failed;
        return PeerStatus::Searching;
    };

    for (std::size_t i = 0; i < robots_.size(); ++i) {
        RobotState& a = robots_[i];
        if (a.mode == RobotMode::AtHome) continue;
        for (std::size_t j = i + 1; j < robots_.size(); ++j) {
            RobotState& b = robots_[j];
            if (b.mode == RobotMode::AtHome) continue;
            const Vec2 d = b.position - a.position;
            if (d.x * d.x + d.y * d.y > radius2) continue;

            a.trip_ledger.comm_spent += cfg_.comm_cost;
            b.trip_ledger.comm_spent += cfg_.comm_cost;
            a.task_counter = observe_peer(a.task_counter, status_of(b));
            b.task_counter = observe_peer(b.task_counter, status_of(a));
            events_.encounters.emplace_back(a.id, b.id);
            ++encounter_pairs_;
        }
    }
}

void SimState::phase_giveup() {
    for (auto& r : robots_) {
        if (r.mode != RobotMode::Searching) continue;
        if (r.steps_in_trip > cfg_.giveup_steps) {
            r.trip_failed_flag = true;
            r.mode = RobotMode::Returning;
            events_.giveups.push_back(r.id);
        }
    }
}

void SimState::phase_arrivals() {
    const double radius2 = cfg_.home_radius * cfg_.home_radius;
    for (auto& r : robots_) {
        if (r.mode != RobotMode::Returning) continue;
        const Vec2 d = r.position - cfg_.home_center;
        if (d.x * d.x + d.y * d.y > radius2) continue;

        if (r.carried_food) {
            FoodItem& f = foods_[static_cast<std::size_t>(*r.carried_food)];
            f.status = FoodStatus::Delivered;
            r.trip_ledger.collected += f.energy;
            events_.deliveries.emplace_back(r.id, f.id);
            r.carried_food.reset();
        }

        const TripOutcome outcome = classify_trip(r.trip_ledger);
        ++trips_;
        if (outcome == TripOutcome::Success)
            ++successes_;
        else
            ++failures_;

        const double s = stimulus_for(r);
        const TripUpdate upd =
            apply_trip_update(r.threshold, s, outcome, r.task_counter, ctrl_.params);
        r.threshold = upd.threshold;
        if (ctrl_.params.local_stimulus)
            r.local_stimulus = upd.stimulus;
        else
            board_.stimulus = upd.stimulus;

        r.cumulative_ledger.fold(r.trip_ledger);
        r.trip_ledger = EnergyLedger{};
        r.task_counter = 0;
        r.steps_in_trip = 0;
        r.trip_failed_flag = false;
        r.activity_level = ActivityLevel::Normal;
        r.mode = RobotMode::AtHome;
    }
}

void SimState::phase_idle() {
    if (cfg_.idle_cost == 0.0) return;
    for (auto& r : robots_) {
        if (r.mode == RobotMode::AtHome)
            r.cumulative_ledger.idle_spent += cfg_.idle_cost;
    }
}

StepSample SimState::sample() const {
    StepSample s;
    s.step = step_index_;
    for (const auto& r : robots_)
        if (r.mode != RobotMode::AtHome) ++s.active_foragers;
    if (ctrl_.params.local_stimulus) {
        double sum = 0.0;
        for (const auto& r : robots_) sum += r.local_stimulus;
        s.stimulus = robots_.empty() ? 0.0 : sum / static_cast<double>(robots_.size());
    } else {
        s.stimulus = board_.stimulus;
    }
    s.mean_threshold = mean_threshold_of(robots_);
    for (const auto& f : foods_)
        if (f.status == FoodStatus::Available) ++s.food_available;

    const EnergyLedger total = sum_ledgers(robots_);
    s.cum_collected = total.collected;
    s.cum_move = total.move_spent;
    s.cum_comm = total.comm_spent;
    s.cum_idle = total.idle_spent;
    s.cum_net = s.cum_collected - s.cum_move - s.cum_comm - s.cum_idle;
    return s;
}

void SimState::check_invariants() const {
    auto fail = [](const std::string& what) { throw std::logic_error("invariant broken: " + what); };

    const Rect arena{{0.0, 0.0}, {cfg_.arena_width, cfg_.arena_height}};
    const double home_r2 = cfg_.home_radius * cfg_.home_radius;
    std::vector<int> carrier_count(foods_.size(), 0);

    int last_id = -1;
    for (const auto& r : robots_) {
        if (r.id <= last_id) fail("robot ids not strictly ascending");
        last_id = r.id;
        if (!arena.contains(r.position))
            fail("robot " + std::to_string(r.id) + " outside arena");
        if (r.mode == RobotMode::AtHome) {
            const Vec2 d = r.position - cfg_.home_center;
            if (d.x * d.x + d.y * d.y > home_r2)
                fail("robot " + std::to_string(r.id) + " at home outside home circle");
            if (r.carried_food)
                fail("robot " + std::to_string(r.id) + " at home while carrying");
        }
        if (r.carried_food) {
            if (r.mode != RobotMode::Returning)
                fail("robot " + std::to_string(r.id) + " carrying outside Returning mode");
            const auto idx = static_cast<std::size_t>(*r.carried_food);
            if (idx >= foods_.size() || foods_[idx].status != FoodStatus::Carried)
                fail("robot " + std::to_string(r.id) + " carries a non-Carried item");
            ++carrier_count[idx];
        }
        if (!(r.threshold >= 0.0))
            fail("robot " + std::to_string(r.id) + " negative threshold");
        if (r.steps_in_trip < 0)
            fail("robot " + std::to_string(r.id) + " negative steps_in_trip");
        for (const EnergyLedger* l : {&r.trip_ledger, &r.cumulative_ledger}) {
            if (!(l->collected >= 0.0 && l->move_spent >= 0.0 && l->comm_spent >= 0.0 &&
                  l->idle_spent >= 0.0))
                fail("robot " + std::to_string(r.id) + " negative ledger field");
        }
        if (!(r.local_stimulus >= 0.0))
            fail("robot " + std::to_string(r.id) + " negative local stimulus");
    }

    if (!(board_.stimulus >= 0.0)) fail("negative board stimulus");

    std::int64_t available = 0, carried = 0, delivered = 0;
    for (std::size_t i = 0; i < foods_.size(); ++i) {
        const FoodItem& f = foods_[i];
        if (f.id != static_cast<std::int64_t>(i))
            fail("food ids not dense and ascending"); // id == index is load-bearing
        switch (f.status) {
        case FoodStatus::Available:
            ++available;
            if (!cfg_.forage_area.contains(f.position))
                fail("available food " + std::to_string(f.id) + " outside foraging area");
            break;
        case FoodStatus::Carried:
            ++carried;
            if (carrier_count[i] != 1)
                fail("carried food " + std::to_string(f.id) + " has " +
                     std::to_string(carrier_count[i]) + " carriers");
            break;
        case FoodStatus::Delivered: ++delivered; break;
        }
    }
    if (available + carried + delivered != spawned_total_)
        fail("food count not conserved");
}

RunOutput run(const WorldConfig& cfg, const Controller& ctrl, std::uint64_t seed,
              int max_steps) {
    SimState state(cfg, ctrl, seed);
    RunOutput out;
    out.series.reserve(static_cast<std::size_t>(std::max(0, max_steps)));
    for (int i = 0; i < max_steps; ++i) {
        state.step();
        out.series.push_back(state.sample());
    }

    RunResult& res = out.result;
    res.seed = seed;
    res.controller = controller_label(ctrl);
    res.params = ctrl.params;

    const EnergyLedger total = sum_ledgers(state.robots());
    res.collected = total.collected;
    res.move_spent = total.move_spent;
    res.comm_spent = total.comm_spent;
    res.idle_spent = total.idle_spent;
    res.net_energy = res.collected - res.move_spent - res.comm_spent - res.idle_spent;
    res.efficiency = efficiency_from_totals(res.collected, total.spent_total());

    res.trips = state.trips();
    res.successes = state.successes();
    res.failures = state.failures();
    res.encounter_pairs = state.encounter_pairs();

    if (ctrl.params.local_stimulus) {
        double sum = 0.0;
        for (const auto& r : state.robots()) sum += r.local_stimulus;
        res.final_stimulus =
            state.robots().empty() ? 0.0 : sum / static_cast<double>(state.robots().size());
    } else {
        res.final_stimulus = state.board().stimulus;
    }
    res.mean_threshold = mean_threshold_of(state.robots());
    return out;
}

RunOutput run(const WorldConfig& cfg, const Controller& ctrl, std::uint64_t seed) {
    return run(cfg, ctrl, seed, cfg.max_steps);
}

} // namespace forage

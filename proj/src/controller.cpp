#include "forage/controller.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace forage {

namespace {

void require(std::vector<Violation>& out, bool ok, const char* field, const char* message) {
    if (!ok) out.push_back({field, message});
}

double clamp(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

} // namespace

std::vector<Violation> validate_params(const ControllerParams& p) {
    std::vector<Violation> v;
    require(v, p.delta1 >= 0.0, "delta1", "must be nonnegative");
    require(v, p.delta2 >= 0.0, "delta2", "must be nonnegative");
    require(v, p.phi1 >= 0.0, "phi1", "must be nonnegative");
    require(v, p.phi2 >= 0.0, "phi2", "must be nonnegative");
    require(v, p.p0 >= 0.0 && p.p0 < 1.0, "p0", "must lie in [0,1)");
    require(v, p.th_min >= 0.0, "th_min", "must be nonnegative");
    require(v, p.s_min >= 0.0, "s_min", "must be nonnegative");
    require(v, p.th_min <= p.th_init && p.th_init <= p.th_max, "th_init",
            "must lie in [th_min, th_max]");
    require(v, p.s_min <= p.s_init && p.s_init <= p.s_max, "s_init",
            "must lie in [s_min, s_max]");
    require(v, p.th_init > 0.0, "th_init", "must be positive");
    require(v, p.s_low < p.s_high, "s_low", "must be below s_high");
    return v;
}

std::vector<Violation> validate_profile(const ActivityProfile& a) {
    std::vector<Violation> v;
    require(v, a.low.speed_mult > 0.0 && a.normal.speed_mult > 0.0 && a.high.speed_mult > 0.0,
            "activity", "speed multipliers must be positive");
    require(v, a.low.sense_mult > 0.0 && a.normal.sense_mult > 0.0 && a.high.sense_mult > 0.0,
            "activity", "sense multipliers must be positive");
    require(v, a.low.cost_mult >= 0.0, "activity", "cost multipliers must be nonnegative");
    require(v,
            a.high.speed_mult >= a.normal.speed_mult && a.normal.speed_mult >= a.low.speed_mult,
            "activity", "speed multipliers must be ordered High >= Normal >= Low");
    require(v,
            a.high.sense_mult >= a.normal.sense_mult && a.normal.sense_mult >= a.low.sense_mult,
            "activity", "sense multipliers must be ordered High >= Normal >= Low");
    require(v, a.high.cost_mult >= a.normal.cost_mult && a.normal.cost_mult >= a.low.cost_mult,
            "activity", "cost multipliers must be ordered High >= Normal >= Low");
    return v;
}

double foraging_probability(double stimulus, double threshold) {
    const double s2 = stimulus * stimulus;
    const double t2 = threshold * threshold;
    if (s2 == 0.0 && t2 == 0.0) return 0.0;
    return s2 / (s2 + t2);
}

bool decide_depart(double p, double p0) {
    return p > p0;
}

int observe_peer(int counter, PeerStatus status) {
    switch (status) {
    case PeerStatus::FoundFood: return counter + 1;
    case PeerStatus::Searching: return counter - 1;
    case PeerStatus::Failed: return counter - 2;
    }
    return counter;
}

TripUpdate apply_trip_update(double threshold, double stimulus, TripOutcome outcome,
                             int counter, const ControllerParams& p) {
    double th = threshold;
    double s = stimulus;
    if (outcome == TripOutcome::Success) {
        th -= p.delta1;
        if (counter > 0) s += p.phi1;
    } else {
        th += p.delta2;
        if (counter < 0) s -= p.phi2;
    }
    return {clamp(th, p.th_min, p.th_max), clamp(s, p.s_min, p.s_max)};
}

TripOutcome classify_trip(const EnergyLedger& trip_ledger) {
    return trip_ledger.net() > 0.0 ? TripOutcome::Success : TripOutcome::Failure;
}

std::vector<int> fixed_number_decide(std::span<const int> at_home_ids,
                                     int active_count, int target) {
    std::vector<int> departing;
    const int missing = target - active_count;
    if (missing <= 0) return departing;
    const std::size_t take = std::min(at_home_ids.size(), static_cast<std::size_t>(missing));
    departing.assign(at_home_ids.begin(), at_home_ids.begin() + static_cast<std::ptrdiff_t>(take));
    return departing;
}

std::vector<int> fixed_ratio_decide(std::span<const int> at_home_ids,
                                    int active_count, int swarm_size, double ratio) {
    const int target = static_cast<int>(std::floor(ratio * swarm_size));
    return fixed_number_decide(at_home_ids, active_count, target);
}

ActivityLevel select_activity_level(double stimulus, const ControllerParams& p) {
    if (stimulus >= p.s_high) return ActivityLevel::High;
    if (stimulus < p.s_low) return ActivityLevel::Low;
    return ActivityLevel::Normal;
}

std::string controller_label(const Controller& c) {
    switch (c.kind) {
    case ControllerKind::Adaptive: return "adaptive";
    case ControllerKind::AdaptiveMultilevel: return "adaptive_multilevel";
    case ControllerKind::FixedNumber: return "fixed_number:" + std::to_string(c.fixed_target);
    case ControllerKind::FixedRatio: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", c.fixed_ratio);
        return std::string("fixed_ratio:") + buf;
    }
    }
    return "unknown";
}

} // namespace forage

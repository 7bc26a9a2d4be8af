#pragma once

#include <span>
#include <string>
#include <vector>

#include "forage/world.hpp"

namespace forage {

/// Parameters of the adaptive division-of-labor rule and its bounds.
/// delta1/delta2 move a robot's threshold on trip success/failure; phi1/phi2
/// move the task stimulus when the trip outcome agrees with the sign of the
/// robot's peer-observation counter.
struct ControllerParams {
    double delta1 = 0.25;
    double delta2 = 0.5;
    double phi1 = 0.4;
    double phi2 = 0.4;
    double p0 = 0.2; // departure threshold on the foraging probability, in [0,1)
    double th_init = 2.0;
    double s_init = 2.0;
    double th_min = 0.01;
    double th_max = 100.0;
    double s_min = 0.0;
    double s_max = 100.0;
    double s_low = 1.8;  // below this stimulus: Low activity
    double s_high = 3.5; // at or above this stimulus: High activity
    bool local_stimulus = false; // keep stimulus per robot instead of on the home board
};

std::vector<Violation> validate_params(const ControllerParams& p);

/// Peer state observed during an encounter.
enum class PeerStatus { FoundFood, Searching, Failed };

enum class TripOutcome { Success, Failure };

struct LevelProfile {
    double speed_mult = 1.0;
    double sense_mult = 1.0;
    double cost_mult = 1.0;
};

/// Per-activity-level multipliers. High must dominate Normal, Normal must
/// dominate Low, in every component.
struct ActivityProfile {
    LevelProfile low{0.6, 0.6, 0.6};
    LevelProfile normal{1.0, 1.0, 1.0};
    LevelProfile high{1.5, 1.5, 1.3};

    const LevelProfile& at(ActivityLevel level) const {
        switch (level) {
        case ActivityLevel::Low: return low;
        case ActivityLevel::High: return high;
        default: return normal;
        }
    }
};

std::vector<Violation> validate_profile(const ActivityProfile& a);

/// P = S^2 / (S^2 + Th^2). The 0/0 case is defined as 0: a robot with no
/// stimulus does not forage. Result is always in [0,1].
double foraging_probability(double stimulus, double threshold);

/// Strict comparison: depart iff p > p0. Deterministic, no sampling.
bool decide_depart(double p, double p0);

/// Counter update for one observed peer: FoundFood +1, Searching -1, Failed -2.
int observe_peer(int counter, PeerStatus status);

struct TripUpdate {
    double threshold = 0.0;
    double stimulus = 0.0;
};

/// End-of-trip adaptation. Success lowers the threshold by delta1, failure
/// raises it by delta2; the stimulus moves only when the outcome agrees with a
/// strictly signed counter (success & counter>0: +phi1, failure & counter<0:
/// -phi2). Both results are clamped to the configured bounds.
TripUpdate apply_trip_update(double threshold, double stimulus, TripOutcome outcome,
                             int counter, const ControllerParams& p);

/// Success iff the trip ledger's net energy is strictly positive.
TripOutcome classify_trip(const EnergyLedger& trip_ledger);

/// Departs the lowest-id at-home robots until the active count reaches target.
std::vector<int> fixed_number_decide(std::span<const int> at_home_ids,
                                     int active_count, int target);

/// fixed_number_decide with target = floor(ratio * swarm_size).
std::vector<int> fixed_ratio_decide(std::span<const int> at_home_ids,
                                    int active_count, int swarm_size, double ratio);

/// Stimulus-keyed operating mode: >= s_high High, < s_low Low, Normal between.
ActivityLevel select_activity_level(double stimulus, const ControllerParams& p);

enum class ControllerKind { Adaptive, FixedNumber, FixedRatio, AdaptiveMultilevel };

/// A controller choice plus everything it needs at run time.
struct Controller {
    ControllerKind kind = ControllerKind::Adaptive;
    ControllerParams params;
    ActivityProfile activity;
    int fixed_target = 0;    // FixedNumber only
    double fixed_ratio = 0.0; // FixedRatio only
};

/// "adaptive", "fixed_number:3", "fixed_ratio:0.5", "adaptive_multilevel".
std::string controller_label(const Controller& c);

} // namespace forage

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skate/gesture_engine.hpp"

namespace skate {

struct CircleFeature {
    double s_m = 0.0;
    double lateral_m = 0.0;
    double radius_m = 0.5;

    bool operator==(const CircleFeature&) const = default;
};

struct TurnWaypoint {
    double s_m = 0.0;
    double heading_change_deg = 0.0;  // positive = left turn

    bool operator==(const TurnWaypoint&) const = default;
};

struct CourseModel {
    double length_m = 100.0;
    double half_width_m = 3.0;
    std::vector<CircleFeature> obstacles;
    std::vector<CircleFeature> coins;
    std::vector<TurnWaypoint> turns;

    bool operator==(const CourseModel&) const = default;
};

void validate_course(const CourseModel& course);
CourseModel load_course_file(const std::string& path);
void save_course_file(const CourseModel& course, const std::string& path);

struct SimParams {
    double push_impulse_mps = 1.5;
    double friction_decel_mps2 = 0.8;
    double crouch_speed_factor = 1.3;
    double lean_lateral_speed_mps = 1.0;
    double jump_up_speed_mps = 3.0;
    double gravity_mps2 = 9.81;
    double coin_pickup_radius_m = 0.5;
    std::int64_t dt_ms = 10;
};

void validate_params(const SimParams& params);

enum class LeanSide : std::uint8_t { Left, None, Right };

struct RiderState {
    double s_m = 0.0;
    double lateral_m = 0.0;
    double speed_mps = 0.0;
    double height_m = 0.0;
    double vertical_speed_mps = 0.0;
    bool crouching = false;
    LeanSide lean = LeanSide::None;
    int coins = 0;
    int collisions = 0;
    std::int64_t t_ms = 0;
};

struct EpisodeReport {
    std::optional<std::int64_t> finish_time_ms;  // empty = DNF
    int coins = 0;
    int collisions = 0;
    int pushes = 0;
    double distance_m = 0.0;
};

std::string report_csv_row(const EpisodeReport& report);

// Applies one recognized action to the rider. Jump while airborne is a
// no-op; heading events are handled by run_episode at turn waypoints.
RiderState apply_action(RiderState state, const ActionEvent& event,
                        const SimParams& params);

// One fixed-dt integration step: linear friction, lateral drift clamped
// to the road borders, ballistic jump arc, coin pickup, obstacle contact.
// Feature bookkeeping (one-shot coins, contact latching, turn windows)
// lives in EpisodeTracker below.
struct EpisodeTracker {
    std::vector<bool> coin_taken;
    std::vector<bool> obstacle_contact;
    std::vector<bool> turn_resolved;
    std::vector<std::int64_t> turn_crossed_at_ms;  // -1 = not yet crossed

    explicit EpisodeTracker(const CourseModel& course);
};

RiderState step_physics(RiderState state, const CourseModel& course,
                        const SimParams& params, EpisodeTracker& tracker);

// Drives apply_action at event timestamps interleaved with step_physics
// until the course end or the timeout. Turn waypoints demand a matching
// heading event within +/- 2 s of the crossing; a miss halves the speed.
EpisodeReport run_episode(const std::vector<ActionEvent>& events,
                          const CourseModel& course, const SimParams& params,
                          std::int64_t timeout_ms);

}  // namespace skate

#include "skate/game_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace skate {

void validate_course(const CourseModel& course) {
    if (!(course.length_m > 0.0) || !(course.half_width_m > 0.0)) {
        throw std::invalid_argument("course dimensions must be positive");
    }
    auto check_feature = [&](const CircleFeature& f, const char* what) {
        if (f.s_m < 0.0 || f.s_m > course.length_m ||
            std::abs(f.lateral_m) > course.half_width_m) {
            throw std::invalid_argument(std::string(what) +
                                        " outside course bounds");
        }
    };
    for (const auto& o : course.obstacles) check_feature(o, "obstacle");
    for (const auto& c : course.coins) check_feature(c, "coin");
    for (const auto& t : course.turns) {
        if (t.s_m < 0.0 || t.s_m > course.length_m) {
            throw std::invalid_argument("turn outside course bounds");
        }
    }
}

void validate_params(const SimParams& params) {
    if (!(params.push_impulse_mps > 0.0) ||
        !(params.friction_decel_mps2 > 0.0) ||
        !(params.lean_lateral_speed_mps > 0.0) ||
        !(params.jump_up_speed_mps > 0.0) || !(params.gravity_mps2 > 0.0) ||
        !(params.coin_pickup_radius_m > 0.0) || params.dt_ms <= 0) {
        throw std::invalid_argument("sim parameters must be positive");
    }
    if (params.crouch_speed_factor < 1.0) {
        throw std::invalid_argument("crouch_speed_factor must be >= 1");
    }
}

namespace {

using nlohmann::json;

CircleFeature feature_from_json(const json& j) {
    return {j.at("s_m").get<double>(), j.at("lateral_m").get<double>(),
            j.at("radius_m").get<double>()};
}

json feature_to_json(const CircleFeature& f) {
    return {{"s_m", f.s_m}, {"lateral_m", f.lateral_m}, {"radius_m", f.radius_m}};
}

}  // namespace

CourseModel load_course_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open course file: " + path);
    }
    json j = json::parse(in);
    CourseModel course;
    course.length_m = j.at("length_m").get<double>();
    course.half_width_m = j.at("half_width_m").get<double>();
    for (const auto& o : j.value("obstacles", json::array())) {
        course.obstacles.push_back(feature_from_json(o));
    }
    for (const auto& c : j.value("coins", json::array())) {
        course.coins.push_back(feature_from_json(c));
    }
    for (const auto& t : j.value("turns", json::array())) {
        course.turns.push_back({t.at("s_m").get<double>(),
                                t.at("heading_change_deg").get<double>()});
    }
    validate_course(course);
    return course;
}

void save_course_file(const CourseModel& course, const std::string& path) {
    json j;
    j["length_m"] = course.length_m;
    j["half_width_m"] = course.half_width_m;
    j["obstacles"] = json::array();
    for (const auto& o : course.obstacles) j["obstacles"].push_back(feature_to_json(o));
    j["coins"] = json::array();
    for (const auto& c : course.coins) j["coins"].push_back(feature_to_json(c));
    j["turns"] = json::array();
    for (const auto& t : course.turns) {
        j["turns"].push_back(
            {{"s_m", t.s_m}, {"heading_change_deg", t.heading_change_deg}});
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write course file: " + path);
    }
    out << j.dump(2) << "\n";
}

std::string report_csv_row(const EpisodeReport& report) {
    std::ostringstream out;
    if (report.finish_time_ms) {
        out << *report.finish_time_ms;
    } else {
        out << "DNF";
    }
    out << ',' << report.coins << ',' << report.collisions << ','
        << report.pushes << ',' << report.distance_m;
    return out.str();
}

RiderState apply_action(RiderState state, const ActionEvent& event,
                        const SimParams& params) {
    switch (event.kind) {
        case ActionKind::Push:
            state.speed_mps += params.push_impulse_mps *
                               (state.crouching ? params.crouch_speed_factor : 1.0);
            break;
        case ActionKind::LeanLeftOn:
            state.lean = LeanSide::Left;
            break;
        case ActionKind::LeanRightOn:
            state.lean = LeanSide::Right;
            break;
        case ActionKind::LeanOff:
            state.lean = LeanSide::None;
            break;
        case ActionKind::Jump:
            if (state.height_m == 0.0) {
                state.vertical_speed_mps = params.jump_up_speed_mps;
            }
            break;
        case ActionKind::CrouchOn:
            state.crouching = true;
            break;
        case ActionKind::CrouchOff:
            state.crouching = false;
            break;
        case ActionKind::HeadingLeft:
        case ActionKind::HeadingRight:
            // Consumed at turn waypoints by run_episode.
            break;
    }
    return state;
}

EpisodeTracker::EpisodeTracker(const CourseModel& course)
    : coin_taken(course.coins.size(), false),
      obstacle_contact(course.obstacles.size(), false),
      turn_resolved(course.turns.size(), false),
      turn_crossed_at_ms(course.turns.size(), -1) {}

RiderState step_physics(RiderState state, const CourseModel& course,
                        const SimParams& params, EpisodeTracker& tracker) {
    const double dt = static_cast<double>(params.dt_ms) / 1000.0;
    state.t_ms += params.dt_ms;

    state.speed_mps =
        std::max(0.0, state.speed_mps - params.friction_decel_mps2 * dt);
    state.s_m += state.speed_mps * dt;

    if (state.lean != LeanSide::None) {
        const double dir = state.lean == LeanSide::Left ? -1.0 : 1.0;
        state.lateral_m = std::clamp(
            state.lateral_m + dir * params.lean_lateral_speed_mps * dt,
            -course.half_width_m, course.half_width_m);
    }

    if (state.height_m > 0.0 || state.vertical_speed_mps > 0.0) {
        state.height_m += state.vertical_speed_mps * dt;
        state.vertical_speed_mps -= params.gravity_mps2 * dt;
        if (state.height_m <= 0.0) {
            state.height_m = 0.0;
            state.vertical_speed_mps = 0.0;
        }
    }

    for (std::size_t i = 0; i < course.coins.size(); ++i) {
        if (tracker.coin_taken[i]) {
            continue;
        }
        const auto& coin = course.coins[i];
        const double ds = state.s_m - coin.s_m;
        const double dl = state.lateral_m - coin.lateral_m;
        const double dh = state.height_m;
        if (std::sqrt(ds * ds + dl * dl + dh * dh) <=
            params.coin_pickup_radius_m) {
            tracker.coin_taken[i] = true;
            ++state.coins;
        }
    }

    for (std::size_t i = 0; i < course.obstacles.size(); ++i) {
        const auto& obs = course.obstacles[i];
        const double ds = state.s_m - obs.s_m;
        const double dl = state.lateral_m - obs.lateral_m;
        const bool inside =
            state.height_m == 0.0 && std::sqrt(ds * ds + dl * dl) <= obs.radius_m;
        if (inside && !tracker.obstacle_contact[i]) {
            ++state.collisions;
            state.speed_mps /= 2.0;
            tracker.obstacle_contact[i] = true;
        } else if (!inside) {
            tracker.obstacle_contact[i] = false;
        }
    }

    return state;
}

EpisodeReport run_episode(const std::vector<ActionEvent>& events,
                          const CourseModel& course, const SimParams& params,
                          std::int64_t timeout_ms) {
    validate_course(course);
    validate_params(params);

    struct HeadingEvent {
        std::int64_t t_ms;
        bool left;
    };
    std::vector<HeadingEvent> headings;
    for (const auto& ev : events) {
        if (ev.kind == ActionKind::HeadingLeft) {
            headings.push_back({ev.timestamp_ms, true});
        } else if (ev.kind == ActionKind::HeadingRight) {
            headings.push_back({ev.timestamp_ms, false});
        }
    }
    constexpr std::int64_t kTurnWindowMs = 2000;

    RiderState state;
    EpisodeTracker tracker(course);
    EpisodeReport report;
    std::size_t next_event = 0;

    while (state.t_ms < timeout_ms) {
        while (next_event < events.size() &&
               events[next_event].timestamp_ms <= state.t_ms) {
            const auto& ev = events[next_event++];
            if (ev.kind == ActionKind::Push) {
                ++report.pushes;
            }
            state = apply_action(state, ev, params);
        }

        const double s_before = state.s_m;
        state = step_physics(state, course, params, tracker);

        for (std::size_t i = 0; i < course.turns.size(); ++i) {
            if (tracker.turn_resolved[i]) {
                continue;
            }
            const auto& turn = course.turns[i];
            if (s_before < turn.s_m && state.s_m >= turn.s_m) {
                tracker.turn_crossed_at_ms[i] = state.t_ms;
                const bool wants_left = turn.heading_change_deg > 0.0;
                bool matched = false;
                for (const auto& h : headings) {
                    if (h.left == wants_left &&
                        std::llabs(h.t_ms - state.t_ms) <= kTurnWindowMs) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    state.speed_mps /= 2.0;
                }
                tracker.turn_resolved[i] = true;
            }
        }

        if (state.s_m >= course.length_m) {
            report.finish_time_ms = state.t_ms;
            break;
        }
    }

    report.coins = state.coins;
    report.collisions = state.collisions;
    report.distance_m = std::min(state.s_m, course.length_m);
    return report;
}

}  // namespace skate

#include "skate/gesture_engine.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace skate {

void validate_config(const ThresholdConfig& config) {
    if (!(config.tilt_low_mm + config.tilt_hysteresis_mm <
          config.tilt_high_mm - config.tilt_hysteresis_mm)) {
        throw std::invalid_argument("tilt hysteresis bands overlap");
    }
    if (config.tilt_hysteresis_mm < 0.0) {
        throw std::invalid_argument("tilt_hysteresis_mm must be >= 0");
    }
    if (!(config.push_angle_deg > 0.0 && config.push_angle_deg < 180.0)) {
        throw std::invalid_argument("push_angle_deg must be in (0, 180)");
    }
    if (config.debounce_ms < 0) {
        throw std::invalid_argument("debounce_ms must be >= 0");
    }
}

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::LeanLeftOn: return "lean_left_on";
        case ActionKind::LeanRightOn: return "lean_right_on";
        case ActionKind::LeanOff: return "lean_off";
        case ActionKind::Jump: return "jump";
        case ActionKind::Push: return "push";
        case ActionKind::CrouchOn: return "crouch_on";
        case ActionKind::CrouchOff: return "crouch_off";
        case ActionKind::HeadingLeft: return "heading_left";
        case ActionKind::HeadingRight: return "heading_right";
    }
    throw std::invalid_argument("unknown action kind");
}

ActionKind action_from_string(std::string_view text) {
    if (text == "lean_left_on") return ActionKind::LeanLeftOn;
    if (text == "lean_right_on") return ActionKind::LeanRightOn;
    if (text == "lean_off") return ActionKind::LeanOff;
    if (text == "jump") return ActionKind::Jump;
    if (text == "push") return ActionKind::Push;
    if (text == "crouch_on") return ActionKind::CrouchOn;
    if (text == "crouch_off") return ActionKind::CrouchOff;
    if (text == "heading_left") return ActionKind::HeadingLeft;
    if (text == "heading_right") return ActionKind::HeadingRight;
    throw std::invalid_argument("unknown action kind: " + std::string(text));
}

std::string_view to_string(HidKey key) {
    switch (key) {
        case HidKey::ArrowLeft: return "arrow_left";
        case HidKey::ArrowRight: return "arrow_right";
        case HidKey::ArrowUp: return "arrow_up";
        case HidKey::Space: return "space";
        case HidKey::KeyC: return "key_c";
    }
    throw std::invalid_argument("unknown key");
}

std::string_view to_string(HidAction action) {
    return action == HidAction::Down ? "down" : "up";
}

namespace {

void step_board_side(EngineState& state, std::int64_t t, double v,
                     const ThresholdConfig& config,
                     std::vector<ActionEvent>& out) {
    const double left_enter = config.tilt_low_mm - config.tilt_hysteresis_mm;
    const double right_enter = config.tilt_high_mm + config.tilt_hysteresis_mm;
    const double center_lo = config.tilt_low_mm + config.tilt_hysteresis_mm;
    const double center_hi = config.tilt_high_mm - config.tilt_hysteresis_mm;

    switch (state.lean) {
        case LeanState::Neutral:
            if (v < left_enter) {
                out.push_back({t, ActionKind::LeanLeftOn});
                state.lean = LeanState::Left;
            } else if (v > right_enter) {
                out.push_back({t, ActionKind::LeanRightOn});
                state.lean = LeanState::Right;
            }
            break;
        case LeanState::Left:
            if (v > right_enter) {
                out.push_back({t, ActionKind::LeanOff});
                out.push_back({t, ActionKind::LeanRightOn});
                state.lean = LeanState::Right;
            } else if (v >= center_lo && v <= center_hi) {
                out.push_back({t, ActionKind::LeanOff});
                state.lean = LeanState::Neutral;
            }
            break;
        case LeanState::Right:
            if (v < left_enter) {
                out.push_back({t, ActionKind::LeanOff});
                out.push_back({t, ActionKind::LeanLeftOn});
                state.lean = LeanState::Left;
            } else if (v >= center_lo && v <= center_hi) {
                out.push_back({t, ActionKind::LeanOff});
                state.lean = LeanState::Neutral;
            }
            break;
    }
}

void step_board_front(EngineState& state, std::int64_t t, double v,
                      const ThresholdConfig& config,
                      std::vector<ActionEvent>& out) {
    if (!state.front_rest_mm) {
        state.front_rest_mm = v;
        return;
    }
    const double threshold = *state.front_rest_mm + config.jump_pitch_mm;
    if (state.jump_armed && v >= threshold) {
        if (state.last_jump_ms < 0 || t - state.last_jump_ms >= config.debounce_ms) {
            out.push_back({t, ActionKind::Jump});
            state.last_jump_ms = t;
        }
        state.jump_armed = false;
    } else if (!state.jump_armed && v < threshold) {
        state.jump_armed = true;
    }
}

void step_right_shoe(EngineState& state, std::int64_t t, double v,
                     const ThresholdConfig& config,
                     std::vector<ActionEvent>& out) {
    const bool below = v < config.push_angle_deg;
    if (!state.push_init) {
        state.push_init = true;
        state.push_below = below;
        return;
    }
    if (below && !state.push_below) {
        state.push_seen_fall = true;
    } else if (!below && state.push_below && state.push_seen_fall) {
        // Push fires at the rising crossing, end of the stroke.
        if (state.last_push_ms < 0 || t - state.last_push_ms >= config.debounce_ms) {
            out.push_back({t, ActionKind::Push});
            state.last_push_ms = t;
        }
        state.push_seen_fall = false;
    }
    state.push_below = below;
}

void step_left_shoe(EngineState& state, std::int64_t t, double v,
                    const ThresholdConfig& config,
                    std::vector<ActionEvent>& out) {
    if (!state.crouching && v < config.crouch_angle_deg) {
        out.push_back({t, ActionKind::CrouchOn});
        state.crouching = true;
    } else if (state.crouching && v >= config.crouch_angle_deg) {
        out.push_back({t, ActionKind::CrouchOff});
        state.crouching = false;
    }
}

}  // namespace

std::vector<ActionEvent> engine_step(EngineState& state,
                                     const SensorSample& sample,
                                     const ThresholdConfig& config) {
    if (sample.timestamp_ms < state.last_ts) {
        throw std::invalid_argument("samples must arrive in timestamp order");
    }
    state.last_ts = sample.timestamp_ms;

    std::vector<ActionEvent> out;
    switch (sample.source) {
        case SensorSource::BoardSide:
            step_board_side(state, sample.timestamp_ms, sample.value, config, out);
            break;
        case SensorSource::BoardFront:
            step_board_front(state, sample.timestamp_ms, sample.value, config, out);
            break;
        case SensorSource::RightShoe:
            step_right_shoe(state, sample.timestamp_ms, sample.value, config, out);
            break;
        case SensorSource::LeftShoe:
            step_left_shoe(state, sample.timestamp_ms, sample.value, config, out);
            break;
    }
    return out;
}

std::vector<ActionEvent> run_engine(const SensorTrace& trace,
                                    const ThresholdConfig& config) {
    validate_config(config);
    EngineState state;
    std::vector<ActionEvent> events;
    for (const auto& sample : trace.samples) {
        auto step = engine_step(state, sample, config);
        events.insert(events.end(), step.begin(), step.end());
    }
    return events;
}

std::vector<HidEvent> to_hid(const std::vector<ActionEvent>& events) {
    std::vector<HidEvent> out;
    std::optional<HidKey> arrow_down;
    bool key_c_down = false;

    for (const auto& ev : events) {
        const std::int64_t t = ev.timestamp_ms;
        switch (ev.kind) {
            case ActionKind::LeanLeftOn:
                if (arrow_down) {
                    throw HidProtocolError("lean on while an arrow is held");
                }
                out.push_back({t, HidKey::ArrowLeft, HidAction::Down});
                arrow_down = HidKey::ArrowLeft;
                break;
            case ActionKind::LeanRightOn:
                if (arrow_down) {
                    throw HidProtocolError("lean on while an arrow is held");
                }
                out.push_back({t, HidKey::ArrowRight, HidAction::Down});
                arrow_down = HidKey::ArrowRight;
                break;
            case ActionKind::LeanOff:
                if (!arrow_down) {
                    throw HidProtocolError("lean off with no lean active");
                }
                out.push_back({t, *arrow_down, HidAction::Up});
                arrow_down.reset();
                break;
            case ActionKind::Jump:
                out.push_back({t, HidKey::Space, HidAction::Down});
                out.push_back({t, HidKey::Space, HidAction::Up});
                break;
            case ActionKind::Push:
                out.push_back({t, HidKey::ArrowUp, HidAction::Down});
                out.push_back({t, HidKey::ArrowUp, HidAction::Up});
                break;
            case ActionKind::CrouchOn:
                if (key_c_down) {
                    throw HidProtocolError("crouch on while already crouching");
                }
                out.push_back({t, HidKey::KeyC, HidAction::Down});
                key_c_down = true;
                break;
            case ActionKind::CrouchOff:
                if (!key_c_down) {
                    throw HidProtocolError("crouch off while not crouching");
                }
                out.push_back({t, HidKey::KeyC, HidAction::Up});
                key_c_down = false;
                break;
            case ActionKind::HeadingLeft:
            case ActionKind::HeadingRight:
                // Headings are consumed by the simulator, not the keyboard.
                break;
        }
    }
    return out;
}

void save_events(const std::vector<ActionEvent>& events, std::ostream& out) {
    out << "timestamp_ms,kind\n";
    for (const auto& ev : events) {
        out << ev.timestamp_ms << ',' << to_string(ev.kind) << "\n";
    }
}

void save_hid(const std::vector<HidEvent>& events, std::ostream& out) {
    out << "timestamp_ms,key,action\n";
    for (const auto& ev : events) {
        out << ev.timestamp_ms << ',' << to_string(ev.key) << ','
            << to_string(ev.action) << "\n";
    }
}

std::vector<ActionEvent> load_events(std::istream& in) {
    std::vector<ActionEvent> events;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || (row == 1 && line.starts_with("timestamp_ms"))) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("event row " + std::to_string(row) +
                                     ": expected timestamp_ms,kind");
        }
        ActionEvent ev;
        auto [ptr, ec] =
            std::from_chars(line.data(), line.data() + comma, ev.timestamp_ms);
        if (ec != std::errc{} || ptr != line.data() + comma) {
            throw std::runtime_error("event row " + std::to_string(row) +
                                     ": bad timestamp");
        }
        ev.kind = action_from_string(std::string_view(line).substr(comma + 1));
        events.push_back(ev);
    }
    return events;
}

}  // namespace skate

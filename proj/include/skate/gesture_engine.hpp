#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "skate/sensor_model.hpp"

namespace skate {

struct ThresholdConfig {
    double tilt_low_mm = 100.0;
    double tilt_high_mm = 200.0;
    double tilt_hysteresis_mm = 10.0;
    double jump_pitch_mm = 50.0;
    double push_angle_deg = 120.0;
    double crouch_angle_deg = 100.0;
    std::int64_t debounce_ms = 150;
    double heading_step_deg = 90.0;
};

// Throws std::invalid_argument if the hysteresis bands overlap or any
// field is out of range.
void validate_config(const ThresholdConfig& config);

enum class ActionKind : std::uint8_t {
    LeanLeftOn,
    LeanRightOn,
    LeanOff,
    Jump,
    Push,
    CrouchOn,
    CrouchOff,
    HeadingLeft,
    HeadingRight,
};

std::string_view to_string(ActionKind kind);
ActionKind action_from_string(std::string_view text);

struct ActionEvent {
    std::int64_t timestamp_ms = 0;
    ActionKind kind = ActionKind::LeanOff;

    bool operator==(const ActionEvent&) const = default;
};

enum class HidKey : std::uint8_t { ArrowLeft, ArrowRight, ArrowUp, Space, KeyC };
enum class HidAction : std::uint8_t { Down, Up };

std::string_view to_string(HidKey key);
std::string_view to_string(HidAction action);

struct HidEvent {
    std::int64_t timestamp_ms = 0;
    HidKey key = HidKey::Space;
    HidAction action = HidAction::Down;

    bool operator==(const HidEvent&) const = default;
};

enum class LeanState : std::uint8_t { Neutral, Left, Right };

struct EngineState {
    LeanState lean = LeanState::Neutral;
    // Board-front rest distance is learned from the first sample seen.
    std::optional<double> front_rest_mm;
    bool jump_armed = true;
    std::int64_t last_jump_ms = -1;
    bool push_init = false;        // first right-shoe sample consumed
    bool push_below = false;       // right-shoe angle currently below threshold
    bool push_seen_fall = false;   // a falling crossing is pending its rise
    std::int64_t last_push_ms = -1;
    bool crouching = false;
    std::int64_t last_ts = -1;

    bool operator==(const EngineState&) const = default;
};

// Deterministic finite-state transducer: one sample in, zero or more
// action events out. Samples must arrive in nondecreasing timestamp order.
std::vector<ActionEvent> engine_step(EngineState& state,
                                     const SensorSample& sample,
                                     const ThresholdConfig& config);

// Folds engine_step over the whole trace from the initial state.
std::vector<ActionEvent> run_engine(const SensorTrace& trace,
                                    const ThresholdConfig& config);

class HidProtocolError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maps actions to key events: leans hold an arrow, Jump taps Space, Push
// taps ArrowUp, crouch holds KeyC. Throws HidProtocolError on a LeanOff
// with no lean active.
std::vector<HidEvent> to_hid(const std::vector<ActionEvent>& events);

// Event log CSV: `timestamp_ms,kind`; HID log CSV: `timestamp_ms,key,action`.
void save_events(const std::vector<ActionEvent>& events, std::ostream& out);
void save_hid(const std::vector<HidEvent>& events, std::ostream& out);
std::vector<ActionEvent> load_events(std::istream& in);

}  // namespace skate

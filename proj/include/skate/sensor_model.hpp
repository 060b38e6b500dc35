#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skate {

enum class SensorSource : std::uint8_t {
    BoardSide,
    BoardFront,
    LeftShoe,
    RightShoe,
};

std::string_view to_string(SensorSource source);
SensorSource source_from_string(std::string_view text);

// Valid value range for a source: [0, 2000] mm for board sensors,
// [0, 180] deg for shoe sensors.
struct ValueRange {
    double lo;
    double hi;
};
ValueRange value_range(SensorSource source);

struct SensorSample {
    std::int64_t timestamp_ms = 0;
    SensorSource source = SensorSource::BoardSide;
    double value = 0.0;

    bool operator==(const SensorSample&) const = default;
};

struct SensorTrace {
    double sample_rate_hz = 50.0;
    std::vector<SensorSample> samples;
    std::string label;

    bool operator==(const SensorTrace&) const = default;
};

enum class LeanDirection { Left, Right, Neutral };

// Board-side distance trace: ramp from rest to rest -/+ delta over the
// first 20% of samples, hold the plateau, ramp back over the last 20%.
// Neutral holds the rest distance for the whole duration.
SensorTrace gen_lean_trace(LeanDirection direction, std::int64_t duration_ms,
                           double rest_distance_mm, double lean_delta_mm,
                           double sample_rate_hz);

// Board-front distance trace with one triangular excursion of
// +pitch_delta_mm centered at duration_ms/2 (width duration_ms/2).
SensorTrace gen_jump_trace(std::int64_t duration_ms, double rest_distance_mm,
                           double pitch_delta_mm, double sample_rate_hz);

// Right-shoe angle trace: `cycles` cosine-shaped dips from rest_angle_deg
// down to min_angle_deg and back, one dip per 1/cadence_hz seconds.
SensorTrace gen_push_cycle_trace(int cycles, double cadence_hz,
                                 double rest_angle_deg, double min_angle_deg,
                                 double sample_rate_hz);

// Zero-mean Gaussian perturbation, clamped to the source's valid range.
// Deterministic in (trace, sigma, seed); sigma == 0 returns the input
// unchanged.
SensorTrace add_noise(const SensorTrace& trace, double sigma,
                      std::uint64_t seed);

// Throws std::invalid_argument if any trace invariant is violated
// (per-source monotone timestamps, value ranges, sample spacing).
void validate_trace(const SensorTrace& trace);

// Trace CSV: `# rate_hz=<real>` header then `timestamp_ms,source,value`
// rows, full round-trip precision.
void save_trace(const SensorTrace& trace, std::ostream& out);
void save_trace_file(const SensorTrace& trace, const std::string& path);
SensorTrace load_trace(std::istream& in);
SensorTrace load_trace_file(const std::string& path);

// Parse failures carry the 1-based row number of the offending line.
class TraceParseError : public std::runtime_error {
public:
    TraceParseError(std::size_t row, const std::string& what);
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

}  // namespace skate

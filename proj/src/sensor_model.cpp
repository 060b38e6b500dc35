#include "skate/sensor_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace skate {

namespace {

constexpr double kBoardMaxMm = 2000.0;
constexpr double kShoeMaxDeg = 180.0;

std::int64_t sample_count_for(std::int64_t duration_ms, double rate_hz) {
    return static_cast<std::int64_t>(
        std::llround(static_cast<double>(duration_ms) * rate_hz / 1000.0));
}

std::int64_t timestamp_for(std::int64_t index, double rate_hz) {
    return static_cast<std::int64_t>(
        std::llround(static_cast<double>(index) * 1000.0 / rate_hz));
}

void require_positive_duration_rate(std::int64_t duration_ms, double rate_hz) {
    if (duration_ms <= 0) {
        throw std::invalid_argument("duration_ms must be positive");
    }
    if (!(rate_hz > 0.0)) {
        throw std::invalid_argument("sample_rate_hz must be positive");
    }
}

std::string format_value(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(SensorSource source) {
    switch (source) {
        case SensorSource::BoardSide: return "board_side";
        case SensorSource::BoardFront: return "board_front";
        case SensorSource::LeftShoe: return "left_shoe";
        case SensorSource::RightShoe: return "right_shoe";
    }
    throw std::invalid_argument("unknown sensor source");
}

SensorSource source_from_string(std::string_view text) {
    if (text == "board_side") return SensorSource::BoardSide;
    if (text == "board_front") return SensorSource::BoardFront;
    if (text == "left_shoe") return SensorSource::LeftShoe;
    if (text == "right_shoe") return SensorSource::RightShoe;
    throw std::invalid_argument("unknown sensor source: " + std::string(text));
}

ValueRange value_range(SensorSource source) {
    switch (source) {
        case SensorSource::BoardSide:
        case SensorSource::BoardFront:
            return {0.0, kBoardMaxMm};
        case SensorSource::LeftShoe:
        case SensorSource::RightShoe:
            return {0.0, kShoeMaxDeg};
    }
    throw std::invalid_argument("unknown sensor source");
}

SensorTrace gen_lean_trace(LeanDirection direction, std::int64_t duration_ms,
                           double rest_distance_mm, double lean_delta_mm,
                           double sample_rate_hz) {
    require_positive_duration_rate(duration_ms, sample_rate_hz);
    if (!(lean_delta_mm > 0.0) && direction != LeanDirection::Neutral) {
        throw std::invalid_argument("lean_delta_mm must be positive");
    }
    if (rest_distance_mm - lean_delta_mm < 0.0) {
        throw std::invalid_argument("rest_distance_mm - lean_delta_mm must be >= 0");
    }

    const std::int64_t n = sample_count_for(duration_ms, sample_rate_hz);
    const double signed_delta = direction == LeanDirection::Left ? -lean_delta_mm
                              : direction == LeanDirection::Right ? lean_delta_mm
                                                                  : 0.0;
    // 20% of samples on each side ramp linearly between rest and plateau.
    const std::int64_t ramp_n = n / 5;

    SensorTrace trace;
    trace.sample_rate_hz = sample_rate_hz;
    trace.label = direction == LeanDirection::Left    ? "lean_left"
                  : direction == LeanDirection::Right ? "lean_right"
                                                      : "lean_neutral";
    trace.samples.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        double frac = 1.0;
        if (ramp_n > 0) {
            if (i < ramp_n) {
                frac = static_cast<double>(i) / static_cast<double>(ramp_n);
            } else if (i >= n - ramp_n) {
                frac = static_cast<double>(n - 1 - i) / static_cast<double>(ramp_n);
            }
        }
        trace.samples.push_back({timestamp_for(i, sample_rate_hz),
                                 SensorSource::BoardSide,
                                 rest_distance_mm + signed_delta * frac});
    }
    return trace;
}

SensorTrace gen_jump_trace(std::int64_t duration_ms, double rest_distance_mm,
                           double pitch_delta_mm, double sample_rate_hz) {
    require_positive_duration_rate(duration_ms, sample_rate_hz);
    if (pitch_delta_mm < 0.0) {
        throw std::invalid_argument("pitch_delta_mm must be non-negative");
    }

    const std::int64_t n = sample_count_for(duration_ms, sample_rate_hz);
    const double mid = static_cast<double>(duration_ms) / 2.0;
    // Triangle spans the middle half of the trace so the ends stay at rest.
    const double half_width = static_cast<double>(duration_ms) / 4.0;

    SensorTrace trace;
    trace.sample_rate_hz = sample_rate_hz;
    trace.label = "jump";
    trace.samples.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t t = timestamp_for(i, sample_rate_hz);
        const double dist = std::abs(static_cast<double>(t) - mid);
        const double frac = std::max(0.0, 1.0 - dist / half_width);
        trace.samples.push_back({t, SensorSource::BoardFront,
                                 rest_distance_mm + pitch_delta_mm * frac});
    }
    return trace;
}

SensorTrace gen_push_cycle_trace(int cycles, double cadence_hz,
                                 double rest_angle_deg, double min_angle_deg,
                                 double sample_rate_hz) {
    if (cycles < 0) {
        throw std::invalid_argument("cycles must be >= 0");
    }
    if (!(cadence_hz > 0.0)) {
        throw std::invalid_argument("cadence_hz must be positive");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("sample_rate_hz must be positive");
    }
    if (!(min_angle_deg < rest_angle_deg) || min_angle_deg < 0.0 ||
        rest_angle_deg > kShoeMaxDeg) {
        throw std::invalid_argument(
            "require 0 <= min_angle_deg < rest_angle_deg <= 180");
    }

    SensorTrace trace;
    trace.sample_rate_hz = sample_rate_hz;
    trace.label = "push_cycles";
    if (cycles == 0) {
        trace.samples.push_back({0, SensorSource::RightShoe, rest_angle_deg});
        return trace;
    }

    const double duration_ms = 1000.0 * static_cast<double>(cycles) / cadence_hz;
    const std::int64_t n = sample_count_for(
        static_cast<std::int64_t>(std::llround(duration_ms)), sample_rate_hz);
    const double amplitude = (rest_angle_deg - min_angle_deg) / 2.0;
    trace.samples.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t t = timestamp_for(i, sample_rate_hz);
        const double phase =
            2.0 * std::numbers::pi * cadence_hz * static_cast<double>(t) / 1000.0;
        const double value =
            rest_angle_deg - amplitude * (1.0 - std::cos(phase));
        trace.samples.push_back({t, SensorSource::RightShoe, value});
    }
    return trace;
}

SensorTrace add_noise(const SensorTrace& trace, double sigma,
                      std::uint64_t seed) {
    if (sigma < 0.0) {
        throw std::invalid_argument("sigma must be >= 0");
    }
    if (sigma == 0.0) {
        return trace;
    }
    SensorTrace out = trace;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& sample : out.samples) {
        const ValueRange range = value_range(sample.source);
        sample.value = std::clamp(sample.value + noise(rng), range.lo, range.hi);
    }
    return out;
}

void validate_trace(const SensorTrace& trace) {
    if (!(trace.sample_rate_hz > 0.0)) {
        throw std::invalid_argument("trace sample rate must be positive");
    }
    const double spacing_ms = 1000.0 / trace.sample_rate_hz;
    std::int64_t last_ts[4];
    bool seen[4] = {false, false, false, false};
    for (const auto& sample : trace.samples) {
        if (sample.timestamp_ms < 0) {
            throw std::invalid_argument("negative timestamp in trace");
        }
        const ValueRange range = value_range(sample.source);
        if (sample.value < range.lo || sample.value > range.hi) {
            throw std::invalid_argument("sample value out of range for source");
        }
        const auto idx = static_cast<std::size_t>(sample.source);
        if (seen[idx]) {
            if (sample.timestamp_ms <= last_ts[idx]) {
                throw std::invalid_argument(
                    "timestamps not strictly increasing per source");
            }
            const double gap =
                static_cast<double>(sample.timestamp_ms - last_ts[idx]);
            if (std::abs(gap - spacing_ms) > 1.0) {
                throw std::invalid_argument(
                    "sample spacing deviates from declared rate by > 1 ms");
            }
        }
        last_ts[idx] = sample.timestamp_ms;
        seen[idx] = true;
    }
}

TraceParseError::TraceParseError(std::size_t row, const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + ": " + what),
      row_(row) {}

void save_trace(const SensorTrace& trace, std::ostream& out) {
    out << "# rate_hz=" << format_value(trace.sample_rate_hz) << "\n";
    for (const auto& sample : trace.samples) {
        out << sample.timestamp_ms << ',' << to_string(sample.source) << ','
            << format_value(sample.value) << "\n";
    }
}

void save_trace_file(const SensorTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    save_trace(trace, out);
}

SensorTrace load_trace(std::istream& in) {
    SensorTrace trace;
    std::string line;
    std::size_t row = 0;

    if (!std::getline(in, line)) {
        throw TraceParseError(1, "missing rate header");
    }
    ++row;
    constexpr std::string_view kHeader = "# rate_hz=";
    if (!line.starts_with(kHeader)) {
        throw TraceParseError(row, "expected header '# rate_hz=<real>'");
    }
    {
        const std::string rate_text = line.substr(kHeader.size());
        double rate = 0.0;
        auto [ptr, ec] = std::from_chars(
            rate_text.data(), rate_text.data() + rate_text.size(), rate);
        if (ec != std::errc{} || ptr != rate_text.data() + rate_text.size() ||
            !(rate > 0.0)) {
            throw TraceParseError(row, "bad rate value: " + rate_text);
        }
        trace.sample_rate_hz = rate;
    }

    std::int64_t last_ts[4];
    bool seen[4] = {false, false, false, false};
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos
                                                : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw TraceParseError(row, "expected timestamp_ms,source,value");
        }
        SensorSample sample;
        {
            auto [ptr, ec] =
                std::from_chars(line.data(), line.data() + c1, sample.timestamp_ms);
            if (ec != std::errc{} || ptr != line.data() + c1) {
                throw TraceParseError(row, "bad timestamp");
            }
        }
        try {
            sample.source =
                source_from_string(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
        } catch (const std::invalid_argument& e) {
            throw TraceParseError(row, e.what());
        }
        {
            auto [ptr, ec] = std::from_chars(line.data() + c2 + 1,
                                             line.data() + line.size(), sample.value);
            if (ec != std::errc{} || ptr != line.data() + line.size()) {
                throw TraceParseError(row, "bad value");
            }
        }
        if (sample.timestamp_ms < 0) {
            throw TraceParseError(row, "negative timestamp");
        }
        const ValueRange range = value_range(sample.source);
        if (sample.value < range.lo || sample.value > range.hi) {
            throw TraceParseError(row, "value out of range for source");
        }
        const auto idx = static_cast<std::size_t>(sample.source);
        if (seen[idx] && sample.timestamp_ms <= last_ts[idx]) {
            throw TraceParseError(row, "timestamp not increasing for source");
        }
        last_ts[idx] = sample.timestamp_ms;
        seen[idx] = true;
        trace.samples.push_back(sample);
    }
    return trace;
}

SensorTrace load_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    return load_trace(in);
}

}  // namespace skate

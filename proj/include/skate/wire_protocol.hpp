#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "skate/sensor_model.hpp"

namespace skate {

enum class UnitId : std::uint8_t { LeftShoe = 1, RightShoe = 2 };

constexpr std::size_t kMaxSamplesPerPacket = 20;
constexpr std::size_t kMinFrameBytes = 10;  // empty payload
constexpr std::uint16_t kSeqReorderWindow = 1024;

struct PayloadSample {
    std::uint8_t delta_ms = 0;       // offset from the previous sample
    std::int16_t value_centi = 0;    // value in 0.01-unit steps

    bool operator==(const PayloadSample&) const = default;
};

struct Packet {
    UnitId unit_id = UnitId::LeftShoe;
    std::uint16_t seq = 0;           // wrapping counter
    std::uint32_t base_timestamp_ms = 0;
    std::vector<PayloadSample> samples;

    bool operator==(const Packet&) const = default;
};

class TruncationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class CorruptionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class ProtocolError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Little-endian frame: unit_id(1) seq(2) base_timestamp_ms(4)
// sample_count(1) payload(3 x count) checksum(2). The checksum is the
// 16-bit one's-complement sum over all preceding bytes.
std::vector<std::uint8_t> encode(const Packet& packet);

// Throws TruncationError on short input, CorruptionError on checksum
// mismatch, ProtocolError on an unknown unit id.
Packet decode(const std::vector<std::uint8_t>& bytes);

// Splits shoe samples of a trace into packets, at most
// kMaxSamplesPerPacket samples each; an 8-bit delta overflow forces a new
// packet. Values are quantized to centi-units. Board sources are rejected
// (they stay on the wired path).
std::vector<Packet> packetize(const SensorTrace& trace);

// Quantizes shoe values to the 0.01-unit wire resolution; what packetize
// followed by reassemble reproduces exactly.
SensorTrace quantize_to_wire(const SensorTrace& trace);

// Drops each packet independently with probability loss_rate, then
// permutes survivors within consecutive windows of reorder_window
// packets. Deterministic in seed.
std::vector<Packet> simulate_channel(const std::vector<Packet>& packets,
                                     double loss_rate, int reorder_window,
                                     std::uint64_t seed);

struct UnitLinkStats {
    std::size_t received = 0;
    std::size_t duplicates = 0;
    std::size_t gaps = 0;  // missing seq numbers between first and last seen
};

struct LinkStats {
    UnitLinkStats left;
    UnitLinkStats right;

    const UnitLinkStats& for_unit(UnitId id) const {
        return id == UnitId::LeftShoe ? left : right;
    }
};

struct ReassemblyResult {
    std::vector<SensorSample> samples;  // merged across units, timestamp order
    LinkStats stats;
};

// Orders packets by wrap-aware seq (within kSeqReorderWindow), drops
// duplicates, expands payloads to absolute timestamps, merges units.
ReassemblyResult reassemble(const std::vector<Packet>& packets);

// Capture file: little-endian u16 length prefix, then the frame bytes.
void write_capture(const std::vector<Packet>& packets, std::ostream& out);
std::vector<Packet> read_capture(std::istream& in);

}  // namespace skate

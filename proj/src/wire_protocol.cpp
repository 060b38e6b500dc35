#include "skate/wire_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>

namespace skate {

namespace {

std::uint16_t ones_complement_sum(const std::uint8_t* data, std::size_t len) {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < len; ++i) {
        acc += data[i];
    }
    while (acc >> 16) {
        acc = (acc & 0xFFFFu) + (acc >> 16);
    }
    return static_cast<std::uint16_t>(acc);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> encode(const Packet& packet) {
    if (packet.samples.size() > kMaxSamplesPerPacket) {
        throw std::invalid_argument("sample_count exceeds 20");
    }
    std::vector<std::uint8_t> out;
    out.reserve(kMinFrameBytes + 3 * packet.samples.size());
    out.push_back(static_cast<std::uint8_t>(packet.unit_id));
    put_u16(out, packet.seq);
    put_u32(out, packet.base_timestamp_ms);
    out.push_back(static_cast<std::uint8_t>(packet.samples.size()));
    for (const auto& s : packet.samples) {
        out.push_back(s.delta_ms);
        put_u16(out, static_cast<std::uint16_t>(s.value_centi));
    }
    put_u16(out, ones_complement_sum(out.data(), out.size()));
    return out;
}

Packet decode(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kMinFrameBytes) {
        throw TruncationError("frame shorter than minimum length");
    }
    const std::size_t count = bytes[7];
    const std::size_t expected = kMinFrameBytes + 3 * count;
    if (bytes.size() < expected) {
        throw TruncationError("frame shorter than header-declared length");
    }
    if (bytes.size() > expected) {
        throw CorruptionError("frame longer than header-declared length");
    }
    const std::uint16_t stored = get_u16(bytes.data() + expected - 2);
    const std::uint16_t computed = ones_complement_sum(bytes.data(), expected - 2);
    if (stored != computed) {
        throw CorruptionError("checksum mismatch");
    }
    if (count > kMaxSamplesPerPacket) {
        throw ProtocolError("sample_count exceeds 20");
    }
    if (bytes[0] != static_cast<std::uint8_t>(UnitId::LeftShoe) &&
        bytes[0] != static_cast<std::uint8_t>(UnitId::RightShoe)) {
        throw ProtocolError("unknown unit id");
    }

    Packet packet;
    packet.unit_id = static_cast<UnitId>(bytes[0]);
    packet.seq = get_u16(bytes.data() + 1);
    packet.base_timestamp_ms = get_u32(bytes.data() + 3);
    packet.samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* p = bytes.data() + 8 + 3 * i;
        packet.samples.push_back(
            {p[0], static_cast<std::int16_t>(get_u16(p + 1))});
    }
    return packet;
}

SensorTrace quantize_to_wire(const SensorTrace& trace) {
    SensorTrace out = trace;
    for (auto& s : out.samples) {
        if (s.source == SensorSource::LeftShoe ||
            s.source == SensorSource::RightShoe) {
            s.value = std::round(s.value * 100.0) / 100.0;
        }
    }
    return out;
}

std::vector<Packet> packetize(const SensorTrace& trace) {
    std::vector<Packet> packets;
    struct UnitState {
        Packet current;
        std::int64_t prev_ts = 0;
        bool open = false;
        std::uint16_t next_seq = 0;
    };
    UnitState units[2];  // [0] = left, [1] = right

    auto flush = [&](UnitState& u) {
        if (u.open) {
            packets.push_back(std::move(u.current));
            u.current = Packet{};
            u.open = false;
        }
    };

    for (const auto& s : trace.samples) {
        if (s.source == SensorSource::BoardSide ||
            s.source == SensorSource::BoardFront) {
            throw std::invalid_argument(
                "board sources are wired; only shoe samples are packetized");
        }
        const bool left = s.source == SensorSource::LeftShoe;
        UnitState& u = units[left ? 0 : 1];
        const auto centi =
            static_cast<std::int16_t>(std::llround(s.value * 100.0));

        std::int64_t delta = u.open ? s.timestamp_ms - u.prev_ts : 0;
        if (u.open &&
            (u.current.samples.size() >= kMaxSamplesPerPacket || delta > 255)) {
            flush(u);
            delta = 0;
        }
        if (!u.open) {
            u.current.unit_id = left ? UnitId::LeftShoe : UnitId::RightShoe;
            u.current.seq = u.next_seq++;
            u.current.base_timestamp_ms =
                static_cast<std::uint32_t>(s.timestamp_ms);
            u.open = true;
        }
        u.current.samples.push_back(
            {static_cast<std::uint8_t>(delta), centi});
        u.prev_ts = s.timestamp_ms;
    }
    flush(units[0]);
    flush(units[1]);
    return packets;
}

std::vector<Packet> simulate_channel(const std::vector<Packet>& packets,
                                     double loss_rate, int reorder_window,
                                     std::uint64_t seed) {
    if (loss_rate < 0.0 || loss_rate > 1.0) {
        throw std::invalid_argument("loss_rate must be in [0, 1]");
    }
    if (reorder_window < 0) {
        throw std::invalid_argument("reorder_window must be >= 0");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution drop(loss_rate);

    std::vector<Packet> survivors;
    survivors.reserve(packets.size());
    for (const auto& p : packets) {
        if (!drop(rng)) {
            survivors.push_back(p);
        }
    }
    if (reorder_window > 1) {
        const auto w = static_cast<std::size_t>(reorder_window);
        for (std::size_t begin = 0; begin < survivors.size(); begin += w) {
            const std::size_t end = std::min(begin + w, survivors.size());
            std::shuffle(survivors.begin() + static_cast<std::ptrdiff_t>(begin),
                         survivors.begin() + static_cast<std::ptrdiff_t>(end),
                         rng);
        }
    }
    return survivors;
}

ReassemblyResult reassemble(const std::vector<Packet>& packets) {
    ReassemblyResult result;

    for (int unit = 0; unit < 2; ++unit) {
        const UnitId id = unit == 0 ? UnitId::LeftShoe : UnitId::RightShoe;
        UnitLinkStats& stats =
            unit == 0 ? result.stats.left : result.stats.right;

        // Unwrap 16-bit seq numbers into a monotone extended counter;
        // reordering is bounded by kSeqReorderWindow so signed 16-bit
        // deltas between neighbors are unambiguous.
        std::map<std::int64_t, const Packet*> by_ext_seq;
        std::int64_t last_ext = 0;
        bool first = true;
        for (const auto& p : packets) {
            if (p.unit_id != id) {
                continue;
            }
            ++stats.received;
            std::int64_t ext;
            if (first) {
                ext = p.seq;
                first = false;
            } else {
                const auto diff = static_cast<std::int16_t>(
                    p.seq - static_cast<std::uint16_t>(last_ext));
                ext = last_ext + diff;
            }
            last_ext = ext;
            auto [it, inserted] = by_ext_seq.emplace(ext, &p);
            if (!inserted) {
                ++stats.duplicates;
            }
        }

        if (!by_ext_seq.empty()) {
            const std::int64_t span =
                by_ext_seq.rbegin()->first - by_ext_seq.begin()->first + 1;
            stats.gaps = static_cast<std::size_t>(span) - by_ext_seq.size();
        }

        const SensorSource source = unit == 0 ? SensorSource::LeftShoe
                                              : SensorSource::RightShoe;
        for (const auto& [ext, p] : by_ext_seq) {
            std::int64_t ts = p->base_timestamp_ms;
            for (const auto& s : p->samples) {
                ts += s.delta_ms;
                result.samples.push_back(
                    {ts, source, static_cast<double>(s.value_centi) / 100.0});
            }
        }
    }

    std::stable_sort(result.samples.begin(), result.samples.end(),
                     [](const SensorSample& a, const SensorSample& b) {
                         return a.timestamp_ms < b.timestamp_ms;
                     });
    return result;
}

void write_capture(const std::vector<Packet>& packets, std::ostream& out) {
    for (const auto& p : packets) {
        const auto frame = encode(p);
        const auto len = static_cast<std::uint16_t>(frame.size());
        const char len_bytes[2] = {static_cast<char>(len & 0xFF),
                                   static_cast<char>(len >> 8)};
        out.write(len_bytes, 2);
        out.write(reinterpret_cast<const char*>(frame.data()),
                  static_cast<std::streamsize>(frame.size()));
    }
}

std::vector<Packet> read_capture(std::istream& in) {
    std::vector<Packet> packets;
    char len_bytes[2];
    while (in.read(len_bytes, 2)) {
        const std::uint16_t len =
            static_cast<std::uint8_t>(len_bytes[0]) |
            (static_cast<std::uint16_t>(static_cast<std::uint8_t>(len_bytes[1]))
             << 8);
        std::vector<std::uint8_t> frame(len);
        if (!in.read(reinterpret_cast<char*>(frame.data()), len)) {
            throw TruncationError("capture file ends mid-frame");
        }
        packets.push_back(decode(frame));
    }
    return packets;
}

}  // namespace skate

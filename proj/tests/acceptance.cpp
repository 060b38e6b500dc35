// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "reference_oracles.hpp"
#include "skate/eval_stats.hpp"
#include "skate/game_sim.hpp"
#include "skate/gesture_engine.hpp"
#include "skate/sensor_model.hpp"
#include "skate/wire_protocol.hpp"

using namespace skate;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " - ", detail.c_str());
    if (!pass) ++failures;
}

CategoryCounts counts_of(std::array<int, 5> c) {
    CategoryCounts out;
    out.counts = c;
    return out;
}

// --- criterion 1: published D statistic -------------------------------------
void check_ks_statistic() {
    const auto a = counts_of({9, 10, 8, 2, 1});
    const auto b = counts_of({17, 9, 4, 0, 0});
    const double d = ks_d_statistic(a, b);
    bool pass = std::abs(d - 0.266666667) <= 1e-9;
    const auto diffs = ks_category_diffs(a, b);
    const std::array<double, 5> expected = {0.266667, 0.233333, 0.1, 0.033333,
                                            0.0};
    for (std::size_t i = 0; i < 5; ++i) {
        if (std::abs(diffs[i] - expected[i]) > 1e-6) pass = false;
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "D = %.9f", d);
    report("K-S statistic on published category counts", pass, detail);
}

// --- criterion 2: decisions at n=30 -----------------------------------------
void check_ks_decisions() {
    bool pass = true;
    pass &= std::abs(ks_critical(30, Alpha::A10) - 0.22) < 1e-12;
    pass &= std::abs(ks_critical(30, Alpha::A05) - 0.24) < 1e-12;
    pass &= std::abs(ks_critical(30, Alpha::A01) - 0.29) < 1e-12;
    const double d = 0.266666667;
    pass &= ks_decide(d, 30, Alpha::A10) == KsDecision::Reject;
    pass &= ks_decide(d, 30, Alpha::A05) == KsDecision::Reject;
    pass &= ks_decide(d, 30, Alpha::A01) == KsDecision::FailToReject;
    report("K-S decisions at n=30 (.10/.05 Reject, .01 FailToReject)", pass,
           "table row decides; the source prose claims rejection at .01 and is "
           "contradicted by its own table");
}

// --- criterion 3: critical-value table --------------------------------------
void check_critical_table() {
    struct Row {
        int n;
        std::array<double, 5> values;
    };
    static const std::vector<Row> rows = {
        {1, {.900, .925, .950, .975, .995}},
        {2, {.684, .726, .776, .842, .929}},
        {3, {.565, .597, .642, .708, .828}},
        {4, {.494, .525, .564, .624, .733}},
        {5, {.446, .474, .510, .565, .669}},
        {6, {.410, .436, .470, .521, .618}},
        {7, {.381, .405, .438, .486, .577}},
        {8, {.358, .381, .411, .457, .543}},
        {9, {.339, .360, .388, .432, .514}},
        {10, {.322, .342, .368, .410, .490}},
        {11, {.307, .326, .352, .391, .468}},
        {12, {.295, .313, .338, .375, .450}},
        {13, {.284, .302, .325, .361, .433}},
        {14, {.274, .292, .314, .349, .418}},
        {15, {.266, .283, .304, .338, .404}},
        {16, {.258, .274, .295, .328, .392}},
        {17, {.250, .266, .286, .318, .381}},
        {18, {.244, .259, .278, .309, .371}},
        {19, {.237, .252, .272, .301, .363}},
        {20, {.231, .246, .264, .294, .356}},
        {25, {.21, .22, .24, .27, .32}},
        {30, {.19, .20, .22, .24, .29}},
        {35, {.18, .19, .21, .23, .27}},
    };
    bool pass = true;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < 5; ++i) {
            if (ks_critical(row.n, kAlphas[i]) != row.values[i]) pass = false;
        }
    }
    pass &= ks_critical(1, Alpha::A20) == 0.900;
    pass &= ks_critical(10, Alpha::A05) == 0.410;
    pass &= ks_critical(20, Alpha::A01) == 0.356;
    pass &= ks_critical(35, Alpha::A10) == 0.21;
    pass &= std::abs(ks_critical(100, Alpha::A05) - 0.136) < 1e-12;
    report("critical-value lookups match every tabled row and 1.36/sqrt(100)",
           pass);
}

// --- criterion 4: mean-difference table -------------------------------------
void check_mean_diff() {
    // the 20 published (baseline, prototype) mean pairs, in table order
    const std::vector<double> means_a = {2.67, 2.33, 2.68, 2.11, 2.79, 2.33, 3.47,
                                         3.00, 2.50, 3.32, 3.00, 3.21, 2.79, 2.84,
                                         3.00, 3.17, 2.58, 2.50, 3.17, 3.32};
    const std::vector<double> means_b = {3.11, 3.16, 3.50, 3.17, 2.83, 2.79, 2.50,
                                         3.11, 2.63, 3.50, 3.00, 3.67, 2.00, 3.17,
                                         3.42, 3.32, 2.83, 3.16, 3.42, 3.83};
    const std::vector<double> printed = {0.44, 0.82,  0.82, 1.06, 0.04,
                                         0.46, -0.97, 0.11, 0.13, 0.18,
                                         0.00, 0.46,  -0.79, 0.32, 0.42,
                                         0.15, 0.25,  0.66, 0.25, 0.52};
    // Rows whose printed difference disagrees with the printed means by
    // exactly 0.01 (rounding of unpublished raw means in the source); for
    // those rows the check target is the arithmetic of the published pair.
    const std::vector<std::size_t> pair_arithmetic_rows = {1, 13, 19};

    const auto table = mean_diff_from_means(means_a, means_b);
    bool pass = table.rows.size() == 20;
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const bool use_pair =
            std::find(pair_arithmetic_rows.begin(), pair_arithmetic_rows.end(),
                      i) != pair_arithmetic_rows.end();
        const double expected = use_pair ? means_b[i] - means_a[i] : printed[i];
        if (use_pair) ++flagged;
        if (std::abs(table.rows[i].diff - expected) > 0.005) pass = false;
    }
    pass &= std::abs(table.sum - 5.33) <= 0.01;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "sum = %.4f (target 5.33 +/- 0.01); %zu rows checked against "
                  "pair arithmetic where the printed cell is internally "
                  "inconsistent",
                  table.sum, flagged);
    report("mean-difference table over the 20 published mean pairs", pass,
           detail);
}

// --- criterion 5: gesture-engine oracle equivalence -------------------------
SensorTrace random_trace(std::mt19937_64& rng) {
    SensorTrace trace;
    trace.sample_rate_hz = 50.0;
    std::uniform_int_distribution<int> segments(3, 12);
    std::uniform_int_distribution<int> seg_len(2, 40);
    std::uniform_real_distribution<double> board(0.0, 400.0);
    std::uniform_real_distribution<double> angle(60.0, 180.0);
    std::uniform_int_distribution<int> source_pick(0, 3);
    std::uniform_real_distribution<double> wobble(-20.0, 20.0);

    std::int64_t t[4] = {0, 0, 0, 0};
    const int n_seg = segments(rng);
    for (int seg = 0; seg < n_seg; ++seg) {
        const int src = source_pick(rng);
        const auto source = static_cast<SensorSource>(src);
        const double base = src < 2 ? board(rng) : angle(rng);
        const int len = seg_len(rng);
        for (int i = 0; i < len; ++i) {
            const auto range = value_range(source);
            trace.samples.push_back(
                {t[src], source,
                 std::clamp(base + wobble(rng), range.lo, range.hi)});
            t[src] += 20;
        }
    }
    std::stable_sort(trace.samples.begin(), trace.samples.end(),
                     [](const SensorSample& a, const SensorSample& b) {
                         return a.timestamp_ms < b.timestamp_ms;
                     });
    return trace;
}

ThresholdConfig random_config(std::mt19937_64& rng) {
    ThresholdConfig cfg;
    std::uniform_real_distribution<double> low(60.0, 140.0);
    std::uniform_real_distribution<double> gap(60.0, 150.0);
    std::uniform_real_distribution<double> hyst(0.0, 20.0);
    std::uniform_real_distribution<double> push(90.0, 150.0);
    std::uniform_real_distribution<double> crouch(70.0, 130.0);
    std::uniform_int_distribution<std::int64_t> debounce(0, 300);
    cfg.tilt_low_mm = low(rng);
    cfg.tilt_high_mm = cfg.tilt_low_mm + gap(rng);
    cfg.tilt_hysteresis_mm =
        std::min(hyst(rng), (cfg.tilt_high_mm - cfg.tilt_low_mm) / 2.0 - 1.0);
    cfg.push_angle_deg = push(rng);
    cfg.crouch_angle_deg = crouch(rng);
    cfg.debounce_ms = debounce(rng);
    return cfg;
}

void check_gesture_oracle() {
    std::mt19937_64 rng(424242);
    int sequence_matches = 0;
    int push_matches = 0;
    const int runs = 100;
    for (int i = 0; i < runs; ++i) {
        const auto trace = random_trace(rng);
        const auto cfg = random_config(rng);
        const auto events = run_engine(trace, cfg);
        if (events == testing::oracle_events(trace, cfg)) ++sequence_matches;
        std::size_t pushes = 0;
        for (const auto& e : events)
            if (e.kind == ActionKind::Push) ++pushes;
        if (pushes == testing::oracle_push_count(trace, cfg)) ++push_matches;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "%d/%d sequences equal, %d/%d push counts equal",
                  sequence_matches, runs, push_matches, runs);
    report("gesture engine equals brute-force crossing scan on 100 traces",
           sequence_matches == runs && push_matches == runs, detail);
}

// --- criterion 6: hysteresis no-chatter -------------------------------------
void check_no_chatter() {
    ThresholdConfig cfg;  // defaults: band 100..200, hysteresis 10
    const auto base = gen_lean_trace(LeanDirection::Neutral, 2000, 150, 60, 50);
    const double sigma = cfg.tilt_hysteresis_mm / 3.0;
    int silent = 0;
    bool never_more_than_one_pair = true;
    const int seeds = 1000;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto events =
            run_engine(add_noise(base, sigma, static_cast<std::uint64_t>(seed)),
                       cfg);
        if (events.empty()) {
            ++silent;
        } else {
            std::size_t on = 0;
            for (const auto& e : events) {
                if (e.kind == ActionKind::LeanLeftOn ||
                    e.kind == ActionKind::LeanRightOn)
                    ++on;
            }
            if (on > 1) never_more_than_one_pair = false;
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%d/%d seeds emitted no events",
                  silent, seeds);
    report("no chatter: neutral + sigma=hysteresis/3 noise across 1000 seeds",
           silent >= static_cast<int>(0.99 * seeds) && never_more_than_one_pair,
           detail);
}

// --- criterion 7: codec and lossless channel --------------------------------
void check_codec() {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> unit(1, 2);
    std::uniform_int_distribution<int> seq(0, 65535);
    std::uniform_int_distribution<std::int64_t> base(0, 0xFFFFFFFFll);
    std::uniform_int_distribution<int> count(0, 20);
    std::uniform_int_distribution<int> delta(0, 255);
    std::uniform_int_distribution<int> value(-32768, 32767);

    bool roundtrip = true;
    for (int i = 0; i < 10000; ++i) {
        Packet p;
        p.unit_id = static_cast<UnitId>(unit(rng));
        p.seq = static_cast<std::uint16_t>(seq(rng));
        p.base_timestamp_ms = static_cast<std::uint32_t>(base(rng));
        const int n = count(rng);
        for (int s = 0; s < n; ++s) {
            p.samples.push_back({static_cast<std::uint8_t>(delta(rng)),
                                 static_cast<std::int16_t>(value(rng))});
        }
        if (decode(encode(p)) != p) roundtrip = false;
    }

    Packet ref;
    ref.unit_id = UnitId::LeftShoe;
    ref.seq = 1234;
    ref.base_timestamp_ms = 987654;
    ref.samples = {{0, 12000}, {20, 11985}, {20, 11950}, {20, 11970}};
    const auto frame = encode(ref);
    bool corruptions_detected = true;
    for (std::size_t i = 0; i < frame.size(); ++i) {
        for (int flip = 1; flip < 256; ++flip) {
            auto corrupted = frame;
            corrupted[i] = static_cast<std::uint8_t>(corrupted[i] ^ flip);
            try {
                (void)decode(corrupted);  // any silent decode is a miss
                corruptions_detected = false;
            } catch (const std::exception&) {
            }
        }
    }

    SensorTrace trace;
    trace.sample_rate_hz = 50.0;
    for (int i = 0; i < 2000; ++i) {
        trace.samples.push_back(
            {i * 20, SensorSource::LeftShoe, 90.0 + (i % 100) * 0.37});
        trace.samples.push_back(
            {i * 20, SensorSource::RightShoe, 160.0 - (i % 53) * 1.13});
    }
    trace = quantize_to_wire(trace);
    auto packets = packetize(trace);
    packets = simulate_channel(packets, 0.0, 0, 1);
    std::vector<Packet> decoded;
    for (const auto& p : packets) decoded.push_back(decode(encode(p)));
    const bool lossless = reassemble(decoded).samples == trace.samples;

    report("codec: 10k round-trips, exhaustive single-byte corruption, "
           "lossless end-to-end",
           roundtrip && corruptions_detected && lossless);
}

// --- criterion 8: simulator invariants --------------------------------------
void check_sim_invariants() {
    std::mt19937_64 rng(5150);
    CourseModel course;
    course.length_m = 60.0;
    course.half_width_m = 3.0;
    course.obstacles.push_back({20.0, 0.5, 0.6});
    course.coins.push_back({30.0, -0.5, 0.4});
    SimParams params;

    static const ActionKind all[] = {
        ActionKind::LeanLeftOn, ActionKind::LeanRightOn, ActionKind::LeanOff,
        ActionKind::Jump,       ActionKind::Push,        ActionKind::CrouchOn,
        ActionKind::CrouchOff,  ActionKind::HeadingLeft, ActionKind::HeadingRight};
    std::uniform_int_distribution<int> count(0, 30);
    std::uniform_int_distribution<std::int64_t> when(0, 10000);
    std::uniform_int_distribution<std::size_t> which(0, std::size(all) - 1);

    bool pass = true;
    for (int run = 0; run < 1000; ++run) {
        std::vector<ActionEvent> events;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) events.push_back({when(rng), all[which(rng)]});
        std::sort(events.begin(), events.end(),
                  [](const ActionEvent& a, const ActionEvent& b) {
                      return a.timestamp_ms < b.timestamp_ms;
                  });

        EpisodeTracker tracker(course);
        RiderState state;
        std::size_t next = 0;
        while (state.t_ms < 10000) {
            bool pushed = false;
            while (next < events.size() &&
                   events[next].timestamp_ms <= state.t_ms) {
                if (events[next].kind == ActionKind::Push) pushed = true;
                state = apply_action(state, events[next], params);
                ++next;
            }
            const double before = state.speed_mps;
            state = step_physics(state, course, params, tracker);
            if (state.speed_mps < 0.0) pass = false;
            if (std::abs(state.lateral_m) > course.half_width_m) pass = false;
            if (state.height_m < 0.0) pass = false;
            if (!pushed && state.speed_mps > before) pass = false;
        }
    }

    // dt-refinement consistency
    std::vector<ActionEvent> train;
    for (int i = 0; i < 50; ++i) train.push_back({i * 400, ActionKind::Push});
    SimParams coarse = params;
    coarse.dt_ms = 10;
    SimParams fine = params;
    fine.dt_ms = 1;
    CourseModel straight;
    straight.length_m = 50.0;
    straight.half_width_m = 3.0;
    const auto a = run_episode(train, straight, coarse, 120000);
    const auto b = run_episode(train, straight, fine, 120000);
    bool dt_ok = a.finish_time_ms && b.finish_time_ms;
    double rel = 1.0;
    if (dt_ok) {
        rel = std::abs(static_cast<double>(*a.finish_time_ms) -
                       static_cast<double>(*b.finish_time_ms)) /
              static_cast<double>(*b.finish_time_ms);
        dt_ok = rel < 0.02;
    }
    pass &= dt_ok;
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "dt 10 ms vs 1 ms finish-time difference %.3f%%", rel * 100.0);
    report("simulator invariants over 1000 event streams + dt refinement", pass,
           detail);
}

}  // namespace

int main() {
    check_ks_statistic();
    check_ks_decisions();
    check_critical_table();
    check_mean_diff();
    check_gesture_oracle();
    check_no_chatter();
    check_codec();
    check_sim_invariants();
    std::printf("%s\n", failures == 0 ? "all criteria passed"
                                      : "some criteria FAILED");
    return failures == 0 ? 0 : 1;
}

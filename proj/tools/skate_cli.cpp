#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skate/eval_stats.hpp"
#include "skate/game_sim.hpp"
#include "skate/gesture_engine.hpp"
#include "skate/sensor_model.hpp"
#include "skate/wire_protocol.hpp"

namespace {

using namespace skate;
namespace fs = std::filesystem;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string config_path;
    ThresholdConfig thresholds;
    SimParams params;
};

void load_config(GlobalOpts& g) {
    if (g.config_path.empty()) {
        return;
    }
    std::ifstream in(g.config_path);
    if (!in) {
        throw std::runtime_error("cannot open config: " + g.config_path);
    }
    const auto j = nlohmann::json::parse(in);
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        auto& c = g.thresholds;
        c.tilt_low_mm = t.value("tilt_low_mm", c.tilt_low_mm);
        c.tilt_high_mm = t.value("tilt_high_mm", c.tilt_high_mm);
        c.tilt_hysteresis_mm = t.value("tilt_hysteresis_mm", c.tilt_hysteresis_mm);
        c.jump_pitch_mm = t.value("jump_pitch_mm", c.jump_pitch_mm);
        c.push_angle_deg = t.value("push_angle_deg", c.push_angle_deg);
        c.crouch_angle_deg = t.value("crouch_angle_deg", c.crouch_angle_deg);
        c.debounce_ms = t.value("debounce_ms", c.debounce_ms);
        c.heading_step_deg = t.value("heading_step_deg", c.heading_step_deg);
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        auto& p = g.params;
        p.push_impulse_mps = s.value("push_impulse_mps", p.push_impulse_mps);
        p.friction_decel_mps2 = s.value("friction_decel_mps2", p.friction_decel_mps2);
        p.crouch_speed_factor = s.value("crouch_speed_factor", p.crouch_speed_factor);
        p.lean_lateral_speed_mps =
            s.value("lean_lateral_speed_mps", p.lean_lateral_speed_mps);
        p.jump_up_speed_mps = s.value("jump_up_speed_mps", p.jump_up_speed_mps);
        p.gravity_mps2 = s.value("gravity_mps2", p.gravity_mps2);
        p.coin_pickup_radius_m =
            s.value("coin_pickup_radius_m", p.coin_pickup_radius_m);
        p.dt_ms = s.value("dt_ms", p.dt_ms);
    }
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write: " + path);
    }
    out << content;
}

// ---- trace ----------------------------------------------------------------

struct TraceGenOpts {
    std::string kind;
    std::string direction = "neutral";
    std::int64_t duration_ms = 1000;
    double rest = 150.0;
    double delta = 60.0;
    int cycles = 3;
    double cadence_hz = 1.0;
    double rest_angle = 160.0;
    double min_angle = 100.0;
    double rate_hz = 50.0;
    double noise_sigma = 0.0;
    std::string out = "trace.csv";
};

int run_trace_gen(const GlobalOpts& g, const TraceGenOpts& o) {
    SensorTrace trace;
    if (o.kind == "lean") {
        LeanDirection dir = o.direction == "left"    ? LeanDirection::Left
                            : o.direction == "right" ? LeanDirection::Right
                                                     : LeanDirection::Neutral;
        trace = gen_lean_trace(dir, o.duration_ms, o.rest, o.delta, o.rate_hz);
    } else if (o.kind == "jump") {
        trace = gen_jump_trace(o.duration_ms, o.rest, o.delta, o.rate_hz);
    } else if (o.kind == "push") {
        trace = gen_push_cycle_trace(o.cycles, o.cadence_hz, o.rest_angle,
                                     o.min_angle, o.rate_hz);
    } else {
        throw std::runtime_error("unknown trace kind: " + o.kind);
    }
    if (o.noise_sigma > 0.0) {
        trace = add_noise(trace, o.noise_sigma, g.seed);
    }
    save_trace_file(trace, out_path(g, o.out));
    std::cout << trace.samples.size() << " samples -> " << o.out << "\n";
    return 0;
}

// ---- pipeline stages -------------------------------------------------------

struct ChannelOpts {
    double loss_rate = 0.0;
    int reorder_window = 0;
};

// Shoe samples travel through the packet path; board samples stay wired.
std::pair<SensorTrace, LinkStats> through_channel(const SensorTrace& trace,
                                                  const ChannelOpts& ch,
                                                  std::uint64_t seed) {
    SensorTrace shoe;
    shoe.sample_rate_hz = trace.sample_rate_hz;
    SensorTrace board;
    board.sample_rate_hz = trace.sample_rate_hz;
    for (const auto& s : trace.samples) {
        if (s.source == SensorSource::LeftShoe ||
            s.source == SensorSource::RightShoe) {
            shoe.samples.push_back(s);
        } else {
            board.samples.push_back(s);
        }
    }
    auto packets = packetize(shoe);
    packets = simulate_channel(packets, ch.loss_rate, ch.reorder_window, seed);
    auto result = reassemble(packets);

    SensorTrace merged;
    merged.sample_rate_hz = trace.sample_rate_hz;
    merged.label = trace.label;
    merged.samples.reserve(board.samples.size() + result.samples.size());
    std::merge(board.samples.begin(), board.samples.end(),
               result.samples.begin(), result.samples.end(),
               std::back_inserter(merged.samples),
               [](const SensorSample& a, const SensorSample& b) {
                   return a.timestamp_ms < b.timestamp_ms;
               });
    return {std::move(merged), result.stats};
}

std::string link_stats_csv(const LinkStats& stats) {
    std::ostringstream out;
    out << "unit,received,duplicates,gaps\n";
    out << "left_shoe," << stats.left.received << ',' << stats.left.duplicates
        << ',' << stats.left.gaps << "\n";
    out << "right_shoe," << stats.right.received << ','
        << stats.right.duplicates << ',' << stats.right.gaps << "\n";
    return out.str();
}

// ---- stats -----------------------------------------------------------------

int run_stats_items(const std::string& survey_path) {
    for (const auto& ds : load_surveys_file(survey_path)) {
        const auto stats = item_stats(ds);
        std::cout << "controller: " << ds.controller_label << " (n="
                  << ds.participants() << ")\n";
        std::cout << std::fixed << std::setprecision(2);
        for (std::size_t q = 0; q < stats.size(); ++q) {
            std::cout << "  q" << q + 1 << "  mean " << stats[q].mean << "  sd "
                      << stats[q].sd << "\n";
        }
        std::cout.unsetf(std::ios::fixed);
    }
    return 0;
}

int run_stats_diff(const GlobalOpts& g, const std::string& survey_path,
                   const std::string& means_path) {
    MeanDiffTable table;
    if (!means_path.empty()) {
        // means CSV: rows `meanA,meanB`, optional header
        std::ifstream in(means_path);
        if (!in) {
            throw std::runtime_error("cannot open means file: " + means_path);
        }
        std::vector<double> a, b;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-')) {
                continue;
            }
            const auto comma = line.find(',');
            a.push_back(std::stod(line.substr(0, comma)));
            b.push_back(std::stod(line.substr(comma + 1)));
        }
        table = mean_diff_from_means(a, b);
    } else {
        const auto datasets = load_surveys_file(survey_path);
        if (datasets.size() != 2) {
            throw std::runtime_error(
                "survey must contain exactly two controllers for diff");
        }
        table = mean_diff_table(datasets[0], datasets[1]);
    }
    print_mean_diff_report(table, std::cout);
    std::ostringstream csv;
    write_mean_diff_csv(table, csv);
    write_text_file(out_path(g, "mean_diff.csv"), csv.str());
    return 0;
}

int run_stats_ks(const std::vector<int>& counts_a,
                 const std::vector<int>& counts_b,
                 const std::string& survey_path, int question) {
    CategoryCounts a, b;
    if (!counts_a.empty()) {
        if (counts_a.size() != 5 || counts_b.size() != 5) {
            throw std::runtime_error("--counts-a/--counts-b need 5 values each");
        }
        std::copy(counts_a.begin(), counts_a.end(), a.counts.begin());
        std::copy(counts_b.begin(), counts_b.end(), b.counts.begin());
    } else {
        const auto datasets = load_surveys_file(survey_path);
        if (datasets.size() != 2) {
            throw std::runtime_error(
                "survey must contain exactly two controllers for ks");
        }
        a = category_counts(datasets[0], static_cast<std::size_t>(question - 1));
        b = category_counts(datasets[1], static_cast<std::size_t>(question - 1));
    }
    const auto result = ks_test(a, b);
    print_ks_report(result, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skateboard controller pipeline and evaluation statistics"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Seed for all randomized stages");
    app.add_option("--out-dir", g.out_dir, "Directory for output files");
    app.add_option("--config", g.config_path,
                   "JSON config with threshold/sim parameter overrides");

    // trace gen | trace validate
    auto* trace_cmd = app.add_subcommand("trace", "Sensor trace tools");
    trace_cmd->require_subcommand(1);
    TraceGenOpts tg;
    auto* trace_gen = trace_cmd->add_subcommand("gen", "Generate a trace CSV");
    trace_gen->add_option("--kind", tg.kind, "lean|jump|push")->required();
    trace_gen->add_option("--direction", tg.direction, "left|right|neutral");
    trace_gen->add_option("--duration-ms", tg.duration_ms);
    trace_gen->add_option("--rest", tg.rest, "Rest distance (mm)");
    trace_gen->add_option("--delta", tg.delta, "Lean/pitch excursion (mm)");
    trace_gen->add_option("--cycles", tg.cycles);
    trace_gen->add_option("--cadence-hz", tg.cadence_hz);
    trace_gen->add_option("--rest-angle", tg.rest_angle);
    trace_gen->add_option("--min-angle", tg.min_angle);
    trace_gen->add_option("--rate-hz", tg.rate_hz);
    trace_gen->add_option("--noise-sigma", tg.noise_sigma);
    trace_gen->add_option("--out", tg.out, "Output file name");

    std::string validate_path;
    auto* trace_validate =
        trace_cmd->add_subcommand("validate", "Check trace invariants");
    trace_validate->add_option("file", validate_path)->required();

    // gestures run
    auto* gestures_cmd = app.add_subcommand("gestures", "Gesture engine");
    auto* gestures_run = gestures_cmd->add_subcommand("run", "Trace -> events");
    std::string gest_trace;
    gestures_run->add_option("--trace", gest_trace)->required();

    // channel simulate
    auto* channel_cmd = app.add_subcommand("channel", "Lossy link simulation");
    auto* channel_sim =
        channel_cmd->add_subcommand("simulate", "Trace -> packets -> trace");
    std::string chan_trace;
    ChannelOpts chan;
    channel_sim->add_option("--trace", chan_trace)->required();
    channel_sim->add_option("--loss", chan.loss_rate)
        ->check(CLI::Range(0.0, 1.0));
    channel_sim->add_option("--reorder", chan.reorder_window)
        ->check(CLI::NonNegativeNumber);

    // sim run
    auto* sim_cmd = app.add_subcommand("sim", "Episode kinematics");
    auto* sim_run = sim_cmd->add_subcommand("run", "Events -> episode report");
    std::string sim_events, sim_course;
    std::int64_t timeout_ms = 120000;
    sim_run->add_option("--events", sim_events)->required();
    sim_run->add_option("--course", sim_course)->required();
    sim_run->add_option("--timeout-ms", timeout_ms);

    // pipeline run
    auto* pipeline_cmd = app.add_subcommand("pipeline", "Full batch pipeline");
    auto* pipeline_run =
        pipeline_cmd->add_subcommand("run", "Trace -> ... -> report");
    std::string pipe_trace, pipe_course;
    bool pipe_channel = false;
    ChannelOpts pipe_chan;
    std::int64_t pipe_timeout_ms = 120000;
    pipeline_run->add_option("--trace", pipe_trace)->required();
    pipeline_run->add_option("--course", pipe_course)->required();
    pipeline_run->add_flag("--channel", pipe_channel,
                           "Route shoe samples through the simulated radio");
    pipeline_run->add_option("--loss", pipe_chan.loss_rate)
        ->check(CLI::Range(0.0, 1.0));
    pipeline_run->add_option("--reorder", pipe_chan.reorder_window)
        ->check(CLI::NonNegativeNumber);
    pipeline_run->add_option("--timeout-ms", pipe_timeout_ms);

    // stats items | diff | ks
    auto* stats_cmd = app.add_subcommand("stats", "Evaluation statistics");
    stats_cmd->require_subcommand(1);
    std::string survey_path, means_path;
    auto* stats_items_cmd =
        stats_cmd->add_subcommand("items", "Per-question mean and SD");
    stats_items_cmd->add_option("--survey", survey_path)->required();
    auto* stats_diff_cmd =
        stats_cmd->add_subcommand("diff", "Mean-difference table");
    stats_diff_cmd->add_option("--survey", survey_path);
    stats_diff_cmd->add_option("--means", means_path,
                               "CSV of meanA,meanB rows instead of raw surveys");
    auto* stats_ks_cmd =
        stats_cmd->add_subcommand("ks", "Kolmogorov-Smirnov test");
    std::vector<int> counts_a, counts_b;
    int ks_question = 1;
    stats_ks_cmd->add_option("--survey", survey_path);
    stats_ks_cmd->add_option("--question", ks_question);
    stats_ks_cmd->add_option("--counts-a", counts_a,
                             "Five category counts, Strongly agree first");
    stats_ks_cmd->add_option("--counts-b", counts_b);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        load_config(g);
        validate_config(g.thresholds);
        validate_params(g.params);

        if (trace_gen->parsed()) {
            return run_trace_gen(g, tg);
        }
        if (trace_validate->parsed()) {
            validate_trace(load_trace_file(validate_path));
            std::cout << "ok\n";
            return 0;
        }
        if (gestures_run->parsed()) {
            const auto trace = load_trace_file(gest_trace);
            const auto events = run_engine(trace, g.thresholds);
            std::ostringstream ev, hid;
            save_events(events, ev);
            save_hid(to_hid(events), hid);
            write_text_file(out_path(g, "events.csv"), ev.str());
            write_text_file(out_path(g, "hid.csv"), hid.str());
            std::cout << events.size() << " events -> events.csv, hid.csv\n";
            return 0;
        }
        if (channel_sim->parsed()) {
            const auto trace = quantize_to_wire(load_trace_file(chan_trace));
            auto [out_trace, stats] = through_channel(trace, chan, g.seed);
            save_trace_file(out_trace, out_path(g, "channel_out.csv"));
            write_text_file(out_path(g, "link_stats.csv"), link_stats_csv(stats));
            std::cout << out_trace.samples.size()
                      << " samples -> channel_out.csv, link_stats.csv\n";
            return 0;
        }
        if (sim_run->parsed()) {
            std::ifstream in(sim_events);
            if (!in) {
                throw std::runtime_error("cannot open events: " + sim_events);
            }
            const auto events = load_events(in);
            const auto course = load_course_file(sim_course);
            const auto report = run_episode(events, course, g.params, timeout_ms);
            const std::string row = report_csv_row(report);
            write_text_file(out_path(g, "report.csv"),
                            "finish_time_ms,coins,collisions,pushes,distance_m\n" +
                                row + "\n");
            std::cout << row << "\n";
            return 0;
        }
        if (pipeline_run->parsed()) {
            std::string stage = "load";
            try {
                auto trace = load_trace_file(pipe_trace);
                const auto course = load_course_file(pipe_course);
                LinkStats stats;
                if (pipe_channel) {
                    stage = "channel";
                    trace = quantize_to_wire(trace);
                    std::tie(trace, stats) = through_channel(trace, pipe_chan, g.seed);
                }
                stage = "gestures";
                const auto events = run_engine(trace, g.thresholds);
                std::ostringstream ev, hid;
                save_events(events, ev);
                save_hid(to_hid(events), hid);
                write_text_file(out_path(g, "events.csv"), ev.str());
                write_text_file(out_path(g, "hid.csv"), hid.str());
                write_text_file(out_path(g, "link_stats.csv"),
                                link_stats_csv(stats));
                stage = "sim";
                const auto report =
                    run_episode(events, course, g.params, pipe_timeout_ms);
                const std::string row = report_csv_row(report);
                write_text_file(
                    out_path(g, "report.csv"),
                    "finish_time_ms,coins,collisions,pushes,distance_m\n" + row +
                        "\n");
                std::cout << row << "\n";
                return 0;
            } catch (const std::exception& e) {
                std::cerr << "pipeline stage '" << stage << "' failed: "
                          << e.what() << "\n";
                return 1;
            }
        }
        if (stats_items_cmd->parsed()) {
            return run_stats_items(survey_path);
        }
        if (stats_diff_cmd->parsed()) {
            return run_stats_diff(g, survey_path, means_path);
        }
        if (stats_ks_cmd->parsed()) {
            return run_stats_ks(counts_a, counts_b, survey_path, ks_question);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

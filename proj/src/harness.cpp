#include "thermocc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "thermocc/bits.hpp"
#include "thermocc/rng.hpp"
#include "thermocc/trace_io.hpp"

namespace thermocc {

BitStream make_payload(const PayloadSource& source, std::size_t nbits, std::uint64_t seed) {
    if (source.kind == PayloadSource::Kind::Hex) return bits_from_hex(source.hex, nbits);
    // Independent stream from the run seed so noise draws stay decoupled.
    return random_bits(splitmix64(seed ^ 0x7A710ADULL), nbits);
}

PipelineRun run_pipeline(const Config& config, std::uint8_t opcode, const BitStream& payload,
                         std::uint64_t seed) {
    Config cfg = config;
    cfg.environment.rng_seed = seed;
    cfg.validate();

    const ChannelParams& ch = cfg.channel;
    const EnvironmentModel& env = cfg.environment;

    PipelineRun run;
    run.tx_bits = build_frame(opcode, payload, cfg.framing.parity, cfg.framing.opcodes);

    // Transmission: optional warm-up, the "10" preamble, then one slot per
    // remaining bit. The warm-up exercises the AC below the detection
    // threshold (diff_D * 0.4 swing) so the receiver ignores it.
    TargetSchedule schedule;
    double start_temp = env.ambient_temp;
    if (cfg.framing.warmup) {
        const double warm_target = env.ambient_temp + 0.4 * ch.diff_D;
        const double up_s = (warm_target - env.ambient_temp) / env.ascent_per_s();
        schedule.append(std::max(up_s, 1.0 / ch.sample_rate), warm_target);
        const double down_s = (warm_target - env.ambient_temp) / -env.descent_per_s();
        schedule.append(std::max(down_s, 1.0 / ch.sample_rate) + ch.slot_T, env.ambient_temp);
    }
    const TargetSchedule preamble = preamble_schedule(ch, env, start_temp);
    schedule.append(preamble);
    const BitStream data_bits(run.tx_bits.begin() + 2, run.tx_bits.end());
    schedule.append(encode_bits(data_bits, ch));
    run.tx_duration_s = schedule.duration_s();

    // The receiver keeps sampling after the transmission so the smoothed
    // trace covers the last slot; hold the final target for one MAF window.
    const double tail_s = static_cast<double>(ch.maf_window_w) / ch.sample_rate;
    schedule.append(tail_s, schedule.segments.back().target_temp);
    run.schedule = schedule;

    run.room = simulate_room(schedule, env, cfg.sensor.sample_rate);
    {
        EnvironmentModel env_seeded = env;
        env_seeded.rng_seed = seed;
        run.sensed = sense(run.room, cfg.sensor, env_seeded);
    }
    run.smoothed = maf_smooth(run.sensed, ch.maf_window_w);

    // True turning point: end of the preamble rise, mapped through the MAF
    // group delay into smoothed-index space.
    double rise_end_s = preamble.segments.front().duration_s;
    if (cfg.framing.warmup) {
        rise_end_s += schedule.segments[0].duration_s + schedule.segments[1].duration_s;
    }
    const std::size_t raw_idx =
        static_cast<std::size_t>(std::llround(rise_end_s * cfg.sensor.sample_rate));
    const std::size_t delay = maf_group_delay(ch.maf_window_w);
    run.genie_anchor = raw_idx > delay ? raw_idx - delay : 0;

    run.events = rx_state_machine(run.smoothed, ch, cfg.framing.opcodes, cfg.framing.parity,
                                  cfg.framing.rx_window);
    return run;
}

namespace {

RunResult evaluate_run(const Config& cfg, std::uint8_t opcode, const PayloadSource& payload_src,
                       std::uint64_t seed) {
    const OpcodeInfo* info = cfg.framing.opcodes.find(opcode);
    if (!info) throw Error("loopback: opcode not in table");
    const BitStream payload = make_payload(payload_src, info->payload_bits, seed);
    const PipelineRun run = run_pipeline(cfg, opcode, payload, seed);

    RunResult res;
    res.seed = seed;
    res.tx_duration_s = run.tx_duration_s;

    // Channel BER over the post-preamble bits, decoded on the true-timing
    // slot grid so sync failures do not mask bit statistics.
    const BitStream tx_data(run.tx_bits.begin() + 2, run.tx_bits.end());
    const auto grid = slot_grid_from_anchor(
        run.genie_anchor,
        std::min(tx_data.size(), slots_available(run.genie_anchor, run.smoothed.size(), cfg.channel)),
        cfg.channel);
    const BitStream rx_data = decode_bits(run.smoothed, grid, cfg.channel, 0);
    res.bits_compared = tx_data.size();
    res.bit_errors = tx_data.size() - rx_data.size();  // undecodable slots count as errors
    for (std::size_t i = 0; i < rx_data.size(); ++i) {
        if (rx_data[i] != tx_data[i]) ++res.bit_errors;
    }

    for (const RxEvent& ev : run.events) {
        if (ev.kind == RxEventKind::FrameAccepted) {
            res.frame_accepted = true;
            res.frame_matches = ev.frame && ev.frame->serialize() == run.tx_bits;
            break;
        }
    }
    return res;
}

}  // namespace

double ExperimentResult::ber() const {
    std::size_t errors = 0;
    std::size_t bits = 0;
    for (const RunResult& r : runs) {
        errors += r.bit_errors;
        bits += r.bits_compared;
    }
    return bits == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(bits);
}

double ExperimentResult::frame_success_rate() const {
    if (runs.empty()) return 0.0;
    std::size_t ok = 0;
    for (const RunResult& r : runs) ok += (r.frame_accepted && r.frame_matches) ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(runs.size());
}

ExperimentResult run_loopback(const ExperimentSpec& spec) {
    if (spec.seeds.empty()) throw Error("loopback: seeds list is empty");
    const OpcodeInfo* info = spec.config.framing.opcodes.find(spec.opcode);
    if (!info) throw Error("loopback: opcode not in table");

    ExperimentResult result;
    result.frame_bits = 2 + 3 + (spec.config.framing.parity ? 1 : 0) + info->payload_bits;
    result.slot_T = spec.config.channel.slot_T;
    result.runs.resize(spec.seeds.size());

    // Exceptions must not escape the parallel region; surface the first one.
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(spec.seeds.size()); ++i) {
        try {
            result.runs[i] = evaluate_run(spec.config, spec.opcode, spec.payload, spec.seeds[i]);
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

void apply_param(Config& config, const std::string& name, double value) {
    if (name == "noise_sigma") {
        config.environment.noise_sigma = value;
    } else if (name == "slot_T") {
        config.channel.slot_T = value;
    } else if (name == "mu") {
        config.channel.mu = value;
    } else if (name == "gamma") {
        config.channel.gamma = value;
        config.sensor.resolution_gamma = value;
    } else if (name == "maf_window_w") {
        config.channel.maf_window_w = static_cast<std::size_t>(std::llround(value));
    } else if (name == "sensor_offset") {
        config.environment.sensor_offset = value;
    } else if (name == "ambient_temp") {
        config.environment.ambient_temp = value;
    } else if (name == "ascent_rate") {
        config.environment.ascent_rate = value;
    } else if (name == "descent_rate") {
        config.environment.descent_rate = value;
    } else if (name == "diff_D") {
        config.channel.temp_H = config.channel.temp_L + value;
        config.channel.diff_D = value;
    } else {
        throw Error("sweep: unknown parameter '" + name + "'");
    }
}

std::vector<SweepPoint> run_sweep(const ExperimentSpec& spec) {
    if (!spec.sweep) throw Error("sweep: no sweep parameter in spec");
    const auto& [name, values] = *spec.sweep;
    if (values.empty()) throw Error("sweep: empty value list");

    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double v : values) {
        ExperimentSpec point_spec = spec;
        point_spec.sweep.reset();
        apply_param(point_spec.config, name, v);
        SweepPoint p;
        p.param = name;
        p.value = v;
        p.result = run_loopback(point_spec);
        points.push_back(std::move(p));
    }
    return points;
}

void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out) {
    out << "param,value,seed,ber,accepted,bph\n";
    char line[160];
    for (const SweepPoint& p : points) {
        for (const RunResult& r : p.result.runs) {
            const double run_ber = r.bits_compared == 0
                                       ? 0.0
                                       : static_cast<double>(r.bit_errors) /
                                             static_cast<double>(r.bits_compared);
            std::snprintf(line, sizeof(line), "%s,%.6g,%llu,%.6f,%d,%.6g\n", p.param.c_str(),
                          p.value, static_cast<unsigned long long>(r.seed), run_ber,
                          (r.frame_accepted && r.frame_matches) ? 1 : 0,
                          p.result.effective_bph());
            out << line;
        }
    }
}

bool PaperReproReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

PaperReproReport run_paper_repro(const std::filesystem::path& out_dir, std::uint64_t seed) {
    const auto t_start = std::chrono::steady_clock::now();
    PaperReproReport report;
    char detail[128];

    Config cfg = default_config();
    ExperimentSpec spec;
    spec.config = cfg;
    spec.opcode = 0b000;  // 128-bit key payload
    spec.payload = PayloadSource::random();
    spec.seeds = {seed};

    const ExperimentResult result = run_loopback(spec);
    const RunResult& run = result.runs.front();

    std::snprintf(detail, sizeof(detail), "frame is %zu bits", result.frame_bits);
    report.checks.push_back({"frame length 134 bits", result.frame_bits == 134, detail});

    std::snprintf(detail, sizeof(detail), "effective rate %.6f bph", result.effective_bph());
    report.checks.push_back({"effective rate 40.0 bph", result.effective_bph() == 40.0, detail});

    const double expect_s = 134.0 * cfg.channel.slot_T;
    std::snprintf(detail, sizeof(detail), "transmission runs %.1f s (target %.0f +/- %.0f)",
                  run.tx_duration_s, expect_s, cfg.channel.slot_T);
    report.checks.push_back({"duration 12060 s within one slot",
                             std::fabs(run.tx_duration_s - expect_s) <= cfg.channel.slot_T,
                             detail});

    std::snprintf(detail, sizeof(detail), "bit errors %zu / %zu, frame %s", run.bit_errors,
                  run.bits_compared,
                  run.frame_accepted ? (run.frame_matches ? "accepted" : "mismatched") : "lost");
    report.checks.push_back(
        {"frame accepted with zero bit errors",
         run.frame_accepted && run.frame_matches && run.bit_errors == 0, detail});

    // Reference outputs for reproducibility checks.
    const OpcodeInfo* info = cfg.framing.opcodes.find(spec.opcode);
    const BitStream payload = make_payload(spec.payload, info->payload_bits, seed);
    const PipelineRun pipeline = run_pipeline(cfg, spec.opcode, payload, seed);
    std::filesystem::create_directories(out_dir);
    export_trace(pipeline.sensed, out_dir / "trace.csv");
    {
        std::ofstream f(out_dir / "result.csv", std::ios::binary);
        if (!f) throw Error("paper-repro: cannot write " + (out_dir / "result.csv").string());
        f << "seed,frame_bits,bph,ber,accepted,tx_duration_s\n";
        char line[160];
        std::snprintf(line, sizeof(line), "%llu,%zu,%.1f,%.6f,%d,%.6f\n",
                      static_cast<unsigned long long>(seed), result.frame_bits,
                      result.effective_bph(), result.ber(),
                      (run.frame_accepted && run.frame_matches) ? 1 : 0, run.tx_duration_s);
        f << line;
    }

    const auto t_end = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(t_end - t_start).count();
    std::snprintf(detail, sizeof(detail), "simulated %.0f s in %.2f s wall", run.tx_duration_s,
                  report.wall_seconds);
    report.checks.push_back({"wall time under 10 s", report.wall_seconds < 10.0, detail});
    return report;
}

}  // namespace thermocc

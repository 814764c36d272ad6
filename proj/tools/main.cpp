#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thermocc/bits.hpp"
#include "thermocc/config.hpp"
#include "thermocc/detector.hpp"
#include "thermocc/harness.hpp"
#include "thermocc/trace_io.hpp"

// Exit codes: 0 success/accepted/clean, 1 no-frame/alarms-found,
// 2 usage error, 3 runtime error.

namespace {

using namespace thermocc;

Config load_or_default(const std::string& path) {
    if (path.empty()) return default_config();
    return load_config(path);
}

void print_warnings(const Config& cfg) {
    for (const std::string& w : cfg.validate()) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
}

std::uint8_t parse_opcode(const std::string& s) {
    if (s.size() == 3 && s.find_first_not_of("01") == std::string::npos) {
        std::uint8_t op = 0;
        for (char c : s) op = static_cast<std::uint8_t>((op << 1) | (c == '1'));
        return op;
    }
    throw Error("opcode must be a 3-bit binary string like 000");
}

std::vector<RxEvent> decode_trace(const Config& cfg, const TemperatureTrace& in) {
    TemperatureTrace smoothed = in;
    if (in.kind != TraceKind::Smoothed) {
        smoothed = maf_smooth(in, cfg.channel.maf_window_w);
    }
    return rx_state_machine(smoothed, cfg.channel, cfg.framing.opcodes, cfg.framing.parity,
                            cfg.framing.rx_window);
}

int cmd_encode(const std::string& config_path, const std::string& opcode_str,
               const std::string& payload_hex, const std::string& out_path, std::uint64_t seed) {
    const Config cfg = load_or_default(config_path);
    print_warnings(cfg);
    const std::uint8_t opcode = parse_opcode(opcode_str);
    const OpcodeInfo* info = cfg.framing.opcodes.find(opcode);
    if (!info) throw Error("opcode not present in the configured table");

    const BitStream payload = payload_hex.empty()
                                  ? make_payload(PayloadSource::random(), info->payload_bits, seed)
                                  : bits_from_hex(payload_hex, info->payload_bits);
    const PipelineRun run = run_pipeline(cfg, opcode, payload, seed);

    export_trace(run.sensed, out_path);
    std::filesystem::path room_path(out_path);
    room_path.replace_extension(".room.csv");
    export_trace(run.room, room_path);

    std::printf("frame bits: %s\n", bit_string(run.tx_bits).c_str());
    std::printf("wrote %s (sensor_quantized, %zu samples) and %s (room_true, %zu samples)\n",
                out_path.c_str(), run.sensed.size(), room_path.c_str(), run.room.size());
    std::printf("transmission: %.1f s, %zu bits, %.1f bph\n", run.tx_duration_s,
                run.tx_bits.size(), 3600.0 / cfg.channel.slot_T);
    return 0;
}

int cmd_decode(const std::string& config_path, const std::string& in_path) {
    const Config cfg = load_or_default(config_path);
    const TemperatureTrace trace = import_trace(std::filesystem::path(in_path));
    const std::vector<RxEvent> events = decode_trace(cfg, trace);

    bool accepted = false;
    for (const RxEvent& ev : events) {
        switch (ev.kind) {
            case RxEventKind::PreambleDetected:
                std::printf("%-18s @%zu\n", to_string(ev.kind), ev.position);
                break;
            case RxEventKind::Bit:
                std::printf("%-18s @%zu bit=%d\n", to_string(ev.kind), ev.position, ev.bit);
                break;
            case RxEventKind::FrameRejected:
                std::printf("%-18s @%zu reason=%s\n", to_string(ev.kind), ev.position,
                            ev.reason ? to_string(*ev.reason) : "?");
                break;
            case RxEventKind::FrameAccepted:
                std::printf("%-18s @%zu\n", to_string(ev.kind), ev.position);
                if (ev.frame) {
                    std::printf("%s\n", frame_hex_dump(*ev.frame, cfg.framing.opcodes).c_str());
                }
                accepted = true;
                break;
        }
    }
    if (!accepted) {
        std::printf("no frame accepted\n");
        return 1;
    }
    return 0;
}

int cmd_loopback(const std::string& config_path, std::uint64_t seed,
                 const std::string& payload_hex, const std::string& opcode_str) {
    ExperimentSpec spec;
    spec.config = load_or_default(config_path);
    print_warnings(spec.config);
    spec.opcode = parse_opcode(opcode_str);
    spec.payload = payload_hex.empty() ? PayloadSource::random() : PayloadSource::from_hex(payload_hex);
    spec.seeds = {seed};

    const ExperimentResult result = run_loopback(spec);
    const RunResult& run = result.runs.front();
    std::printf("seed %llu: %zu bits, %.1f bph, BER %.3f, FRAME %s\n",
                static_cast<unsigned long long>(run.seed), result.frame_bits,
                result.effective_bph(), result.ber(),
                run.frame_accepted ? (run.frame_matches ? "ACCEPTED" : "MISMATCH") : "LOST");
    std::printf("simulated %.1f s of transmission\n", run.tx_duration_s);
    return (run.frame_accepted && run.frame_matches) ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::vector<std::uint64_t>& seeds,
              const std::string& out_path, const std::string& opcode_str) {
    ExperimentSpec spec;
    spec.config = load_or_default(config_path);
    spec.opcode = parse_opcode(opcode_str);
    spec.seeds = seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3, 4, 5} : seeds;
    spec.sweep = {{param, values}};

    const std::vector<SweepPoint> points = run_sweep(spec);
    if (out_path.empty()) {
        write_sweep_csv(points, std::cout);
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error("cannot open " + out_path);
        write_sweep_csv(points, f);
        std::printf("wrote %s (%zu runs)\n", out_path.c_str(),
                    points.size() * spec.seeds.size());
    }
    return 0;
}

int cmd_detect(const std::string& config_path, const std::vector<std::string>& in_paths) {
    const Config cfg = load_or_default(config_path);
    std::vector<TemperatureTrace> traces;
    std::vector<std::string> ids;
    for (const std::string& p : in_paths) {
        traces.push_back(import_trace(std::filesystem::path(p)));
        ids.push_back(std::filesystem::path(p).filename().string());
    }
    std::vector<Alarm> alarms;
    if (traces.size() == 1) {
        alarms = scan_trace(traces[0], cfg.detector, ids[0]);
    } else {
        alarms = scan_multi(traces, cfg.detector, ids);
    }
    for (const Alarm& a : alarms) std::printf("%s\n", alarm_to_json(a).c_str());
    if (alarms.empty()) {
        std::fprintf(stderr, "clean: no covert-channel signature found\n");
        return 0;
    }
    return 1;
}

int cmd_paper_repro(const std::string& out_dir, std::uint64_t seed) {
    const PaperReproReport report = run_paper_repro(out_dir, seed);
    for (const auto& check : report.checks) {
        std::printf("[%s] %-36s %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                    check.detail.c_str());
    }
    std::printf("%s\n", report.all_pass() ? "all checks passed" : "CHECKS FAILED");
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermocc: thermal covert channel simulator, codec and detector"};
    app.require_subcommand(1);

    std::string config_path, out_path, payload_hex, opcode_str = "000", param;
    std::vector<std::string> in_paths;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed = 1;

    auto* enc = app.add_subcommand("encode", "simulate a frame transmission into trace CSVs");
    enc->add_option("--config", config_path, "JSON config file");
    enc->add_option("--opcode", opcode_str, "3-bit opcode, binary");
    enc->add_option("--payload-hex", payload_hex, "payload as hex, MSB first");
    enc->add_option("--out", out_path, "output trace CSV (sensor view)")->required();
    enc->add_option("--seed", seed, "run seed");

    auto* dec = app.add_subcommand("decode", "run the receiver over a trace CSV");
    dec->add_option("--config", config_path, "JSON config file");
    dec->add_option("--in", in_paths, "input trace CSV")->required()->expected(1);

    auto* loop = app.add_subcommand("loopback", "end-to-end simulated transmission");
    loop->add_option("--config", config_path, "JSON config file");
    loop->add_option("--seed", seed, "run seed");
    loop->add_option("--opcode", opcode_str, "3-bit opcode, binary");
    loop->add_option("--payload-hex", payload_hex, "payload as hex (default: seeded random)");

    auto* swp = app.add_subcommand("sweep", "loopback across one parameter");
    swp->add_option("--config", config_path, "JSON config file");
    swp->add_option("--param", param, "parameter name")->required();
    swp->add_option("--values", values, "values to sweep")->required()->delimiter(',');
    swp->add_option("--seeds", seeds, "seeds per point")->delimiter(',');
    swp->add_option("--out", out_path, "CSV output path (default stdout)");
    swp->add_option("--opcode", opcode_str, "3-bit opcode, binary");

    auto* det = app.add_subcommand("detect", "scan traces for covert-channel activity");
    det->add_option("--config", config_path, "JSON config file");
    det->add_option("--in", in_paths, "input trace CSV (repeatable)")->required();

    auto* repro = app.add_subcommand("paper-repro", "run the frozen reference experiment");
    repro->add_option("--out", out_path, "output directory");
    repro->add_option("--seed", seed, "run seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints usage / error text
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (enc->parsed()) return cmd_encode(config_path, opcode_str, payload_hex, out_path, seed);
        if (dec->parsed()) return cmd_decode(config_path, in_paths.front());
        if (loop->parsed()) return cmd_loopback(config_path, seed, payload_hex, opcode_str);
        if (swp->parsed()) return cmd_sweep(config_path, param, values, seeds, out_path, opcode_str);
        if (det->parsed()) return cmd_detect(config_path, in_paths);
        if (repro->parsed()) {
            return cmd_paper_repro(out_path.empty() ? "paper-repro-out" : out_path, seed);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}

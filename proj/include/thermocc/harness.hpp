#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermocc/config.hpp"
#include "thermocc/framing.hpp"
#include "thermocc/types.hpp"

namespace thermocc {

struct PayloadSource {
    enum class Kind { Hex, Random };
    Kind kind = Kind::Random;
    std::string hex;  // used when kind == Hex

    static PayloadSource random() { return {}; }
    static PayloadSource from_hex(std::string h) { return {Kind::Hex, std::move(h)}; }
};

struct ExperimentSpec {
    Config config;
    std::uint8_t opcode = 0;
    PayloadSource payload;
    std::vector<std::uint64_t> seeds{1};
    /// When present: (parameter name, values). Supported names:
    /// noise_sigma, slot_T, mu, gamma, maf_window_w, sensor_offset,
    /// ambient_temp, ascent_rate, descent_rate, diff_D.
    std::optional<std::pair<std::string, std::vector<double>>> sweep;
};

/// Everything one simulated transmission produces; kept around for the CLI
/// and the tests.
struct PipelineRun {
    BitStream tx_bits;          // full wire bits including preamble
    TargetSchedule schedule;    // preamble + data + receive tail hold
    double tx_duration_s = 0.0; // schedule duration without the tail hold
    TemperatureTrace room;
    TemperatureTrace sensed;
    TemperatureTrace smoothed;
    std::vector<RxEvent> events;
    std::size_t genie_anchor = 0;  // smoothed index of the true turning point
};

/// Run the full pipeline once for (config, opcode, payload bits, seed).
PipelineRun run_pipeline(const Config& config, std::uint8_t opcode, const BitStream& payload,
                         std::uint64_t seed);

/// Resolve a payload source to concrete bits for one seed.
BitStream make_payload(const PayloadSource& source, std::size_t nbits, std::uint64_t seed);

struct RunResult {
    std::uint64_t seed = 0;
    std::size_t bit_errors = 0;
    std::size_t bits_compared = 0;
    bool frame_accepted = false;
    bool frame_matches = false;    // accepted frame equals the transmitted one
    double tx_duration_s = 0.0;
};

struct ExperimentResult {
    std::size_t frame_bits = 0;    // wire bits per frame, preamble included
    double slot_T = 0.0;
    std::vector<RunResult> runs;

    double ber() const;
    double frame_success_rate() const;
    /// Line rate: one bit per slot, 3600 / slot_T bits per hour.
    double effective_bph() const { return 3600.0 / slot_T; }
};

ExperimentResult run_loopback(const ExperimentSpec& spec);

struct SweepPoint {
    std::string param;
    double value = 0.0;
    ExperimentResult result;
};

/// Independent loopback runs per (sweep value, seed).
std::vector<SweepPoint> run_sweep(const ExperimentSpec& spec);

/// Columns: param,value,seed,ber,accepted,bph — one row per run.
void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out);

/// Apply a named sweep parameter to a config. Throws Error for unknown names.
void apply_param(Config& config, const std::string& name, double value);

struct PaperReproReport {
    struct Check {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Check> checks;
    double wall_seconds = 0.0;
    bool all_pass() const;
};

/// Run the frozen reference configuration end to end, verify the headline
/// numbers, and write trace.csv / result.csv into out_dir.
PaperReproReport run_paper_repro(const std::filesystem::path& out_dir, std::uint64_t seed = 1);

}  // namespace thermocc

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thermocc/bits.hpp"
#include "thermocc/harness.hpp"
#include "thermocc/trace_io.hpp"

using namespace thermocc;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("reference loopback: 134 bits, 40 bph, zero errors") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.opcode = 0b000;
    spec.seeds = {1};

    const ExperimentResult result = run_loopback(spec);
    CHECK(result.frame_bits == 134);
    CHECK(result.effective_bph() == 40.0);
    CHECK(result.ber() == 0.0);
    CHECK(result.frame_success_rate() == 1.0);

    const RunResult& run = result.runs.front();
    CHECK(run.seed == 1);
    CHECK(run.bits_compared == 132);
    CHECK(run.bit_errors == 0);
    CHECK(run.frame_accepted);
    CHECK(run.frame_matches);
    // About three and a half hours, within one slot of 134 * 90 s.
    CHECK(std::fabs(run.tx_duration_s - 12060.0) <= 90.0);
}

TEST_CASE("slot time 180 s halves the rate") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.config.channel.slot_T = 180.0;
    spec.opcode = 0b011;  // short payload keeps it quick
    spec.seeds = {1};
    const ExperimentResult result = run_loopback(spec);
    CHECK(result.effective_bph() == 20.0);
    CHECK(result.ber() == 0.0);
}

TEST_CASE("hex payloads round the pipeline") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.opcode = 0b100;  // 16-bit payload
    spec.payload = PayloadSource::from_hex("BEEF");
    spec.seeds = {5};
    const ExperimentResult result = run_loopback(spec);
    CHECK(result.ber() == 0.0);
    CHECK(result.frame_success_rate() == 1.0);

    CHECK(make_payload(spec.payload, 16, 5) == bits_from_hex("BEEF", 16));
    CHECK_THROWS_AS(make_payload(PayloadSource::from_hex("BEEF"), 8, 5), Error);
}

TEST_CASE("heavy sensor noise breaks at least one of 20 seeds") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.config.environment.noise_sigma = 1.5;
    spec.opcode = 0b000;
    spec.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) spec.seeds.push_back(s);

    const ExperimentResult result = run_loopback(spec);
    std::size_t with_errors = 0;
    for (const RunResult& r : result.runs) with_errors += r.bit_errors > 0;
    CHECK(with_errors >= 1);
}

TEST_CASE("apply_param reaches every documented knob") {
    Config cfg = default_config();
    apply_param(cfg, "noise_sigma", 0.5);
    CHECK(cfg.environment.noise_sigma == 0.5);
    apply_param(cfg, "slot_T", 120.0);
    CHECK(cfg.channel.slot_T == 120.0);
    apply_param(cfg, "mu", 0.05);
    CHECK(cfg.channel.mu == 0.05);
    apply_param(cfg, "gamma", 0.5);
    CHECK(cfg.channel.gamma == 0.5);
    CHECK(cfg.sensor.resolution_gamma == 0.5);
    apply_param(cfg, "maf_window_w", 100.0);
    CHECK(cfg.channel.maf_window_w == 100);
    apply_param(cfg, "diff_D", 2.0);
    CHECK(cfg.channel.temp_H == 25.0);
    CHECK(cfg.channel.diff_D == 2.0);
    CHECK_THROWS_WITH_AS(apply_param(cfg, "bogus", 1.0), doctest::Contains("bogus"), Error);
}

TEST_CASE("sweep with a single baseline value reproduces run_loopback") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.opcode = 0b011;
    spec.seeds = {1, 2, 3};

    ExperimentSpec swept = spec;
    swept.sweep = {{"noise_sigma", {0.0}}};
    const auto points = run_sweep(swept);
    REQUIRE(points.size() == 1);

    const ExperimentResult direct = run_loopback(spec);
    REQUIRE(points[0].result.runs.size() == direct.runs.size());
    for (std::size_t i = 0; i < direct.runs.size(); ++i) {
        CHECK(points[0].result.runs[i].bit_errors == direct.runs[i].bit_errors);
        CHECK(points[0].result.runs[i].frame_accepted == direct.runs[i].frame_accepted);
    }
}

TEST_CASE("sweep CSV carries one row per run with its seed") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.opcode = 0b011;
    spec.seeds = {4, 9};
    spec.sweep = {{"noise_sigma", {0.0, 0.3}}};

    const auto points = run_sweep(spec);
    std::ostringstream out;
    write_sweep_csv(points, out);
    const std::string csv = out.str();
    CHECK(csv.rfind("param,value,seed,ber,accepted,bph\n", 0) == 0);
    CHECK(csv.find("noise_sigma,0,4,") != std::string::npos);
    CHECK(csv.find("noise_sigma,0.3,9,") != std::string::npos);
    // header + 4 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("sweep requires a parameter and values") {
    ExperimentSpec spec;
    spec.config = default_config();
    CHECK_THROWS_AS(run_sweep(spec), Error);
    spec.sweep = {{"noise_sigma", {}}};
    CHECK_THROWS_AS(run_sweep(spec), Error);
}

TEST_CASE("identical seeds give identical runs, different seeds differ") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.config.environment.noise_sigma = 0.8;
    spec.opcode = 0b000;
    spec.seeds = {7, 7, 8};
    const ExperimentResult result = run_loopback(spec);
    CHECK(result.runs[0].bit_errors == result.runs[1].bit_errors);
    CHECK(result.runs[0].frame_accepted == result.runs[1].frame_accepted);
}

TEST_CASE("paper-repro checks pass and outputs are byte-identical across runs") {
    const auto dir1 = std::filesystem::temp_directory_path() / "thermocc_repro_a";
    const auto dir2 = std::filesystem::temp_directory_path() / "thermocc_repro_b";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);

    const PaperReproReport r1 = run_paper_repro(dir1, 1);
    const PaperReproReport r2 = run_paper_repro(dir2, 1);
    CHECK(r1.all_pass());
    CHECK(r2.all_pass());
    CHECK(slurp(dir1 / "trace.csv") == slurp(dir2 / "trace.csv"));
    CHECK(slurp(dir1 / "result.csv") == slurp(dir2 / "result.csv"));

    // The emitted trace is a valid decoder input.
    const auto trace = import_trace(dir1 / "trace.csv");
    CHECK(trace.kind == TraceKind::SensorQuantized);
    CHECK(trace.size() > 30000);

    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("warmup cycle stays invisible to the receiver") {
    ExperimentSpec spec;
    spec.config = default_config();
    spec.config.framing.warmup = true;
    spec.opcode = 0b011;
    spec.seeds = {3};
    const ExperimentResult result = run_loopback(spec);
    CHECK(result.frame_success_rate() == 1.0);
    CHECK(result.ber() == 0.0);
}

}  // TEST_SUITE

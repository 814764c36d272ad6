#include <doctest.h>

#include <cmath>

#include "thermocc/bits.hpp"
#include "thermocc/config.hpp"
#include "thermocc/framing.hpp"
#include "thermocc/modem.hpp"
#include "thermocc/rng.hpp"

using namespace thermocc;

namespace {

TemperatureTrace smoothed_of(std::vector<double> samples, double fs = 3.3) {
    TemperatureTrace t;
    t.sample_rate = fs;
    t.kind = TraceKind::Smoothed;
    t.samples = std::move(samples);
    return t;
}

// Modem-level loopback on the true-timing grid: bits -> schedule -> room ->
// sensor -> MAF -> trend decode. Ambient sits at temp_L so a leading 0 reads
// flat against prev = 0.
BitStream modem_loopback(const BitStream& bits, const Config& cfg, std::uint64_t seed) {
    TargetSchedule schedule = encode_bits(bits, cfg.channel);
    schedule.append(cfg.channel.maf_window_w / cfg.channel.sample_rate,
                    schedule.segments.back().target_temp);
    EnvironmentModel env = cfg.environment;
    env.rng_seed = seed;
    const auto room = simulate_room(schedule, env, cfg.sensor.sample_rate);
    const auto sensed = sense(room, cfg.sensor, env);
    const auto smooth = maf_smooth(sensed, cfg.channel.maf_window_w);

    // Slot 0 starts at t = 0. The grid helper lays slots one slot after an
    // anchor and applies the group delay; shifting it back lines slot 0 up
    // with the start of the trace.
    std::vector<SlotRange> grid = slot_grid_from_anchor(0, bits.size(), cfg.channel);
    const std::size_t shift =
        cfg.channel.slot_samples() + maf_group_delay(cfg.channel.maf_window_w);
    for (auto& s : grid) {
        s.begin -= shift;
        s.end -= shift;
    }
    return decode_bits(smooth, grid, cfg.channel, 0);
}

}  // namespace

TEST_SUITE("modem") {

TEST_CASE("channel params validation") {
    ChannelParams p;
    CHECK(p.validate().empty());

    ChannelParams swapped = p;
    swapped.temp_H = 22.0;
    CHECK_THROWS_AS(swapped.validate(), Error);

    ChannelParams bad_d = p;
    bad_d.diff_D = 2.0;
    CHECK_THROWS_AS(bad_d.validate(), Error);

    ChannelParams covert = p;
    covert.observable_O = 2.0;  // D = 3 >= O
    CHECK_FALSE(covert.validate().empty());

    ChannelParams fine = p;
    fine.observable_O = 4.0;
    CHECK(fine.validate().empty());
}

TEST_CASE("encode_bits maps 1 to H and 0 to L, one slot each") {
    ChannelParams p;
    const auto sched = encode_bits({1, 0}, p);
    REQUIRE(sched.segments.size() == 2);
    CHECK(sched.segments[0].duration_s == 90.0);
    CHECK(sched.segments[0].target_temp == 26.0);
    CHECK(sched.segments[1].duration_s == 90.0);
    CHECK(sched.segments[1].target_temp == 23.0);

    const auto one = encode_bits({0}, p);
    REQUIRE(one.segments.size() == 1);
    CHECK(one.segments[0].target_temp == 23.0);

    CHECK_THROWS_AS(encode_bits({}, p), Error);
}

TEST_CASE("134 bits at 90 s spans three and a half hours") {
    ChannelParams p;
    const auto sched = encode_bits(random_bits(1, 134), p);
    CHECK(sched.duration_s() == doctest::Approx(12060.0));
    CHECK(sched.duration_s() / 3600.0 == doctest::Approx(3.35));
}

TEST_CASE("maf_smooth follows the inclusive-window mean") {
    const auto t = smoothed_of({24.0, 25.0, 24.0, 25.0});
    const auto s = maf_smooth(t, 2);
    CHECK(s.kind == TraceKind::Smoothed);
    REQUIRE(s.size() == 2);
    CHECK(s.samples[0] == doctest::Approx(24.0 + 1.0 / 3.0).epsilon(1e-12));
    CHECK(s.samples[1] == doctest::Approx(24.0 + 2.0 / 3.0).epsilon(1e-12));

    const auto c = maf_smooth(smoothed_of({25.0, 25.0, 25.0, 25.0}), 2);
    REQUIRE(c.size() == 2);
    CHECK(c.samples[0] == 25.0);
    CHECK(c.samples[1] == 25.0);

    CHECK_THROWS_AS(maf_smooth(smoothed_of({1.0, 2.0}), 2), Error);
}

TEST_CASE("maf_smooth never inflates variance") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::vector<double> x(400);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = gaussian(seed, i);
        const auto in = smoothed_of(x);
        const auto out = maf_smooth(in, 16);

        auto variance = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double a : v) mean += a;
            mean /= v.size();
            double var = 0.0;
            for (double a : v) var += (a - mean) * (a - mean);
            return var / v.size();
        };
        CHECK(variance(out.samples) <= variance(in.samples) + 1e-12);
    }
}

TEST_CASE("maf_smooth is linear") {
    std::vector<double> a(300), b(300);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = gaussian(21, i);
        b[i] = gaussian(22, i);
    }
    const double ca = 1.7, cb = -0.4;
    std::vector<double> mix(300);
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = ca * a[i] + cb * b[i];

    const auto sa = maf_smooth(smoothed_of(a), 24);
    const auto sb = maf_smooth(smoothed_of(b), 24);
    const auto sm = maf_smooth(smoothed_of(mix), 24);
    for (std::size_t i = 0; i < sm.size(); ++i) {
        CHECK(sm.samples[i] ==
              doctest::Approx(ca * sa.samples[i] + cb * sb.samples[i]).epsilon(1e-9));
    }
}

TEST_CASE("classify_trend quarter means against the dead-band") {
    // 16 samples; quarters of 4.
    std::vector<double> rising;
    for (int i = 0; i < 16; ++i) rising.push_back(23.0 + 0.2 * i);
    CHECK(classify_trend(smoothed_of(rising), {0, 16}, 0.01) == Trend::Up);

    std::vector<double> flat(16, 25.0);
    CHECK(classify_trend(smoothed_of(flat), {0, 16}, 0.01) == Trend::Flat);

    std::vector<double> falling;
    for (int i = 0; i < 16; ++i) falling.push_back(26.0 - 0.2 * i);
    CHECK(classify_trend(smoothed_of(falling), {0, 16}, 0.01) == Trend::Down);

    CHECK_THROWS_AS(classify_trend(smoothed_of(flat), {0, 7}, 0.01), Error);
    CHECK_THROWS_AS(classify_trend(smoothed_of(flat), {8, 20}, 0.01), Error);
}

TEST_CASE("trend boundary is strict: delta == -mu stays flat") {
    // Exactly representable dead-band so the boundary is bit-exact.
    const double mu = 0.0078125;  // 2^-7
    const double head = 25.0;
    const double tail_flat = head - mu;
    std::vector<double> s{head, head, head - 0.001, head - 0.002,
                          head - 0.004, head - 0.006, tail_flat, tail_flat};
    CHECK(classify_trend(smoothed_of(s), {0, 8}, mu) == Trend::Flat);

    std::vector<double> s2 = s;
    s2[6] = s2[7] = head - mu - 0.0009765625;  // one step past the band
    CHECK(classify_trend(smoothed_of(s2), {0, 8}, mu) == Trend::Down);

    std::vector<double> s3 = s;
    s3[6] = s3[7] = head - mu / 2;
    CHECK(classify_trend(smoothed_of(s3), {0, 8}, mu) == Trend::Flat);
}

TEST_CASE("decode follows the receiver rule table") {
    ChannelParams p;
    p.mu = 0.01;

    // Synthetic slots: 8 samples each, trends Up / Flat / Down.
    auto slot_samples = [](Trend t) {
        std::vector<double> v;
        for (int i = 0; i < 8; ++i) {
            switch (t) {
                case Trend::Up: v.push_back(23.0 + 0.1 * i); break;
                case Trend::Flat: v.push_back(24.0); break;
                case Trend::Down: v.push_back(26.0 - 0.1 * i); break;
            }
        }
        return v;
    };

    auto decode_one = [&](Trend t, int prev) {
        const auto trace = smoothed_of(slot_samples(t));
        const SlotRange slot{0, 8};
        return decode_bits(trace, std::span<const SlotRange>(&slot, 1), p, prev).front();
    };

    // prev = 0
    CHECK(decode_one(Trend::Up, 0) == 1);
    CHECK(decode_one(Trend::Flat, 0) == 0);
    CHECK(decode_one(Trend::Down, 0) == 0);
    // prev = 1
    CHECK(decode_one(Trend::Up, 1) == 1);
    CHECK(decode_one(Trend::Flat, 1) == 1);
    CHECK(decode_one(Trend::Down, 1) == 0);

    // Chained: prev=0, trends Up, Flat, Down -> 1, 1, 0.
    std::vector<double> samples;
    for (Trend t : {Trend::Up, Trend::Flat, Trend::Down}) {
        const auto s = slot_samples(t);
        samples.insert(samples.end(), s.begin(), s.end());
    }
    const std::vector<SlotRange> grid{{0, 8}, {8, 16}, {16, 24}};
    const auto bits = decode_bits(smoothed_of(samples), grid, p, 0);
    CHECK(bits == BitStream{1, 1, 0});
}

TEST_CASE("decode aborts with slot position on a bad grid") {
    const auto trace = smoothed_of(std::vector<double>(32, 25.0));
    const std::vector<SlotRange> grid{{0, 16}, {16, 40}};  // second slot overruns
    ChannelParams p;
    CHECK_THROWS_WITH_AS(decode_bits(trace, grid, p, 0), doctest::Contains("slot 1"), Error);
}

TEST_CASE("slot count is conserved and decoding is shift-invariant") {
    Config cfg = default_config();
    const BitStream bits = random_bits(5, 16);
    TargetSchedule schedule = encode_bits(bits, cfg.channel);
    schedule.append(60.0, schedule.segments.back().target_temp);
    const auto room = simulate_room(schedule, cfg.environment, 3.3);
    const auto smooth = maf_smooth(sense(room, cfg.sensor, cfg.environment), 198);

    std::vector<SlotRange> grid = slot_grid_from_anchor(0, 12, cfg.channel);
    const std::size_t shift = cfg.channel.slot_samples() + maf_group_delay(198);
    for (auto& s : grid) {
        s.begin -= shift;
        s.end -= shift;
    }
    const auto decoded = decode_bits(smooth, grid, cfg.channel, 0);
    CHECK(decoded.size() == grid.size());

    TemperatureTrace shifted = smooth;
    for (double& v : shifted.samples) v += 5.5;
    const auto decoded2 = decode_bits(shifted, grid, cfg.channel, 0);
    CHECK(decoded == decoded2);
}

TEST_CASE("modem round-trip is exact on the ideal channel") {
    Config cfg = default_config();

    // Exhaustive for lengths up to 8.
    for (std::size_t len = 1; len <= 8; ++len) {
        const std::size_t limit = std::size_t{1} << len;
        for (std::size_t v = 0; v < limit; ++v) {
            BitStream bits(len);
            for (std::size_t k = 0; k < len; ++k) bits[k] = (v >> (len - 1 - k)) & 1;
            CHECK(modem_loopback(bits, cfg, 1) == bits);
        }
    }
    // Randomized for 9 and 10.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t len = 9 + seed % 2;
        const BitStream bits = random_bits(seed, len);
        CHECK(modem_loopback(bits, cfg, seed) == bits);
    }
}

TEST_CASE("bit rate identity") {
    ChannelParams p;
    CHECK(3600.0 / p.slot_T == 40.0);
    p.slot_T = 180.0;
    CHECK(3600.0 / p.slot_T == 20.0);
}

}  // TEST_SUITE

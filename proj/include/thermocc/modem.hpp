#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermocc/thermal_env.hpp"
#include "thermocc/types.hpp"

namespace thermocc {

/// Physical-layer parameters of the thermal channel.
struct ChannelParams {
    double slot_T = 90.0;   // seconds per bit
    double temp_H = 26.0;   // deg C, target for a 1
    double temp_L = 23.0;   // deg C, target for a 0
    double diff_D = 3.0;    // |temp_H - temp_L|
    std::optional<double> observable_O;  // human-observability bound, deg C over slot_T
    double gamma = 1.0;     // receiver quantization step
    double mu = 0.01;       // deg C, dead-band below which a trend is flat
    std::size_t maf_window_w = 198;  // moving-average window parameter, in samples
    double sample_rate = 3.3;        // Hz

    /// Throws Error on invalid parameters; returns covertness warnings
    /// (e.g. diff_D >= observable_O).
    std::vector<std::string> validate() const;

    std::size_t slot_samples() const;
};

enum class Trend { Up, Flat, Down };
const char* to_string(Trend t);

/// Half-open index range [begin, end) into a smoothed trace.
struct SlotRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

/// Line encoding: one schedule segment per bit, slot_T long; 1 targets temp_H
/// and 0 targets temp_L.
TargetSchedule encode_bits(const BitStream& bits, const ChannelParams& params);

/// Moving-average filter over an inclusive window of w+1 samples; output has
/// input length minus w samples (requires length > w).
TemperatureTrace maf_smooth(const TemperatureTrace& trace, std::size_t w);

/// The smoothed sample at index i averages raw samples [i, i+w], so raw index
/// j maps to smoothed index j - w/2 (group delay of the symmetric window).
inline std::size_t maf_group_delay(std::size_t w) { return w / 2; }

/// Per-slot trend: mean of the last quarter minus mean of the first quarter,
/// compared against the dead-band mu with strict inequalities (ties are
/// Flat). The slot must cover at least 8 smoothed samples.
Trend classify_trend(const TemperatureTrace& smoothed, SlotRange slot, double mu);

/// Observation-based decoding: Up -> 1, Down -> 0, Flat -> previous bit.
/// initial_prev_bit is supplied by the framing layer (the last preamble bit).
BitStream decode_bits(const TemperatureTrace& smoothed, std::span<const SlotRange> slot_grid,
                      const ChannelParams& params, int initial_prev_bit);

/// Slot grid laid out after a preamble anchor: slot k spans
/// [anchor + (k+1)*slot, anchor + (k+2)*slot) in smoothed-trace indices.
/// Per-slot rounding, no cumulative drift.
std::vector<SlotRange> slot_grid_from_anchor(std::size_t anchor, std::size_t count,
                                             const ChannelParams& params);

/// Largest slot count whose grid fits inside a trace of `size` samples.
std::size_t slots_available(std::size_t anchor, std::size_t size, const ChannelParams& params);

}  // namespace thermocc

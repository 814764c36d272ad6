#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "thermocc/types.hpp"

namespace thermocc {

/// Countermeasure tuning. Defaults were calibrated once against the seeded
/// quiet/transmission suites and then frozen.
struct DetectorConfig {
    double quiet_start_s = 0.0;      // time of day, seconds
    double quiet_end_s = 86400.0;    // may wrap past midnight when end < start
    int min_cycles = 4;
    double period_min_s = 30.0;
    double period_max_s = 600.0;
    double amplitude_floor = 0.5;    // deg C
    double alarm_threshold = 0.6;    // autocorrelation score in [0, 1]
    double detrend_window_factor = 4.0;  // baseline window = factor * period_max_s

    void validate() const;
};

struct Alarm {
    std::string trace_id;
    std::size_t onset_index = 0;   // first sample where the oscillation clears the floor
    double period_s = 0.0;
    double amplitude = 0.0;        // deg C, half peak-to-peak
    double score = 0.0;            // peak normalized autocorrelation, clamped to [0, 1]
    bool boosted = false;          // raised by cross-room period agreement
};

/// Scan one trace for periodic heating/cooling inside the quiet window:
/// detrend against a long moving-average baseline, take the peak normalized
/// autocorrelation over the period band, and alarm when the score clears the
/// threshold with enough amplitude and repetitions.
std::vector<Alarm> scan_trace(const TemperatureTrace& trace, const DetectorConfig& cfg,
                              const std::string& trace_id = "trace");

/// Multi-room scan: per-room alarms whose periods agree within 10% across
/// rooms get a score boost. Traces must overlap in time. Sorted by score.
std::vector<Alarm> scan_multi(std::span<const TemperatureTrace> traces, const DetectorConfig& cfg,
                              std::span<const std::string> trace_ids = {});

std::string alarm_to_json(const Alarm& alarm);

}  // namespace thermocc

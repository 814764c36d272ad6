#pragma once

#include <cstdint>
#include <vector>

#include "thermocc/types.hpp"

namespace thermocc {

/// Room thermal response and receiver imperfections. Rates are in deg C per
/// minute as reported by a step-response fit; ascent must be positive and
/// descent negative.
struct EnvironmentModel {
    double ascent_rate = 1.23;    // deg C / min, > 0
    double descent_rate = -1.24;  // deg C / min, < 0
    double ambient_temp = 23.0;   // deg C, room temperature before transmission
    double sensor_offset = 4.0;   // deg C, chassis runs warmer than the room
    double noise_sigma = 0.0;     // deg C, additive Gaussian before quantization
    std::uint64_t rng_seed = 1;

    void validate() const;  // throws Error
    double ascent_per_s() const { return ascent_rate / 60.0; }
    double descent_per_s() const { return descent_rate / 60.0; }
};

/// The host's thermal sensor: readings quantize to multiples of
/// resolution_gamma at the given polling rate.
struct SensorModel {
    double resolution_gamma = 1.0;  // deg C, > 0
    double sample_rate = 3.3;       // Hz, > 0

    void validate() const;
};

struct ScheduleSegment {
    double duration_s = 0.0;
    double target_temp = 0.0;
};

/// Transmitter output: a sequence of target temperatures held for fixed
/// durations. The air conditioner only ever approaches the active target.
struct TargetSchedule {
    std::vector<ScheduleSegment> segments;

    double duration_s() const;
    void validate() const;  // non-empty, all durations > 0
    void append(const TargetSchedule& other);
    void append(double duration_s, double target_temp);
};

/// Simulate the room: temperature moves toward the active segment's target at
/// the ascent/descent rate and clamps exactly at the target. The trace starts
/// at env.ambient_temp and is continuous across segment boundaries.
TemperatureTrace simulate_room(const TargetSchedule& schedule, const EnvironmentModel& env,
                               double sample_rate);

/// Floor quantization to the sensor grid.
double quantize_floor(double x, double gamma);

/// Apply the sensor model to a room trace: resample to the sensor rate
/// (nearest room sample; upsampling is rejected), add the chassis offset and
/// seeded Gaussian noise, then quantize.
TemperatureTrace sense(const TemperatureTrace& room, const SensorModel& sensor,
                       const EnvironmentModel& env);

}  // namespace thermocc

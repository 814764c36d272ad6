#include "thermocc/thermal_env.hpp"

#include <cmath>

#include "thermocc/kernels.hpp"

namespace thermocc {

void EnvironmentModel::validate() const {
    if (!(ascent_rate > 0.0)) throw Error("environment.ascent_rate must be > 0");
    if (!(descent_rate < 0.0)) throw Error("environment.descent_rate must be < 0");
    if (!(noise_sigma >= 0.0)) throw Error("environment.noise_sigma must be >= 0");
}

void SensorModel::validate() const {
    if (!(resolution_gamma > 0.0)) throw Error("sensor.resolution_gamma must be > 0");
    if (!(sample_rate > 0.0)) throw Error("sensor.sample_rate must be > 0");
}

double TargetSchedule::duration_s() const {
    double total = 0.0;
    for (const auto& seg : segments) total += seg.duration_s;
    return total;
}

void TargetSchedule::validate() const {
    if (segments.empty()) throw Error("schedule is empty");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].duration_s > 0.0)) {
            throw Error("schedule segment " + std::to_string(i) + " has non-positive duration");
        }
    }
}

void TargetSchedule::append(const TargetSchedule& other) {
    segments.insert(segments.end(), other.segments.begin(), other.segments.end());
}

void TargetSchedule::append(double duration_s, double target_temp) {
    segments.push_back({duration_s, target_temp});
}

TemperatureTrace simulate_room(const TargetSchedule& schedule, const EnvironmentModel& env,
                               double sample_rate) {
    schedule.validate();
    env.validate();
    if (!(sample_rate > 0.0)) throw Error("simulate_room: sample_rate must be > 0");

    const double dt = 1.0 / sample_rate;
    const double total_s = schedule.duration_s();
    const std::size_t n = static_cast<std::size_t>(std::floor(total_s * sample_rate + 1e-9)) + 1;
    const double up = env.ascent_per_s();
    const double down = env.descent_per_s();

    // Segment start temperatures chain sequentially; each is the closed-form
    // end temperature of the previous segment.
    std::vector<kernels::SlewSegment> segs;
    segs.reserve(schedule.segments.size());
    double t_start = 0.0;
    double temp = env.ambient_temp;
    for (const auto& seg : schedule.segments) {
        kernels::SlewSegment s;
        s.t_start_s = t_start;
        s.start_temp = temp;
        s.target = seg.target_temp;
        segs.push_back(s);

        const double t_end = t_start + seg.duration_s;
        if (temp < seg.target_temp) {
            temp = std::min(seg.target_temp, temp + up * seg.duration_s);
        } else if (temp > seg.target_temp) {
            temp = std::max(seg.target_temp, temp + down * seg.duration_s);
        }
        t_start = t_end;
    }

    // Sample i belongs to the segment whose half-open time span contains
    // i*dt; the final segment also owns the trailing endpoint.
    std::size_t idx = 0;
    double boundary = 0.0;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        boundary += schedule.segments[s].duration_s;
        segs[s].first = idx;
        if (s + 1 == segs.size()) {
            segs[s].end = n;
        } else {
            while (idx < n && static_cast<double>(idx) * dt < boundary - 1e-12) ++idx;
            segs[s].end = idx;
        }
        idx = segs[s].end;
    }

    TemperatureTrace trace;
    trace.sample_rate = sample_rate;
    trace.t0 = 0.0;
    trace.kind = TraceKind::RoomTrue;
    trace.samples = kernels::slew_fill(segs, up, down, dt, n);
    return trace;
}

double quantize_floor(double x, double gamma) {
    return std::floor(x / gamma) * gamma;
}

TemperatureTrace sense(const TemperatureTrace& room, const SensorModel& sensor,
                       const EnvironmentModel& env) {
    sensor.validate();
    env.validate();
    if (room.kind != TraceKind::RoomTrue) throw Error("sense: input trace must be room_true");
    if (room.empty()) throw Error("sense: empty room trace");
    if (sensor.sample_rate > room.sample_rate * (1.0 + 1e-9)) {
        throw Error("sense: sensor rate exceeds room trace rate; upsampling not supported");
    }

    const double span_s = room.duration_s();
    const std::size_t n_out =
        static_cast<std::size_t>(std::floor(span_s * sensor.sample_rate + 1e-9)) + 1;

    kernels::SenseParams p;
    p.offset = env.sensor_offset;
    p.gamma = sensor.resolution_gamma;
    p.sigma = env.noise_sigma;
    p.seed = env.rng_seed;
    p.rate_in = room.sample_rate;
    p.rate_out = sensor.sample_rate;

    TemperatureTrace out;
    out.sample_rate = sensor.sample_rate;
    out.t0 = room.t0;
    out.kind = TraceKind::SensorQuantized;
    out.samples = kernels::sense_transform(room.samples, p, n_out);
    return out;
}

}  // namespace thermocc

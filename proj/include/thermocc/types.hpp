#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thermocc {

/// Runtime error for rejected inputs (bad schedules, malformed files, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stage of the receive pipeline a trace belongs to.
enum class TraceKind {
    RoomTrue,         // simulated room temperature
    SensorQuantized,  // what the host's thermal sensor reports
    Smoothed          // after the moving-average filter
};

const char* to_string(TraceKind kind);
std::optional<TraceKind> trace_kind_from_string(std::string_view s);

/// Uniformly sampled temperature series. The sample index is authoritative;
/// timestamps are derived as t0 + i / sample_rate.
struct TemperatureTrace {
    double sample_rate = 0.0;  // Hz
    double t0 = 0.0;           // seconds
    TraceKind kind = TraceKind::RoomTrue;
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
    double duration_s() const {
        return samples.empty() ? 0.0 : static_cast<double>(samples.size() - 1) / sample_rate;
    }
};

/// Bits are stored one per byte, values 0 or 1, transmission order.
using BitStream = std::vector<std::uint8_t>;

}  // namespace thermocc

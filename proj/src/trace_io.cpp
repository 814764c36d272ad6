#include "thermocc/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace thermocc {

const char* to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::RoomTrue: return "room_true";
        case TraceKind::SensorQuantized: return "sensor_quantized";
        case TraceKind::Smoothed: return "smoothed";
    }
    return "unknown";
}

std::optional<TraceKind> trace_kind_from_string(std::string_view s) {
    if (s == "room_true") return TraceKind::RoomTrue;
    if (s == "sensor_quantized") return TraceKind::SensorQuantized;
    if (s == "smoothed") return TraceKind::Smoothed;
    return std::nullopt;
}

static const char* kHeader = "t_seconds,temp_c,kind";

void export_trace(const TemperatureTrace& trace, std::ostream& out) {
    if (trace.empty()) throw Error("export_trace: empty trace");
    if (!(trace.sample_rate > 0.0)) throw Error("export_trace: sample rate must be > 0");
    out << kHeader << '\n';
    char line[96];
    const char* kind = to_string(trace.kind);
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        // 6 decimal places: exact for gamma-quantized values and enough for
        // smoothed ones.
        std::snprintf(line, sizeof(line), "%.6f,%.6f,%s\n", trace.time_at(i), trace.samples[i],
                      kind);
        out << line;
    }
    if (!out) throw Error("export_trace: write failed");
}

void export_trace(const TemperatureTrace& trace, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!f) throw Error("export_trace: cannot open " + path.string());
    export_trace(trace, f);
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw Error("trace parse error at line " + std::to_string(line_no) + ": " + what);
}

double parse_number(std::string_view field, std::size_t line_no, const char* name) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        parse_fail(line_no, std::string("non-numeric ") + name + " '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

TemperatureTrace import_trace(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw Error("trace parse error at line 1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) parse_fail(1, "malformed header, expected '" + std::string(kHeader) + "'");

    TemperatureTrace trace;
    std::vector<double> times;
    bool kind_set = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::size_t c1 = line.find(',');
        const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            parse_fail(line_no, "expected 3 comma-separated fields");
        }
        const std::string_view t_field(line.data(), c1);
        const std::string_view v_field(line.data() + c1 + 1, c2 - c1 - 1);
        const std::string_view k_field(line.data() + c2 + 1, line.size() - c2 - 1);

        const double t = parse_number(t_field, line_no, "t_seconds");
        const double v = parse_number(v_field, line_no, "temp_c");
        const auto kind = trace_kind_from_string(k_field);
        if (!kind) parse_fail(line_no, "unknown kind '" + std::string(k_field) + "'");
        if (!kind_set) {
            trace.kind = *kind;
            kind_set = true;
        } else if (*kind != trace.kind) {
            parse_fail(line_no, "mixed trace kinds in one file");
        }
        if (!times.empty() && !(t > times.back())) {
            parse_fail(line_no, "non-monotonic time");
        }
        times.push_back(t);
        trace.samples.push_back(v);
    }
    if (trace.samples.empty()) throw Error("trace parse error: empty trace (header only)");

    trace.t0 = times.front();
    if (times.size() == 1) {
        trace.sample_rate = 1.0;  // a single sample carries no rate; pick a neutral one
    } else {
        // Deriving the rate from the full span averages out per-row rounding.
        trace.sample_rate =
            static_cast<double>(times.size() - 1) / (times.back() - times.front());
    }
    return trace;
}

TemperatureTrace import_trace(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("import_trace: cannot open " + path.string());
    return import_trace(f);
}

}  // namespace thermocc

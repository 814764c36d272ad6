#include "thermocc/modem.hpp"

#include <cmath>

#include "thermocc/kernels.hpp"

namespace thermocc {

const char* to_string(Trend t) {
    switch (t) {
        case Trend::Up: return "up";
        case Trend::Flat: return "flat";
        case Trend::Down: return "down";
    }
    return "unknown";
}

std::vector<std::string> ChannelParams::validate() const {
    if (!(slot_T > 0.0)) throw Error("channel.slot_T must be > 0");
    if (!(temp_H > temp_L)) throw Error("channel.temp_H must be > temp_L");
    if (std::fabs(diff_D - (temp_H - temp_L)) > 1e-9) {
        throw Error("channel.diff_D must equal temp_H - temp_L");
    }
    if (!(mu > 0.0)) throw Error("channel.mu must be > 0");
    if (!(gamma > 0.0)) throw Error("channel.gamma must be > 0");
    if (maf_window_w < 1) throw Error("channel.maf_window_w must be >= 1");
    if (!(sample_rate > 0.0)) throw Error("channel.sample_rate must be > 0");

    std::vector<std::string> warnings;
    if (observable_O && diff_D >= *observable_O) {
        warnings.push_back("diff_D >= observable_O: temperature swing may be noticeable");
    }
    return warnings;
}

std::size_t ChannelParams::slot_samples() const {
    return static_cast<std::size_t>(std::llround(slot_T * sample_rate));
}

TargetSchedule encode_bits(const BitStream& bits, const ChannelParams& params) {
    params.validate();
    if (bits.empty()) throw Error("encode_bits: empty bit stream");
    TargetSchedule schedule;
    schedule.segments.reserve(bits.size());
    for (std::uint8_t b : bits) {
        schedule.append(params.slot_T, (b & 1) ? params.temp_H : params.temp_L);
    }
    return schedule;
}

TemperatureTrace maf_smooth(const TemperatureTrace& trace, std::size_t w) {
    if (trace.size() <= w) {
        throw Error("maf_smooth: trace length " + std::to_string(trace.size()) +
                    " must exceed window " + std::to_string(w));
    }
    TemperatureTrace out;
    out.sample_rate = trace.sample_rate;
    out.t0 = trace.t0;
    out.kind = TraceKind::Smoothed;
    out.samples = kernels::moving_average(trace.samples, w);
    return out;
}

namespace {

double range_mean(const std::vector<double>& s, std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += s[i];
    return sum / static_cast<double>(end - begin);
}

}  // namespace

Trend classify_trend(const TemperatureTrace& smoothed, SlotRange slot, double mu) {
    if (slot.end > smoothed.size() || slot.begin >= slot.end) {
        throw Error("classify_trend: slot out of range");
    }
    const std::size_t len = slot.size();
    if (len < 8) throw Error("classify_trend: slot covers fewer than 8 samples");

    const std::size_t quarter = len / 4;
    const double head = range_mean(smoothed.samples, slot.begin, slot.begin + quarter);
    const double tail = range_mean(smoothed.samples, slot.end - quarter, slot.end);
    const double delta = tail - head;
    if (delta > mu) return Trend::Up;
    if (delta < -mu) return Trend::Down;
    return Trend::Flat;
}

BitStream decode_bits(const TemperatureTrace& smoothed, std::span<const SlotRange> slot_grid,
                      const ChannelParams& params, int initial_prev_bit) {
    BitStream bits;
    bits.reserve(slot_grid.size());
    std::uint8_t prev = initial_prev_bit ? 1 : 0;
    for (std::size_t k = 0; k < slot_grid.size(); ++k) {
        Trend trend;
        try {
            trend = classify_trend(smoothed, slot_grid[k], params.mu);
        } catch (const Error& e) {
            throw Error("decode_bits: slot " + std::to_string(k) + ": " + e.what());
        }
        std::uint8_t bit = prev;
        if (trend == Trend::Up) bit = 1;
        else if (trend == Trend::Down) bit = 0;
        bits.push_back(bit);
        prev = bit;
    }
    return bits;
}

std::vector<SlotRange> slot_grid_from_anchor(std::size_t anchor, std::size_t count,
                                             const ChannelParams& params) {
    const double span = params.slot_T * params.sample_rate;
    // A smoothed sample at index i averages raw samples [i, i+w]. Trimming
    // w/2 from each side of the centered slot keeps every window used for
    // the trend fully inside the slot, so neighbouring slots cannot leak in.
    std::size_t trim = maf_group_delay(params.maf_window_w);
    const auto span_n = static_cast<std::size_t>(std::llround(span));
    if (span_n > 8 && trim > (span_n - 8) / 2) trim = (span_n - 8) / 2;
    std::vector<SlotRange> grid;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        SlotRange slot;
        slot.begin = anchor + trim +
                     static_cast<std::size_t>(std::llround(span * static_cast<double>(k + 1)));
        const std::size_t raw_end =
            anchor + static_cast<std::size_t>(std::llround(span * static_cast<double>(k + 2)));
        slot.end = raw_end > trim ? raw_end - trim : slot.begin;
        grid.push_back(slot);
    }
    return grid;
}

std::size_t slots_available(std::size_t anchor, std::size_t size, const ChannelParams& params) {
    const double span = params.slot_T * params.sample_rate;
    std::size_t count = 0;
    while (true) {
        const std::size_t end =
            anchor + static_cast<std::size_t>(std::llround(span * static_cast<double>(count + 2)));
        if (end > size) break;
        ++count;
    }
    return count;
}

}  // namespace thermocc

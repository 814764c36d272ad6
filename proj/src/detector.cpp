#include "thermocc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>
#include <span>

#include "thermocc/kernels.hpp"

namespace thermocc {

void DetectorConfig::validate() const {
    if (!(period_min_s < period_max_s)) throw Error("detector.period_band: min must be < max");
    if (!(period_min_s > 0.0)) throw Error("detector.period_band: min must be > 0");
    if (!(amplitude_floor > 0.0)) throw Error("detector.amplitude_floor must be > 0");
    if (min_cycles < 2) throw Error("detector.min_cycles must be >= 2");
    if (!(alarm_threshold >= 0.0 && alarm_threshold <= 1.0)) {
        throw Error("detector.alarm_threshold must be in [0, 1]");
    }
    if (!(detrend_window_factor > 1.0)) throw Error("detector.detrend_window_factor must be > 1");
}

namespace {

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

double time_of_day(double t) {
    double m = std::fmod(t, 86400.0);
    if (m < 0.0) m += 86400.0;
    return m;
}

bool in_quiet_window(double tod, const DetectorConfig& cfg) {
    if (cfg.quiet_start_s <= cfg.quiet_end_s) {
        return tod >= cfg.quiet_start_s && tod < cfg.quiet_end_s;
    }
    // Window wraps past midnight.
    return tod >= cfg.quiet_start_s || tod < cfg.quiet_end_s;
}

std::vector<IndexRange> quiet_runs(const TemperatureTrace& trace, const DetectorConfig& cfg) {
    std::vector<IndexRange> runs;
    bool open = false;
    IndexRange cur;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const bool in = in_quiet_window(time_of_day(trace.time_at(i)), cfg);
        if (in && !open) {
            cur.begin = i;
            open = true;
        } else if (!in && open) {
            cur.end = i;
            runs.push_back(cur);
            open = false;
        }
    }
    if (open) {
        cur.end = trace.size();
        runs.push_back(cur);
    }
    return runs;
}

/// Sliding half peak-to-peak over a window of `win` samples (monotonic
/// deques, O(n)). out[i] covers x[i .. i+win-1].
std::vector<double> sliding_half_range(std::span<const double> x, std::size_t win) {
    if (win < 1 || x.size() < win) return {};
    const std::size_t n_out = x.size() - win + 1;
    std::vector<double> out(n_out);
    std::deque<std::size_t> maxq, minq;
    for (std::size_t i = 0; i < x.size(); ++i) {
        while (!maxq.empty() && x[maxq.back()] <= x[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && x[minq.back()] >= x[i]) minq.pop_back();
        minq.push_back(i);
        if (i + 1 >= win) {
            const std::size_t lo = i + 1 - win;
            while (maxq.front() < lo) maxq.pop_front();
            while (minq.front() < lo) minq.pop_front();
            out[lo] = 0.5 * (x[maxq.front()] - x[minq.front()]);
        }
    }
    return out;
}

std::optional<Alarm> scan_run(const TemperatureTrace& trace, IndexRange run,
                              const DetectorConfig& cfg, const std::string& trace_id) {
    const double fs = trace.sample_rate;
    const auto lag_min = static_cast<std::size_t>(std::llround(cfg.period_min_s * fs));
    const auto lag_max = static_cast<std::size_t>(std::llround(cfg.period_max_s * fs));
    const std::size_t n = run.size();
    if (lag_min < 1 || n < 2 * lag_max) return std::nullopt;

    std::span<const double> x(trace.samples.data() + run.begin, n);

    // Detrend against a baseline far slower than any candidate period.
    std::size_t base_w =
        static_cast<std::size_t>(std::llround(cfg.detrend_window_factor * cfg.period_max_s * fs));
    if (base_w >= n) base_w = n - 1;
    std::vector<double> detrended(n);
    if (base_w >= 1) {
        const std::vector<double> baseline = kernels::moving_average(x, base_w);
        const std::size_t half = base_w / 2;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t b = (i > half) ? i - half : 0;
            if (b >= baseline.size()) b = baseline.size() - 1;
            detrended[i] = x[i] - baseline[b];
        }
    } else {
        detrended = std::vector<double>(x.begin(), x.end());
    }

    double power = 0.0;
    for (double v : detrended) power += v * v;
    if (power <= 0.0) return std::nullopt;

    const std::vector<double> acf = kernels::autocorr_normalized(detrended, lag_min, lag_max);
    std::size_t best = 0;
    for (std::size_t k = 1; k < acf.size(); ++k) {
        if (acf[k] > acf[best]) best = k;
    }
    const double score = std::clamp(acf[best], 0.0, 1.0);
    if (score < cfg.alarm_threshold) return std::nullopt;

    const std::size_t period_samples = lag_min + best;

    // Amplitude and extent of the oscillation: a sliding window of one full
    // cycle (two half-periods) captures the peak-to-peak swing.
    std::size_t amp_win = 2 * period_samples;
    if (amp_win > n) amp_win = n;
    const std::vector<double> half_range = sliding_half_range(detrended, amp_win);
    // Strictly above the floor: quantizer dither on a level boundary swings
    // exactly gamma/2 and must not count as activity.
    std::size_t first_active = half_range.size();
    std::size_t last_active = 0;
    double peak_amp = 0.0;
    for (std::size_t i = 0; i < half_range.size(); ++i) {
        if (half_range[i] > cfg.amplitude_floor) {
            if (first_active == half_range.size()) first_active = i;
            last_active = i;
            peak_amp = std::max(peak_amp, half_range[i]);
        }
    }
    if (first_active == half_range.size()) return std::nullopt;

    const double cycles = static_cast<double>(last_active + amp_win - first_active) /
                          static_cast<double>(period_samples);
    if (cycles < static_cast<double>(cfg.min_cycles)) return std::nullopt;

    Alarm alarm;
    alarm.trace_id = trace_id;
    alarm.onset_index = run.begin + first_active;
    alarm.period_s = static_cast<double>(period_samples) / fs;
    alarm.amplitude = peak_amp;
    alarm.score = score;
    return alarm;
}

}  // namespace

std::vector<Alarm> scan_trace(const TemperatureTrace& trace, const DetectorConfig& cfg,
                              const std::string& trace_id) {
    cfg.validate();
    if (trace.empty() || !(trace.sample_rate > 0.0)) throw Error("scan_trace: empty trace");
    const double need_s = static_cast<double>(cfg.min_cycles) * cfg.period_max_s;
    if (trace.duration_s() < need_s) {
        throw Error("scan_trace: trace spans " + std::to_string(trace.duration_s()) +
                    " s, need at least " + std::to_string(need_s) + " s");
    }

    std::vector<Alarm> alarms;
    for (const IndexRange& run : quiet_runs(trace, cfg)) {
        if (auto alarm = scan_run(trace, run, cfg, trace_id)) alarms.push_back(*alarm);
    }
    return alarms;
}

std::vector<Alarm> scan_multi(std::span<const TemperatureTrace> traces, const DetectorConfig& cfg,
                              std::span<const std::string> trace_ids) {
    if (traces.size() < 2) throw Error("scan_multi: need at least 2 traces");

    double overlap_lo = traces[0].t0;
    double overlap_hi = traces[0].t0 + traces[0].duration_s();
    for (const auto& t : traces) {
        overlap_lo = std::max(overlap_lo, t.t0);
        overlap_hi = std::min(overlap_hi, t.t0 + t.duration_s());
    }
    if (!(overlap_lo < overlap_hi)) throw Error("scan_multi: traces do not overlap in time");

    std::vector<Alarm> all;
    std::vector<std::size_t> room_of;
    for (std::size_t r = 0; r < traces.size(); ++r) {
        const std::string id =
            r < trace_ids.size() ? trace_ids[r] : ("room" + std::to_string(r));
        for (Alarm a : scan_trace(traces[r], cfg, id)) {
            all.push_back(std::move(a));
            room_of.push_back(r);
        }
    }

    // Cross-room agreement: same period within 10% seen from another room.
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (room_of[i] == room_of[j]) continue;
            const double rel = std::fabs(all[i].period_s - all[j].period_s) /
                               std::max(all[i].period_s, all[j].period_s);
            if (rel <= 0.10) {
                all[i].boosted = true;
                break;
            }
        }
    }
    for (Alarm& a : all) {
        if (a.boosted) a.score = std::min(1.0, a.score + 0.2);
    }
    std::sort(all.begin(), all.end(), [](const Alarm& a, const Alarm& b) { return a.score > b.score; });
    return all;
}

std::string alarm_to_json(const Alarm& alarm) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"trace\":\"%s\",\"onset_index\":%zu,\"period_s\":%.3f,"
                  "\"amplitude_c\":%.3f,\"score\":%.3f,\"boosted\":%s}",
                  alarm.trace_id.c_str(), alarm.onset_index, alarm.period_s, alarm.amplitude,
                  alarm.score, alarm.boosted ? "true" : "false");
    return std::string(buf);
}

}  // namespace thermocc

#include "thermocc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "thermocc/rng.hpp"
#include "thermocc/types.hpp"

namespace thermocc::kernels {

// The parallel and serial variants share one element functor so the
// arithmetic (and therefore the rounding) is identical in both.

namespace {

inline double window_mean(std::span<const double> x, std::size_t i, std::size_t w) {
    double sum = 0.0;
    for (std::size_t k = i; k <= i + w; ++k) sum += x[k];
    return sum / static_cast<double>(w + 1);
}

inline double lag_product(std::span<const double> x, std::size_t lag) {
    double sum = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + lag < n; ++i) sum += x[i] * x[i + lag];
    return sum;
}

inline double slew_value(const SlewSegment& seg, double t, double up, double down) {
    if (seg.start_temp < seg.target) {
        return std::min(seg.target, seg.start_temp + up * (t - seg.t_start_s));
    }
    if (seg.start_temp > seg.target) {
        return std::max(seg.target, seg.start_temp + down * (t - seg.t_start_s));
    }
    return seg.target;
}

inline double sense_value(std::span<const double> room, const SenseParams& p, std::size_t i) {
    const double t = static_cast<double>(i) / p.rate_out;
    std::size_t j = static_cast<std::size_t>(std::llround(t * p.rate_in));
    if (j >= room.size()) j = room.size() - 1;
    double v = room[j] + p.offset;
    if (p.sigma > 0.0) v += p.sigma * gaussian(p.seed, i);
    return std::floor(v / p.gamma) * p.gamma;
}

}  // namespace

std::vector<double> moving_average(std::span<const double> x, std::size_t w) {
    if (w < 1 || x.size() <= w) throw Error("moving_average: need length > w >= 1");
    const std::size_t n_out = x.size() - w;
    std::vector<double> out(n_out);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_out); ++i) {
        out[i] = window_mean(x, static_cast<std::size_t>(i), w);
    }
    return out;
}

std::vector<double> moving_average_serial(std::span<const double> x, std::size_t w) {
    if (w < 1 || x.size() <= w) throw Error("moving_average: need length > w >= 1");
    const std::size_t n_out = x.size() - w;
    std::vector<double> out(n_out);
    for (std::size_t i = 0; i < n_out; ++i) out[i] = window_mean(x, i, w);
    return out;
}

std::vector<double> autocorr_normalized(std::span<const double> x,
                                        std::size_t lag_min, std::size_t lag_max) {
    if (lag_min > lag_max || lag_max >= x.size()) throw Error("autocorr: bad lag range");
    const double denom = lag_product(x, 0);
    std::vector<double> out(lag_max - lag_min + 1, 0.0);
    if (denom <= 0.0) return out;
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(out.size()); ++k) {
        out[k] = lag_product(x, lag_min + static_cast<std::size_t>(k)) / denom;
    }
    return out;
}

std::vector<double> autocorr_normalized_serial(std::span<const double> x,
                                               std::size_t lag_min, std::size_t lag_max) {
    if (lag_min > lag_max || lag_max >= x.size()) throw Error("autocorr: bad lag range");
    const double denom = lag_product(x, 0);
    std::vector<double> out(lag_max - lag_min + 1, 0.0);
    if (denom <= 0.0) return out;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = lag_product(x, lag_min + k) / denom;
    }
    return out;
}

std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t n, double sigma) {
    std::vector<double> out(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        out[i] = sigma * gaussian(seed, static_cast<std::uint64_t>(i));
    }
    return out;
}

std::vector<double> gaussian_noise_serial(std::uint64_t seed, std::size_t n, double sigma) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = sigma * gaussian(seed, i);
    return out;
}

namespace {

// Segment owning sample i; segments are sorted and contiguous.
inline const SlewSegment& segment_of(std::span<const SlewSegment> segments, std::size_t i) {
    auto it = std::upper_bound(segments.begin(), segments.end(), i,
                               [](std::size_t v, const SlewSegment& s) { return v < s.end; });
    return *it;
}

}  // namespace

std::vector<double> slew_fill(std::span<const SlewSegment> segments,
                              double ascent_c_per_s, double descent_c_per_s,
                              double dt, std::size_t n) {
    std::vector<double> out(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const SlewSegment& seg = segment_of(segments, static_cast<std::size_t>(i));
        out[i] = slew_value(seg, static_cast<double>(i) * dt, ascent_c_per_s, descent_c_per_s);
    }
    return out;
}

std::vector<double> slew_fill_serial(std::span<const SlewSegment> segments,
                                     double ascent_c_per_s, double descent_c_per_s,
                                     double dt, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SlewSegment& seg = segment_of(segments, i);
        out[i] = slew_value(seg, static_cast<double>(i) * dt, ascent_c_per_s, descent_c_per_s);
    }
    return out;
}

std::vector<double> sense_transform(std::span<const double> room, const SenseParams& p,
                                    std::size_t n_out) {
    std::vector<double> out(n_out);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_out); ++i) {
        out[i] = sense_value(room, p, static_cast<std::size_t>(i));
    }
    return out;
}

std::vector<double> sense_transform_serial(std::span<const double> room, const SenseParams& p,
                                           std::size_t n_out) {
    std::vector<double> out(n_out);
    for (std::size_t i = 0; i < n_out; ++i) out[i] = sense_value(room, p, i);
    return out;
}

}  // namespace thermocc::kernels

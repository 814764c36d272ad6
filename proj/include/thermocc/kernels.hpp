#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace thermocc::kernels {

// Data-parallel inner loops of the simulator. Each kernel ships in two
// variants: the OpenMP-parallel default and a *_serial reference used by the
// tests and the benchmark. Both variants perform identical per-element
// arithmetic (same summation order), so their outputs match bit for bit.

/// Inclusive-window moving average: out[i] = mean(x[i .. i+w]), w+1 samples,
/// output length = x.size() - w. Requires x.size() > w and w >= 1.
std::vector<double> moving_average(std::span<const double> x, std::size_t w);
std::vector<double> moving_average_serial(std::span<const double> x, std::size_t w);

/// Normalized autocorrelation r[k] = sum(x[i]*x[i+lag]) / sum(x[i]^2) for
/// lag = lag_min + k, lag_max inclusive. x is expected to be detrended.
std::vector<double> autocorr_normalized(std::span<const double> x,
                                        std::size_t lag_min, std::size_t lag_max);
std::vector<double> autocorr_normalized_serial(std::span<const double> x,
                                               std::size_t lag_min, std::size_t lag_max);

/// n zero-mean Gaussian deviates with the given sigma, counter-based.
std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t n, double sigma);
std::vector<double> gaussian_noise_serial(std::uint64_t seed, std::size_t n, double sigma);

/// One piecewise-linear slew segment: starting at start_temp at t_start_s the
/// signal moves toward target and clamps there. Sample indices [first, end).
struct SlewSegment {
    std::size_t first = 0;
    std::size_t end = 0;
    double t_start_s = 0.0;
    double start_temp = 0.0;
    double target = 0.0;
};

/// Evaluate the slew model at every sample instant i*dt.
std::vector<double> slew_fill(std::span<const SlewSegment> segments,
                              double ascent_c_per_s, double descent_c_per_s,
                              double dt, std::size_t n);
std::vector<double> slew_fill_serial(std::span<const SlewSegment> segments,
                                     double ascent_c_per_s, double descent_c_per_s,
                                     double dt, std::size_t n);

/// Sensor transform: out[i] = floor((room[map(i)] + offset + noise_i) / gamma) * gamma
/// where map(i) picks the nearest room sample for the sensor instant i/rate_out.
struct SenseParams {
    double offset = 0.0;
    double gamma = 1.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double rate_in = 1.0;
    double rate_out = 1.0;
};
std::vector<double> sense_transform(std::span<const double> room, const SenseParams& p,
                                    std::size_t n_out);
std::vector<double> sense_transform_serial(std::span<const double> room, const SenseParams& p,
                                           std::size_t n_out);

}  // namespace thermocc::kernels

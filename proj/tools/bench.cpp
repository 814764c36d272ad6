// Benchmark: OpenMP kernels against their serial reference implementations.
// The two variants must agree bit for bit; the benchmark verifies that while
// timing them.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "thermocc/kernels.hpp"
#include "thermocc/rng.hpp"

using namespace thermocc;
namespace k = thermocc::kernels;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

bool equal_exact(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-18s serial %8.1f ms   parallel %8.1f ms   speedup %5.2fx   %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 2'000'000;
    int reps = 3;
    if (argc > 1) n = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));
    if (argc > 2) reps = std::atoi(argv[2]);

#ifdef _OPENMP
    std::printf("OpenMP enabled, %d threads, n = %zu\n", omp_get_max_threads(), n);
#else
    std::printf("OpenMP disabled (serial build), n = %zu\n", n);
#endif

    std::vector<double> signal(n);
    for (std::size_t i = 0; i < n; ++i) {
        signal[i] = 25.0 + 2.0 * gaussian(42, i);
    }

    bool all_ok = true;

    {
        const std::size_t w = 512;
        std::vector<double> a, b;
        const double ts = time_best_of(reps, [&] { a = k::moving_average_serial(signal, w); });
        const double tp = time_best_of(reps, [&] { b = k::moving_average(signal, w); });
        const bool ok = equal_exact(a, b);
        all_ok = all_ok && ok;
        report("moving_average", ts, tp, ok);
    }
    {
        const std::size_t lag_min = 100, lag_max = 2000;
        std::vector<double> x(signal.begin(), signal.begin() + std::min<std::size_t>(n, 200'000));
        std::vector<double> a, b;
        const double ts = time_best_of(reps, [&] { a = k::autocorr_normalized_serial(x, lag_min, lag_max); });
        const double tp = time_best_of(reps, [&] { b = k::autocorr_normalized(x, lag_min, lag_max); });
        const bool ok = equal_exact(a, b);
        all_ok = all_ok && ok;
        report("autocorr", ts, tp, ok);
    }
    {
        std::vector<double> a, b;
        const double ts = time_best_of(reps, [&] { a = k::gaussian_noise_serial(7, n, 0.15); });
        const double tp = time_best_of(reps, [&] { b = k::gaussian_noise(7, n, 0.15); });
        const bool ok = equal_exact(a, b);
        all_ok = all_ok && ok;
        report("gaussian_noise", ts, tp, ok);
    }
    {
        // Alternating slew segments across the whole array.
        const double dt = 1.0 / 3.3;
        std::vector<k::SlewSegment> segs;
        const std::size_t seg_len = 4096;
        double temp = 23.0;
        for (std::size_t first = 0; first < n; first += seg_len) {
            k::SlewSegment s;
            s.first = first;
            s.end = std::min(n, first + seg_len);
            s.t_start_s = static_cast<double>(first) * dt;
            s.start_temp = temp;
            s.target = (temp < 24.5) ? 26.0 : 23.0;
            segs.push_back(s);
            temp = s.target;
        }
        std::vector<double> a, b;
        const double ts = time_best_of(reps, [&] { a = k::slew_fill_serial(segs, 0.0205, -0.0207, dt, n); });
        const double tp = time_best_of(reps, [&] { b = k::slew_fill(segs, 0.0205, -0.0207, dt, n); });
        const bool ok = equal_exact(a, b);
        all_ok = all_ok && ok;
        report("slew_fill", ts, tp, ok);
    }
    {
        k::SenseParams p;
        p.offset = 4.0;
        p.gamma = 1.0;
        p.sigma = 0.15;
        p.seed = 11;
        p.rate_in = 3.3;
        p.rate_out = 3.3;
        std::vector<double> a, b;
        const double ts = time_best_of(reps, [&] { a = k::sense_transform_serial(signal, p, n); });
        const double tp = time_best_of(reps, [&] { b = k::sense_transform(signal, p, n); });
        const bool ok = equal_exact(a, b);
        all_ok = all_ok && ok;
        report("sense_transform", ts, tp, ok);
    }

    if (!all_ok) {
        std::printf("kernel mismatch detected\n");
        return 1;
    }
    return 0;
}

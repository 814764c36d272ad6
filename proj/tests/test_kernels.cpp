#include <doctest.h>

#include <cstring>
#include <vector>

#include "thermocc/kernels.hpp"
#include "thermocc/rng.hpp"
#include "thermocc/types.hpp"

using namespace thermocc;
namespace k = thermocc::kernels;

namespace {

std::vector<double> random_signal(std::uint64_t seed, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 24.0 + gaussian(seed, i);
    return x;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels match serial reference bit for bit") {
    const auto x = random_signal(3, 20000);

    CHECK(bitwise_equal(k::moving_average(x, 198), k::moving_average_serial(x, 198)));
    CHECK(bitwise_equal(k::autocorr_normalized(x, 50, 900),
                        k::autocorr_normalized_serial(x, 50, 900)));
    CHECK(bitwise_equal(k::gaussian_noise(9, 20000, 0.3), k::gaussian_noise_serial(9, 20000, 0.3)));

    std::vector<k::SlewSegment> segs;
    double temp = 23.0;
    for (std::size_t first = 0; first < 20000; first += 1500) {
        k::SlewSegment s;
        s.first = first;
        s.end = std::min<std::size_t>(20000, first + 1500);
        s.t_start_s = first / 3.3;
        s.start_temp = temp;
        s.target = temp < 24.5 ? 26.0 : 23.0;
        segs.push_back(s);
        temp = s.target;
    }
    CHECK(bitwise_equal(k::slew_fill(segs, 0.0205, -0.0207, 1 / 3.3, 20000),
                        k::slew_fill_serial(segs, 0.0205, -0.0207, 1 / 3.3, 20000)));

    k::SenseParams p;
    p.offset = 4.0;
    p.gamma = 1.0;
    p.sigma = 0.2;
    p.seed = 77;
    p.rate_in = 3.3;
    p.rate_out = 3.3;
    CHECK(bitwise_equal(k::sense_transform(x, p, x.size()),
                        k::sense_transform_serial(x, p, x.size())));
}

TEST_CASE("moving_average window math") {
    const std::vector<double> x{24.0, 25.0, 24.0, 25.0};
    const auto out = k::moving_average(x, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == doctest::Approx(73.0 / 3.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(74.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(k::moving_average(x, 4), Error);
    CHECK_THROWS_AS(k::moving_average(x, 0), Error);
}

TEST_CASE("autocorr normalization and degenerate input") {
    // Pure periodic signal: r at the period is close to 1.
    std::vector<double> x(4000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i / 100) % 2 ? 1.0 : -1.0;
    const auto r = k::autocorr_normalized(x, 150, 250);
    CHECK(r[200 - 150] > 0.85);  // lag 200 = full period

    const std::vector<double> zeros(512, 0.0);
    const auto rz = k::autocorr_normalized(zeros, 10, 20);
    for (double v : rz) CHECK(v == 0.0);
}

TEST_CASE("gaussian_noise is a pure function of seed and index") {
    const auto a = k::gaussian_noise(5, 64, 1.0);
    const auto b = k::gaussian_noise(5, 64, 1.0);
    CHECK(bitwise_equal(a, b));
    const auto c = k::gaussian_noise(6, 64, 1.0);
    CHECK_FALSE(bitwise_equal(a, c));

    // Sigma scales linearly: same deviates underneath.
    const auto s1 = k::gaussian_noise(5, 64, 0.5);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == doctest::Approx(0.5 * a[i]));
}

}  // TEST_SUITE

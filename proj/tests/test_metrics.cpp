#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "evotse/errors.hpp"
#include "evotse/metrics.hpp"

using namespace evotse;

namespace {

// Independent SI-SDR route: correlation form in extended precision,
// 10*log10(rho^2 / (1 - rho^2)) with rho the normalized inner product.
double si_sdr_oracle(const std::vector<float>& est, const std::vector<float>& ref) {
    long double dot = 0.0L, ee = 0.0L, rr = 0.0L;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const long double e = est[i];
        const long double r = ref[i];
        dot += e * r;
        ee += e * e;
        rr += r * r;
    }
    const long double rho2 = (dot * dot) / (ee * rr);
    const long double target = rho2 * ee;
    long double error = ee - target;
    const long double floor = 1e-12L;
    const long double db =
        10.0L * log10l(std::max(target, floor) / std::max(error, floor));
    return std::clamp(static_cast<double>(db), -80.0, 80.0);
}

std::vector<float> random_signal(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<float> g(0.0f, 0.3f);
    std::vector<float> v(n);
    for (float& x : v) {
        x = g(rng);
    }
    return v;
}

} // namespace

TEST_CASE("si_sdr analytic and boundary cases") {
    const std::vector<float> ref{1.0f, 1.0f};
    const std::vector<float> est{1.0f, 0.0f};
    CHECK(si_sdr(est, ref) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(si_sdr(ref, ref) == doctest::Approx(80.0));

    CHECK_THROWS_AS(si_sdr(est, std::vector<float>{1.0f}), LengthMismatchError);
    CHECK_THROWS_AS(si_sdr(est, std::vector<float>{0.0f, 0.0f}), ZeroReferenceError);
}

TEST_CASE("si_sdr matches the independent high-precision route") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto ref = random_signal(rng, 256);
        const auto est = random_signal(rng, 256);
        CHECK(si_sdr(est, ref) == doctest::Approx(si_sdr_oracle(est, ref)).epsilon(1e-9));
    }
}

TEST_CASE("si_sdr is scale invariant in the estimate") {
    std::mt19937_64 rng(37);
    // Power-of-two scales are exact in float, so only the metric's own
    // arithmetic is under test.
    std::uniform_int_distribution<int> exp_dist(-6, 6);
    std::bernoulli_distribution flip(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ref = random_signal(rng, 128);
        const auto est = random_signal(rng, 128);
        const double a = (flip(rng) ? -1.0 : 1.0) * std::ldexp(1.0, exp_dist(rng));
        std::vector<float> scaled(est.size());
        for (std::size_t i = 0; i < est.size(); ++i) {
            scaled[i] = static_cast<float>(a) * est[i];
        }
        CHECK(std::abs(si_sdr(scaled, ref) - si_sdr(est, ref)) < 1e-6);
    }
}

TEST_CASE("si_sdri identities") {
    std::mt19937_64 rng(41);
    const auto ref = random_signal(rng, 128);
    const auto mix = random_signal(rng, 128);
    CHECK(si_sdri(mix, mix, ref) == doctest::Approx(0.0));
    CHECK(si_sdri(ref, mix, ref) == doctest::Approx(80.0 - si_sdr(mix, ref)).epsilon(1e-12));
}

TEST_CASE("si_sdri of the interferer in an equal-power mixture is negative") {
    std::mt19937_64 rng(43);
    const auto target = random_signal(rng, 512);
    const auto interferer = random_signal(rng, 512);
    std::vector<float> mix(target.size());
    for (std::size_t i = 0; i < mix.size(); ++i) {
        mix[i] = target[i] + interferer[i];
    }
    CHECK(si_sdri(interferer, mix, target) < 0.0);
}

TEST_CASE("nsr counts strict negatives") {
    CHECK(nsr({5.0, -3.0, 2.0, -1.0}) == doctest::Approx(50.0));
    CHECK(nsr({1.0, 2.0, 3.0}) == doctest::Approx(0.0));
    CHECK(nsr({-0.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(nsr({}), EmptyListError);
}

TEST_CASE("si_sdric averages the non-negative subset") {
    CHECK(*si_sdric({5.0, -3.0, 2.0, -1.0}) == doctest::Approx(3.5));
    CHECK_FALSE(si_sdric({-1.0, -2.0}).has_value());
    CHECK(*si_sdric({1.0, 2.0, 3.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(si_sdric({}), EmptyListError);
}

TEST_CASE("nsr zero implies si_sdric equals the plain mean") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<double> values;
    double sum = 0.0;
    for (int i = 0; i < 32; ++i) {
        values.push_back(u(rng));
        sum += values.back();
    }
    REQUIRE(nsr(values) == 0.0);
    CHECK(*si_sdric(values) == sum / 32.0);
}

TEST_CASE("nsr and si_sdric are permutation invariant") {
    std::vector<double> values{4.0, -2.0, 7.5, -0.25, 3.0, 0.0};
    const double base_nsr = nsr(values);
    const double base_c = *si_sdric(values);
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(values.begin(), values.end(), rng);
        CHECK(nsr(values) == doctest::Approx(base_nsr));
        CHECK(*si_sdric(values) == doctest::Approx(base_c));
    }
}

TEST_CASE("group_loss defaults to mean negative si_sdr") {
    std::mt19937_64 rng(59);
    const auto a = random_signal(rng, 64);
    CHECK(group_loss({{a}}, {{a}}) == doctest::Approx(-80.0));

    std::vector<std::vector<std::vector<float>>> est(2), ref(2);
    long double expected = 0.0L;
    for (int b = 0; b < 2; ++b) {
        for (int n = 0; n < 3; ++n) {
            est[b].push_back(random_signal(rng, 64));
            ref[b].push_back(random_signal(rng, 64));
            expected += -si_sdr(est[b].back(), ref[b].back());
        }
    }
    CHECK(group_loss(est, ref) == doctest::Approx(static_cast<double>(expected / 6.0L)).epsilon(1e-9));

    CHECK_THROWS_AS(group_loss(est, {{a}}), ShapeMismatchError);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "spinchain/errors.hpp"
#include "spinchain/gap.hpp"
#include "spinchain/model.hpp"

using namespace spinchain;
using namespace spinchain::gap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Random (g, delta) with a = |g^2 - delta^2| kept away from 0 and 1.
std::pair<double, double> regular_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> field(-2.0, 2.0);
    while (true) {
        const double g = field(rng), d = field(rng);
        const double a = std::abs(g * g - d * d);
        if (a > 0.01 && std::abs(a - 1.0) > 0.01)
            return {g, d};
    }
}

} // namespace

TEST_CASE("region classification", "[gap][classify]")
{
    const auto crit = classify(ModelParams(kSqrt2, 1.0, 8));
    CHECK(crit.region == Region::Critical);
    CHECK_THAT(crit.g_max_sq, WithinRel(2.0, 1e-15));
    CHECK_THAT(crit.g_min_sq, WithinRel(1.0, 1e-15));

    CHECK(classify(ModelParams(0.3, 0.3, 8)).region == Region::Degenerate);
    CHECK(classify(ModelParams(0.3, -0.3, 8)).region == Region::Degenerate);

    const auto para = classify(ModelParams(2.0, 0.5, 6));
    CHECK(para.region == Region::Paramagnetic);
    CHECK(para.sign_factor == 1);
    CHECK_THAT(para.a, WithinRel(3.75, 1e-15));

    CHECK(classify(ModelParams(0.5, 0.3, 8)).region == Region::Ising);
    CHECK(classify(ModelParams(0.4, 0.9, 6)).sign_factor == -1);
    CHECK(classify(ModelParams(0.4, 0.9, 8)).sign_factor == 1);
    CHECK(classify(ModelParams(1.4142135, 1.0, 8), 1e-6).region == Region::Critical);
    CHECK(classify(ModelParams(1.4142135, 1.0, 8)).region == Region::Ising);
    CHECK_THROWS_AS(classify(ModelParams(0.5, 0.3, 8), 0.0), InvalidInput);
    CHECK(to_string(Region::Paramagnetic) == "Paramagnetic");
}

TEST_CASE("classification invariants on random samples", "[gap][classify][property]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> field(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double g = field(rng), d = field(rng);
        for (int n : {4, 6, 8, 10}) {
            const auto rc = classify(ModelParams(g, d, n));
            REQUIRE(rc.g_max_sq >= rc.g_min_sq);
            REQUIRE(rc.g_min_sq >= 0.0);
            REQUIRE(rc.a >= 0.0);
            const bool negative = g * g < d * d && (n / 2) % 2 == 1;
            REQUIRE(rc.sign_factor == (negative ? -1 : 1));
        }
    }
}

TEST_CASE("Fourier coefficients match high-precision k-quadrature", "[gap][fourier]")
{
    struct Case {
        int l;
        double g, d, value;
    };
    // 40-digit quadrature of (2/pi) int cos(2kl)(eps+ + eps-) dk.
    const Case cases[] = {
        {1, 0.6, 0.2, -0.14401002595541276}, {3, 0.6, 0.8, 0.001305493760732922},
        {2, 1.5, 0.3, -0.03949296406101515}, {5, 0.4, 1.3, 0.003403286374901578},
        {0, 0.6, 0.2, 4.400486141238495},
    };
    for (const auto& c : cases) {
        const auto r = fourier_coefficient_sum(c.l, ModelParams(c.g, c.d, 8));
        INFO("l=" << c.l << " g=" << c.g << " delta=" << c.d);
        CHECK(r.index_l == c.l);
        CHECK_THAT(r.combined_value, WithinAbs(c.value, 1e-12));
    }
    // Sign bookkeeping: a negative magnitude times (g^2 - delta^2)^3 < 0.
    CHECK(fourier_coefficient_sum(3, ModelParams(0.6, 0.8, 8)).combined_value > 0.0);
    CHECK_THAT(fourier_coefficient_sum(0, ModelParams(0.0, 0.0, 8)).combined_value,
               WithinAbs(4.0, 1e-15));
    CHECK(fourier_coefficient_sum(7, ModelParams(0.9, 0.9, 8)).combined_value == 0.0);
    CHECK_THROWS_AS(fourier_coefficient_sum(-1, ModelParams(0.6, 0.2, 8)), InvalidInput);
}

TEST_CASE("Fourier coefficients agree with the trapezoid split coefficients",
          "[gap][fourier][property]")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
        const auto [g, d] = regular_point(rng);
        const ModelParams p(g, d, 8);
        for (int l : {0, 1, 2, 3, 4, 6, 9}) {
            const auto split = testing_support::direct_coefficients(l, g, d);
            const auto c = fourier_coefficient_sum(l, p);
            INFO("l=" << l << " g=" << g << " delta=" << d);
            REQUIRE_THAT(c.combined_value, WithinAbs(split.u + split.v, 1e-10));
        }
    }
}

TEST_CASE("coefficient sums reproduce the k = 0 and k = pi/2 energies", "[gap][fourier]")
{
    for (auto [g, d] : {std::pair{0.5, 0.3}, {1.5, 0.4}, {0.2, 1.4}, {0.9, 0.2}}) {
        const ModelParams p(g, d, 8);
        const auto rc = classify(p);
        const double r = std::min(rc.a, 1.0 / rc.a);
        const int terms = static_cast<int>(std::ceil(std::log(1e-17) / std::log(r))) + 4;
        // The l = 0 coefficient is twice the mean, so it enters with weight 1/2.
        double at_zero = 0.5 * fourier_coefficient_sum(0, p).combined_value;
        double at_half_pi = at_zero;
        for (int l = 1; l <= terms; ++l) {
            const double c = fourier_coefficient_sum(l, p).combined_value;
            at_zero += c;
            at_half_pi += l % 2 ? -c : c;
        }
        const auto e0 = dispersion(0.0, g, d);
        const auto eh = dispersion(kPi / 2, g, d);
        INFO("g=" << g << " delta=" << d);
        CHECK_THAT(at_zero, WithinAbs(e0.eps_plus + e0.eps_minus, 1e-10));
        CHECK_THAT(at_half_pi, WithinAbs(eh.eps_plus + eh.eps_minus, 1e-10));
    }
}

TEST_CASE("integral gap examples", "[gap][integral]")
{
    const auto zero = gap_integral(ModelParams(0.8, 0.8, 12));
    CHECK(zero.value == 0.0);
    CHECK(zero.method == GapMethod::Integral);

    const ModelParams p(0.5, 0.3, 8);
    CHECK_THAT(gap_integral(p).value, WithinAbs(gap_direct_sum(p).value, 1e-10));

    const ModelParams c(kSqrt2, 1.0, 16);
    const auto b = bounds_critical(c);
    const double v = std::abs(gap_integral(c).value);
    CHECK(v >= b.lower);
    CHECK(v <= b.upper);

    // Uniform critical chain: exactly tan(pi / 4N).
    for (int n : {4, 8, 32, 128})
        CHECK_THAT(gap_integral(ModelParams(1.0, 0.0, n)).value,
                   WithinRel(std::tan(kPi / (4.0 * n)), 1e-12));
}

TEST_CASE("near-critical points", "[gap][integral]")
{
    const ModelParams p(1.4142135, 1.0, 16);
    const GapOptions loose{1e-6, false, 1e-12};
    const auto r = gap_integral(p, loose);
    CHECK_FALSE(r.note.empty());
    // Evaluated at the actual field, so it agrees with the direct sum.
    CHECK_THAT(r.value, WithinAbs(gap_direct_sum(p).value, 1e-12));

    try {
        gap_integral(p, {1e-6, true, 1e-12});
        FAIL("expected AmbiguousRegion");
    } catch (const AmbiguousRegion& e) {
        CHECK(e.adjacent_region() == Region::Ising);
        CHECK_THAT(e.adjacent_value(), WithinAbs(r.value, 1e-15));
        // The line formula at this G^2, which is off the line by 1.8e-7.
        CHECK_THAT(e.critical_value(),
                   WithinRel(gap_integral(ModelParams(kSqrt2, 1.0, 16)).value, 1e-6));
    }

    // Inside the slow band but well away from the line: evaluated, with a note.
    const auto band = gap_integral(ModelParams(std::sqrt(2.005), 1.0, 8));
    CHECK_FALSE(band.note.empty());
}

TEST_CASE("series gap examples", "[gap][series]")
{
    const auto para = gap_series(ModelParams(2.0, 0.0, 8));
    CHECK(para.value > 1.0);
    CHECK(para.method == GapMethod::Series);

    const ModelParams p(0.5, 0.3, 8);
    CHECK_THAT(gap_series(p).value, WithinAbs(gap_direct_sum(p).value, 1e-12));
    CHECK(gap_series(ModelParams(0.9, 0.9, 12)).value == 0.0);

    CHECK_THROWS_AS(gap_series(ModelParams(std::sqrt(2.005), 1.0, 8)), SlowConvergence);
    CHECK_THROWS_AS(gap_series(ModelParams(kSqrt2, 1.0, 8)), SlowConvergence);
    CHECK_THROWS_AS(gap_series(p, 0.0), InvalidInput);
}

TEST_CASE("three routes agree away from a = 0 and a = 1", "[gap][property]")
{
    std::mt19937_64 rng(17);
    const int sizes[] = {4, 6, 8, 12, 16};
    for (int i = 0; i < 60; ++i) {
        const auto [g, d] = regular_point(rng);
        const int n = sizes[i % 5];
        const ModelParams p(g, d, n);
        const auto direct = gap_direct_sum(p);
        const auto integral = gap_integral(p);
        const auto series = gap_series(p);
        const double scale = 1e-8 * std::abs(direct.value);
        INFO("g=" << g << " delta=" << d << " N=" << n);
        REQUIRE(std::abs(integral.value - direct.value) <=
                scale + direct.error_estimate + integral.error_estimate);
        REQUIRE(std::abs(series.value - direct.value) <=
                scale + direct.error_estimate + series.error_estimate);
        REQUIRE(std::abs(series.value - integral.value) <=
                scale + integral.error_estimate + series.error_estimate);
    }
}

TEST_CASE("paramagnetic evaluation never meets both step conditions", "[gap][property]")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> field(-4.0, 4.0);
    int evaluated = 0;
    for (int i = 0; i < 400; ++i) {
        const double g = field(rng), d = field(rng);
        const ModelParams p(g, d, 6);
        if (classify(p).region != Region::Paramagnetic)
            continue;
        ++evaluated;
        REQUIRE_NOTHROW(gap_integral(p));
    }
    CHECK(evaluated > 100);
}

TEST_CASE("paramagnetic gap exceeds the open-gap estimate", "[gap]")
{
    // Only the sign_factor = +1 branch, where the signed gap is positive.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> field(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double g = field(rng), d = field(rng);
        const ModelParams p(g, d, 16);
        const auto rc = classify(p);
        if (rc.region != Region::Paramagnetic || rc.sign_factor != 1)
            continue;
        const double estimate = std::sqrt(rc.g_max_sq) - std::sqrt(1.0 + rc.g_min_sq);
        INFO("g=" << g << " delta=" << d);
        REQUIRE(gap_direct_sum(p).value > estimate);
    }
    CHECK(gap_direct_sum(ModelParams(3.0, 0.0, 16)).value > 2.0);
}

TEST_CASE("critical bounds", "[gap][bounds]")
{
    const auto b4 = bounds_critical(ModelParams(kSqrt2, 1.0, 4));
    CHECK_THAT(b4.upper, WithinRel(std::tan(kPi / 16.0), 1e-15));
    CHECK(b4.lower <= b4.upper);

    for (auto [g, d] : {std::pair{kSqrt2, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, kSqrt2}, {2.0, std::sqrt(3.0)}}) {
        for (int n : {4, 8, 16, 64, 256}) {
            const ModelParams p(g, d, n);
            const auto b = bounds_critical(p);
            const auto r = gap_direct_sum(p);
            INFO("g=" << g << " delta=" << d << " N=" << n);
            CHECK(std::abs(r.value) + r.error_estimate >= b.lower);
            CHECK(std::abs(r.value) - r.error_estimate <= b.upper);
        }
    }
    CHECK_THROWS_AS(bounds_critical(ModelParams(0.5, 0.3, 8)), WrongRegion);
}

TEST_CASE("Ising bounds", "[gap][bounds]")
{
    const ModelParams p(0.5, 0.3, 8);
    const auto b = bounds_ising(p);
    const double v = std::abs(gap_direct_sum(p).value);
    CHECK(b.lower <= v);
    CHECK(v <= b.upper);

    // Close to a = 1 the first lower branch vanishes and the second carries the max.
    const ModelParams near(std::sqrt(0.999999), 0.0, 16);
    const double a = 0.999999;
    const double first = std::pow(a, 8.0) * 2.0 / std::sqrt(kPi) * std::sqrt(1.0 - a) / 4.0;
    const double second = std::pow(a, 8.0) * 4.0 * std::sqrt(a) / (kPi * 16.0);
    CHECK(first < second);
    const double s = 1.0 + a;
    CHECK_THAT(bounds_ising(near).lower, WithinRel(second / (2.0 * std::sqrt(2.0 * s)), 1e-12));

    // Uniform chain: a = g^2.
    const ModelParams uniform(0.3, 0.0, 20);
    const auto bu = bounds_ising(uniform);
    const double gu = std::abs(gap_integral(uniform).value);
    CHECK(bu.lower <= gu);
    CHECK(gu <= bu.upper);

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> field(-1.4, 1.4);
    int checked = 0;
    while (checked < 50) {
        const double g = field(rng), d = field(rng);
        const int n = 8 + 8 * (checked % 8);
        const ModelParams q(g, d, n);
        const auto rc = classify(q);
        if (rc.region != Region::Ising || rc.a < 1e-3)
            continue;
        ++checked;
        const auto bq = bounds_ising(q);
        const auto gi = gap_integral(q);
        INFO("g=" << g << " delta=" << d << " N=" << n);
        REQUIRE(bq.lower <= bq.upper);
        REQUIRE(std::abs(gi.value) + gi.error_estimate >= bq.lower);
        REQUIRE(std::abs(gi.value) - gi.error_estimate <= bq.upper);
    }
    CHECK_THROWS_AS(bounds_ising(ModelParams(2.0, 0.0, 8)), WrongRegion);
    CHECK_THROWS_AS(bounds_ising(ModelParams(0.4, 0.4, 8)), WrongRegion);
}

TEST_CASE("correlation length", "[gap][xi]")
{
    const auto xi = correlation_length(0.1, 1.0);
    CHECK(xi.kind == CorrelationLength::Kind::Finite);
    CHECK_THAT(xi.value, WithinRel(1.0 / std::abs(std::log(0.99)), 1e-12));
    CHECK_THAT(xi.value, WithinRel(1.0 / 0.01, 0.01));

    const double g = kSqrt2 - 0.01;
    CHECK_THAT(correlation_length(g, 1.0).value, WithinRel(1.0 / (2.0 * kSqrt2 * 0.01), 0.05));

    CHECK_THAT(correlation_length(std::exp(-0.5), 0.0).value, WithinRel(1.0, 1e-14));
    CHECK(correlation_length(1.0, 0.0).kind == CorrelationLength::Kind::Infinite);
    CHECK(std::isinf(correlation_length(kSqrt2, 1.0).value));
    CHECK(correlation_length(0.5, -0.5).kind == CorrelationLength::Kind::ZeroField);
    CHECK(correlation_length(ModelParams(2.0, 0.0, 8)).value < 1.0);
}

TEST_CASE("Ising gaps decay as a^(N/2)", "[gap][property]")
{
    for (auto [g, d] : {std::pair{0.5, 0.3}, {0.8, 0.1}, {0.2, 0.9}}) {
        const double rate = 0.5 * std::log(std::abs(g * g - d * d));
        for (int n = 32; n <= 64; n += 8) {
            const double lo = std::log(std::abs(gap_integral(ModelParams(g, d, n)).value));
            const double hi = std::log(std::abs(gap_integral(ModelParams(g, d, n + 8)).value));
            // Remove the 1/sqrt(N) prefactor before comparing slopes.
            const double slope = (hi - lo + 0.5 * std::log((n + 8.0) / n)) / 8.0;
            INFO("g=" << g << " delta=" << d << " N=" << n);
            REQUIRE_THAT(slope, WithinRel(rate, 0.02));
        }
    }
}

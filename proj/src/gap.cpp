#include "spinchain/gap.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spinchain/compensated_sum.hpp"
#include "spinchain/quadrature.hpp"

namespace spinchain::gap {

namespace {

constexpr double kPi = std::numbers::pi;
// |a - 1| (or a) at or below this is treated as exactly on the line.
constexpr double kExactLineTol = 1e-12;
constexpr int kMaxSeriesTerms = 100000;

using quadrature::IntegrandSpec;
using quadrature::integrate;

// log t computed from 1 - t without cancellation.
double log_from_complement(double t, double one_minus_t)
{
    return t < 0.5 ? std::log(t) : std::log1p(-one_minus_t);
}

// [sqrt(Y/t^2 + S^2) - S]^(1/2) * t^(1/2), written without the difference of
// square roots: sqrt(Y / (sqrt(Y + S^2 t^2) + S t)).
double branch_cut_kernel(double y, double s, double t)
{
    return std::sqrt(y / (std::sqrt(y + s * s * t * t) + s * t));
}

// (1 - t^2)(1 - a^2 t^2) for a <= 1, (1 - t^2)(a^2 - t^2) for a > 1.
double cut_polynomial(double a, double t, double one_minus_t)
{
    const double first = one_minus_t * (1.0 + t);
    const double second = a <= 1.0 ? (1.0 - a * t) * (1.0 + a * t) : (a - t) * (a + t);
    return first * second;
}

struct Scaled {
    double integral;
    double error;
};

// Integral of the Ising (a < 1) or paramagnetic (a > 1) gap kernel without
// its a^(+-N/2) prefactor.
Scaled regional_integral(const RegionClass& rc, int n, double s, double rel_tol)
{
    const double a = rc.a;
    const double log_a = std::log(a);
    const bool inside = a < 1.0;
    IntegrandSpec spec;
    spec.left_exponent = n - 1.5;
    spec.right_exponent = 0.5;
    spec.evaluator = [=](double t, double omt) {
        const double y = cut_polynomial(a, t, omt);
        const double log_t = log_from_complement(t, omt);
        // 1 - a^N t^2N  or  1 - t^2N / a^N
        const double denom =
            -std::expm1(n * (2.0 * log_t + (inside ? log_a : -log_a)));
        return 4.0 * n / kPi * std::pow(t, n - 1.5) * branch_cut_kernel(y, s, t) / denom;
    };
    const auto q = integrate(spec, rel_tol);
    return {q.value, q.error_estimate};
}

// Steps from the k = 0 and k = pi/2 boundary modes; non-zero only for a > 1.
double heaviside_terms(const ModelParams& params, const RegionClass& rc)
{
    const double g = std::abs(params.g());
    const double d = std::abs(params.delta_g());
    const double g0 = std::hypot(1.0, d);
    const double gh = std::hypot(1.0, g);
    // |g| - sqrt(1 + d^2) = (a - 1)/(|g| + sqrt(1 + d^2)), likewise for |d|.
    const double g_step = (rc.signed_a - 1.0) / (g + g0);
    const double d_step = (-rc.signed_a - 1.0) / (d + gh);
    if (g_step > 0.0 && d_step > 0.0)
        throw std::logic_error("both boundary-mode step conditions hold");
    double r = 0.0;
    if (d_step > 0.0)
        r += rc.sign_factor * d_step;
    if (g_step > 0.0)
        r += g_step;
    return r;
}

GapResult regional_gap(const ModelParams& params, const RegionClass& rc, double rel_tol)
{
    const int n = params.n_sites();
    const double s = 1.0 + params.g() * params.g() + params.delta_g() * params.delta_g();
    const auto q = regional_integral(rc, n, s, rel_tol);
    // (g^2 - delta^2)^(N/2) carries the sign; magnitude a^(N/2).
    const double magnitude = std::pow(rc.a, 0.5 * n);
    GapResult r;
    r.method = GapMethod::Integral;
    if (rc.a < 1.0) {
        const double pref = 0.5 * rc.sign_factor * magnitude;
        r.value = pref * q.integral;
        r.error_estimate = std::abs(pref) * q.error;
    } else {
        const double pref = 0.5 * rc.sign_factor / magnitude;
        const double steps = heaviside_terms(params, rc);
        r.value = steps + pref * q.integral;
        r.error_estimate = std::abs(pref) * q.error +
                           std::numeric_limits<double>::epsilon() * std::abs(steps);
    }
    return r;
}

GapResult critical_gap(const ModelParams& params, const RegionClass& rc, double rel_tol)
{
    const int n = params.n_sites();
    const double big_g2 = rc.signed_a > 0.0 ? params.g() * params.g()
                                           : params.delta_g() * params.delta_g();
    IntegrandSpec spec;
    spec.left_exponent = n - 1.5;
    spec.right_exponent = 0.0;
    spec.evaluator = [=](double t, double omt) {
        // (1 - t^2)/(1 - t^2N), finite (-> 1/N) at t = 1
        const double num = omt * (1.0 + t);
        const double den = -std::expm1(2.0 * n * log_from_complement(t, omt));
        const double ratio = omt == 0.0 ? 1.0 / n : num / den;
        const double root = std::sqrt(num * num + 4.0 * big_g2 * big_g2 * t * t);
        return 4.0 * n / kPi * std::pow(t, n - 1.5) * ratio /
               std::sqrt(root + 2.0 * big_g2 * t);
    };
    const auto q = integrate(spec, rel_tol);
    GapResult r;
    r.method = GapMethod::Integral;
    r.value = 0.5 * rc.sign_factor * q.value;
    r.error_estimate = 0.5 * q.error_estimate;
    return r;
}

Region exact_field_region(double a)
{
    return a < 1.0 ? Region::Ising : Region::Paramagnetic;
}

} // namespace

std::string_view to_string(Region r) noexcept
{
    switch (r) {
    case Region::Degenerate:
        return "Degenerate";
    case Region::Ising:
        return "Ising";
    case Region::Critical:
        return "Critical";
    case Region::Paramagnetic:
        return "Paramagnetic";
    }
    return "Unknown";
}

RegionClass classify(const ModelParams& params, double tol)
{
    if (!(tol > 0.0))
        throw InvalidInput("region tolerance must be positive");
    const double g2 = params.g() * params.g();
    const double d2 = params.delta_g() * params.delta_g();
    RegionClass rc;
    rc.signed_a = params.signed_field_gap();
    rc.a = std::abs(rc.signed_a);
    rc.g_max_sq = std::max(g2, d2);
    rc.g_min_sq = std::min(g2, d2);
    rc.sign_factor = rc.signed_a < 0.0 && params.half_n_parity() == HalfParity::Odd ? -1 : 1;
    if (rc.a <= tol)
        rc.region = Region::Degenerate;
    else if (std::abs(rc.a - 1.0) <= tol)
        rc.region = Region::Critical;
    else if (rc.a < 1.0)
        rc.region = Region::Ising;
    else
        rc.region = Region::Paramagnetic;
    return rc;
}

FourierCoefficient fourier_coefficient_sum(int l, const ModelParams& params, double rel_tol,
                                           double region_tol)
{
    if (l < 0)
        throw InvalidInput("coefficient index must be non-negative");
    const auto rc = classify(params, region_tol);
    const double g = params.g();
    const double d = params.delta_g();

    if (rc.region == Region::Degenerate) {
        const double v = l == 0 ? 4.0 * std::sqrt(1.0 + 0.5 * (g * g + d * d)) : 0.0;
        return {l, v, 0.0};
    }

    if (l == 0) {
        // (2/pi) int_{-pi/2}^{pi/2} (eps+ + eps-) dk = 2 int_0^1 (...)(k = pi t / 2) dt
        auto spec = IntegrandSpec::of([g, d](double t) {
            const auto e = dispersion(0.5 * kPi * t, g, d);
            return e.eps_plus + e.eps_minus;
        });
        const auto q = integrate(spec, rel_tol);
        return {0, 2.0 * q.value, 2.0 * q.error_estimate};
    }

    const double a = rc.a;
    const double s = 1.0 + g * g + d * d;
    IntegrandSpec spec;
    spec.left_exponent = 2.0 * l - 1.5;
    spec.right_exponent = 0.5;
    spec.evaluator = [=](double t, double omt) {
        return std::pow(t, 2.0 * l - 1.5) * branch_cut_kernel(cut_polynomial(a, t, omt), s, t);
    };
    const auto q = integrate(spec, rel_tol);
    // (g^2 - delta^2)^l inside the unit circle, its inverse outside.
    const double pref =
        -4.0 / kPi * (a <= 1.0 ? std::pow(rc.signed_a, l) : std::pow(rc.signed_a, -l));
    return {l, pref * q.value, std::abs(pref) * q.error_estimate};
}

GapResult gap_integral(const ModelParams& params, const GapOptions& options)
{
    const auto rc = classify(params, options.region_tol);
    switch (rc.region) {
    case Region::Degenerate:
        if (rc.a <= kExactLineTol)
            return {0.0, GapMethod::Integral, 0.0, {}};
        return regional_gap(params, rc, options.rel_tol);
    case Region::Critical: {
        if (std::abs(rc.a - 1.0) <= kExactLineTol)
            return critical_gap(params, rc, options.rel_tol);
        auto exact = regional_gap(params, rc, options.rel_tol);
        if (options.strict) {
            const auto line = critical_gap(params, rc, options.rel_tol);
            throw AmbiguousRegion("field lies within tolerance of a critical line", line.value,
                                  exact.value, exact_field_region(rc.a));
        }
        exact.note = "near-critical point evaluated at the exact field";
        return exact;
    }
    case Region::Ising:
    case Region::Paramagnetic: {
        auto r = regional_gap(params, rc, options.rel_tol);
        if (std::abs(rc.a - 1.0) < kSlowSeriesBand)
            r.note = "near-critical band: direct sum is authoritative";
        return r;
    }
    }
    throw std::logic_error("unhandled region");
}

GapResult gap_series(const ModelParams& params, double tol, const GapOptions& options)
{
    if (!(tol > 0.0))
        throw InvalidInput("series tolerance must be positive");
    const auto rc = classify(params, options.region_tol);
    GapResult r;
    r.method = GapMethod::Series;
    if (rc.a <= kExactLineTol)
        return r;
    if (std::abs(rc.a - 1.0) < kSlowSeriesBand)
        throw SlowConvergence("coefficient series converges too slowly within 0.01 of a = 1");

    const int n = params.n_sites();
    const int half = n / 2;
    const double ratio = rc.a < 1.0 ? rc.a : 1.0 / rc.a;
    const double ratio_per_term = std::pow(ratio, n);
    const double coef_rel_tol = std::min(1e-12, tol);

    CompensatedSum sum;
    const double steps = rc.a > 1.0 ? heaviside_terms(params, rc) : 0.0;
    sum += steps;
    double quad_error = 0.0;
    double leading = 0.0;
    for (int term = 0; term < kMaxSeriesTerms; ++term) {
        const int l = (2 * term + 1) * half;
        const auto c = fourier_coefficient_sum(l, params, coef_rel_tol, options.region_tol);
        sum += -half * c.combined_value;
        quad_error += half * c.error_estimate;
        if (term == 0)
            leading = half * std::abs(c.combined_value);
        // |c_l'| <= ratio^(l'-l) |c_l|, so the remainder is geometric.
        const double next = leading * std::pow(ratio, (term + 1) * n);
        const double tail = next / (1.0 - ratio_per_term);
        const double total = sum.value();
        if (tail <= tol * std::abs(total) || tail <= std::numeric_limits<double>::min()) {
            r.value = total;
            r.error_estimate = tail + quad_error;
            return r;
        }
    }
    throw SlowConvergence("coefficient series did not converge");
}

BoundPair bounds_critical(const ModelParams& params, double region_tol)
{
    const auto rc = classify(params, region_tol);
    if (rc.region != Region::Critical)
        throw WrongRegion("critical bounds need |g^2 - delta_g^2| = 1");
    const int n = params.n_sites();
    const double tan_term = std::tan(kPi / (4.0 * n));
    return {(tan_term + kPi / (12.0 * n)) / (2.0 * std::sqrt(rc.g_max_sq)), tan_term};
}

BoundPair bounds_ising(const ModelParams& params, double region_tol)
{
    const auto rc = classify(params, region_tol);
    if (rc.region != Region::Ising)
        throw WrongRegion("Ising bounds need 0 < |g^2 - delta_g^2| < 1");
    const double n = params.n_sites();
    const double a = rc.a;
    const double s = 1.0 + params.g() * params.g() + params.delta_g() * params.delta_g();
    const double decay = std::pow(a, 0.5 * n);
    const double lower_bulk = decay * 2.0 / std::sqrt(kPi) * std::sqrt(1.0 - a) / std::sqrt(n);
    const double lower_edge = decay * 4.0 * std::sqrt(a) / (kPi * n);
    const double lower = std::max(lower_bulk, lower_edge) / (2.0 * std::sqrt(2.0 * s));
    const double upper = std::sqrt(2.0 * (1.0 + a)) / 2.0 *
                         (decay * kPi * std::sqrt(a) / (2.0 * n - 1.0) +
                          decay * 2.0 * std::sqrt(1.0 - a) / std::sqrt(n - 1.0));
    return {lower, upper};
}

CorrelationLength correlation_length(double g, double delta_g, double region_tol)
{
    const double a = std::abs((g - delta_g) * (g + delta_g));
    if (a <= region_tol)
        return {CorrelationLength::Kind::ZeroField, 0.0};
    if (std::abs(a - 1.0) <= region_tol)
        return {CorrelationLength::Kind::Infinite, std::numeric_limits<double>::infinity()};
    return {CorrelationLength::Kind::Finite, 1.0 / std::abs(std::log(a))};
}

CorrelationLength correlation_length(const ModelParams& params, double region_tol)
{
    return correlation_length(params.g(), params.delta_g(), region_tol);
}

namespace testing_support {

SplitCoefficients direct_coefficients(int l, double g, double delta_g, int points)
{
    // eps(k) has period pi; the trapezoid rule over one period is spectrally
    // accurate for analytic periodic integrands.
    CompensatedSum u, v;
    for (int j = 0; j < points; ++j) {
        const double k = -0.5 * kPi + kPi * j / points;
        const double c = std::cos(2.0 * k * l);
        const auto e = dispersion(k, g, delta_g);
        u += c * e.eps_plus;
        v += c * e.eps_minus;
    }
    return {2.0 * u.value() / points, 2.0 * v.value() / points};
}

} // namespace testing_support

} // namespace spinchain::gap

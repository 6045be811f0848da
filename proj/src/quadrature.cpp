#include "spinchain/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spinchain/compensated_sum.hpp"

namespace spinchain::quadrature {

namespace {

using Fn = std::function<double(double, double)>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Beyond this abscissa the node distance to the endpoint underflows.
constexpr double kMaxAbscissa = 6.1;
constexpr int kMaxLevel = 16;
constexpr int kFallbackLevel = 9;
constexpr int kMaxDepth = 40;

struct Outcome {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
    bool converged = false;
};

struct Budget {
    long used = 0;
    long limit = 0;
    bool exhausted() const { return used >= limit; }
};

double checked(double v, double t)
{
    if (!std::isfinite(v))
        throw InvalidSpec("integrand is not finite at t = " + std::to_string(t));
    return v;
}

// Tanh-sinh rule on [lo, hi] within the unit interval. left_exp/right_exp are
// used only to bound the contribution beyond the outermost nodes.
Outcome tanh_sinh(const Fn& f, double lo, double hi, double rel_tol, double abs_tol,
                  Budget& budget, int max_level, double left_exp, double right_exp)
{
    const double width = hi - lo;
    const double one_minus_lo = 1.0 - lo;
    const double one_minus_hi = 1.0 - hi;

    double abs_weighted = 0.0;
    double nearest_left = 0.5, nearest_right = 0.5;
    double f_left = 0.0, f_right = 0.0;

    // Sum of w f over abscissae u = j h for the given j range and stride.
    auto accumulate = [&](double h, int j_start, int j_step) {
        CompensatedSum s;
        for (int j = j_start;; j += j_step) {
            const double u = j * h;
            if (u > kMaxAbscissa)
                break;
            const double arg = std::numbers::pi / 2.0 * std::sinh(u);
            const double delta = 1.0 / (1.0 + std::exp(2.0 * arg)); // in (0, 1/2]
            const double d = width * delta;
            if (d == 0.0)
                break;
            const double w = width * std::numbers::pi * std::cosh(u) * delta * (1.0 - delta);
            if (j == 0) {
                const double t = lo + 0.5 * width;
                const double v = checked(f(t, one_minus_lo - 0.5 * width), t) * w;
                s += v;
                abs_weighted += std::abs(v) * h;
                ++budget.used;
                continue;
            }
            const double tr = hi - d;
            const double vr = checked(f(tr, one_minus_hi + d), tr);
            const double tl = lo + d;
            const double vl = checked(f(tl, one_minus_lo - d), tl);
            budget.used += 2;
            s += vr * w;
            s += vl * w;
            abs_weighted += (std::abs(vr) + std::abs(vl)) * w * h;
            if (delta < nearest_right) {
                nearest_right = delta;
                f_right = vr;
                nearest_left = delta;
                f_left = vl;
            }
        }
        return s.value();
    };

    double h = 1.0;
    double estimate = h * accumulate(h, 0, 1);
    double previous = estimate;
    Outcome out;
    for (int level = 1; level <= max_level; ++level) {
        h /= 2.0;
        // New nodes at this level: about kMaxAbscissa / h on each side.
        if (budget.used + 2 * static_cast<long>(kMaxAbscissa / (2.0 * h)) + 2 > budget.limit)
            break;
        previous = estimate;
        estimate = 0.5 * estimate + h * accumulate(h, 1, 2);

        const double tail_left =
            std::abs(f_left) * width * nearest_left / (1.0 + (lo == 0.0 ? left_exp : 0.0));
        const double tail_right =
            std::abs(f_right) * width * nearest_right / (1.0 + (hi == 1.0 ? right_exp : 0.0));
        out.value = estimate;
        out.error = std::abs(estimate - previous) + 4.0 * kEps * abs_weighted + tail_left +
                    tail_right;
        if (level >= 3 && out.error <= std::max(abs_tol, rel_tol * std::abs(estimate))) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

Outcome adaptive(const Fn& f, double lo, double hi, double abs_target, Budget& budget,
                 int depth, double left_exp, double right_exp)
{
    auto out = tanh_sinh(f, lo, hi, 0.0, abs_target, budget, kFallbackLevel, left_exp, right_exp);
    if (out.converged || depth >= kMaxDepth || budget.exhausted())
        return out;
    const double mid = lo + 0.5 * (hi - lo);
    const auto a = adaptive(f, lo, mid, 0.5 * abs_target, budget, depth + 1, left_exp, right_exp);
    const auto b = adaptive(f, mid, hi, 0.5 * abs_target, budget, depth + 1, left_exp, right_exp);
    Outcome r;
    r.value = a.value + b.value;
    r.error = a.error + b.error;
    r.converged = a.converged && b.converged;
    return r;
}

// Fallback path: split at 1/2 and, on a half touching a singular endpoint,
// substitute t = c u^(1/(1+p)) (or the mirror image) so the new integrand is
// bounded, then bisect adaptively.
Outcome fallback(const Fn& f, double abs_target, Budget& budget, double p, double q)
{
    constexpr double c = 0.5;
    Outcome left, right;
    if (p < 0.0) {
        const double alpha = 1.0 / (1.0 + p);
        Fn g = [&f, alpha](double u, double) {
            if (u == 0.0)
                return 0.0;
            const double t = c * std::pow(u, alpha);
            if (t == 0.0) // underflow; the node weight is negligible there
                return 0.0;
            return f(t, 1.0 - t) * c * alpha * std::pow(u, alpha - 1.0);
        };
        left = adaptive(g, 0.0, 1.0, 0.5 * abs_target, budget, 0, 0.0, 0.0);
    } else {
        left = adaptive(f, 0.0, c, 0.5 * abs_target, budget, 0, p, 0.0);
    }
    if (q < 0.0) {
        const double beta = 1.0 / (1.0 + q);
        Fn g = [&f, beta](double v, double) {
            if (v == 0.0)
                return 0.0;
            const double s = (1.0 - c) * std::pow(v, beta);
            if (s == 0.0)
                return 0.0;
            return f(1.0 - s, s) * (1.0 - c) * beta * std::pow(v, beta - 1.0);
        };
        right = adaptive(g, 0.0, 1.0, 0.5 * abs_target, budget, 0, 0.0, 0.0);
    } else {
        right = adaptive(f, c, 1.0, 0.5 * abs_target, budget, 0, 0.0, q);
    }
    Outcome r;
    r.value = left.value + right.value;
    r.error = left.error + right.error;
    r.converged = left.converged && right.converged;
    return r;
}

} // namespace

QuadratureResult integrate(const IntegrandSpec& spec, double rel_tol, double abs_tol,
                           long max_evaluations)
{
    if (!spec.evaluator)
        throw InvalidSpec("integrand has no evaluator");
    if (!(spec.left_exponent > -1.0) || !(spec.right_exponent > -1.0))
        throw InvalidSpec("endpoint exponents must exceed -1");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_evaluations <= 0)
        throw InvalidSpec("tolerances and budget must be positive");

    Budget budget{0, max_evaluations};
    auto first = tanh_sinh(spec.evaluator, 0.0, 1.0, rel_tol, abs_tol, budget, kMaxLevel,
                           spec.left_exponent, spec.right_exponent);
    if (first.converged)
        return {first.value, first.error, budget.used};

    const double target = std::max(abs_tol, rel_tol * std::abs(first.value));
    Budget rest{0, std::max(0L, max_evaluations - budget.used)};
    auto second = fallback(spec.evaluator, target, rest, spec.left_exponent, spec.right_exponent);
    const long used = budget.used + rest.used;
    if (second.converged && second.error <= std::max(abs_tol, rel_tol * std::abs(second.value)))
        return {second.value, second.error, used};

    const auto& best = second.error < first.error ? second : first;
    throw NonConvergence("quadrature did not reach tolerance within " +
                             std::to_string(max_evaluations) + " evaluations",
                         best.value, best.error);
}

double digamma_difference(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw InvalidInput("digamma_difference needs positive finite arguments");
    if (a == b)
        return 0.0;

    // psi(a) - psi(b) = sum_{n>=0} (a - b) / ((n + a)(n + b))
    constexpr int head = 256;
    const double diff = a - b;
    CompensatedSum sum;
    for (int n = head - 1; n >= 0; --n)
        sum += diff / ((n + a) * (n + b));

    // Euler-Maclaurin for the tail starting at x = head. With u = 1/(x+a),
    // v = 1/(x+b): v^k - u^k = (a - b) u v sum_i v^i u^(k-1-i).
    const double x = head;
    const double u = 1.0 / (x + a);
    const double v = 1.0 / (x + b);
    auto power_gap = [&](int k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i)
            s += std::pow(v, i) * std::pow(u, k - 1 - i);
        return diff * u * v * s;
    };
    // f(x) = v - u; f^(m)(x) = (-1)^m m! (v^(m+1) - u^(m+1))
    const double f0 = power_gap(1);
    const double f1 = -power_gap(2);
    const double f3 = -6.0 * power_gap(4);
    const double f5 = -120.0 * power_gap(6);
    const double f7 = -5040.0 * power_gap(8);
    const double integral = std::log1p(diff / (x + b));
    const double tail = integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0 +
                        f7 / 1209600.0;
    sum += tail;
    return sum.value();
}

} // namespace spinchain::quadrature

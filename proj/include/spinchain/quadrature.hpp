#pragma once

#include <functional>

#include "spinchain/errors.hpp"

namespace spinchain::quadrature {

/// Integrand on (0, 1). The evaluator receives t and 1 - t, the latter
/// computed without cancellation so that factors like (1 - t^2) can be formed
/// accurately near the right endpoint. Exponents describe the power-law
/// behaviour t^p at 0+ and (1 - t)^q at 1-; both must exceed -1.
struct IntegrandSpec {
    std::function<double(double t, double one_minus_t)> evaluator;
    double left_exponent = 0.0;
    double right_exponent = 0.0;

    static IntegrandSpec of(std::function<double(double)> f, double left_exponent = 0.0,
                            double right_exponent = 0.0)
    {
        return {[f = std::move(f)](double t, double) { return f(t); }, left_exponent,
                right_exponent};
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

inline constexpr double kDefaultRelTol = 1e-12;
inline constexpr double kDefaultAbsTol = 1e-300;
inline constexpr long kDefaultMaxEvaluations = 2'000'000;

class InvalidSpec : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Tanh-sinh quadrature over [0, 1]; if it fails to meet
/// max(abs_tol, rel_tol |I|) the interval is bisected adaptively. Throws
/// NonConvergence (carrying the best estimate) when the evaluation budget is
/// exhausted and InvalidSpec for exponents <= -1 or non-positive tolerances.
QuadratureResult integrate(const IntegrandSpec& spec, double rel_tol = kDefaultRelTol,
                           double abs_tol = kDefaultAbsTol,
                           long max_evaluations = kDefaultMaxEvaluations);

/// psi(a) - psi(b) for a, b > 0 from sum_{n>=0} [1/(n+b) - 1/(n+a)], with an
/// Euler-Maclaurin tail.
double digamma_difference(double a, double b);

} // namespace spinchain::quadrature

#pragma once

// Closed-form parity gap machinery: region classification, the Fourier
// coefficients u_l + v_l of eps+ + eps-, the integral and series gap
// representations, rigorous finite-size bounds and the correlation length.

#include <string>
#include <string_view>

#include "spinchain/errors.hpp"
#include "spinchain/model.hpp"

namespace spinchain::gap {

enum class Region { Degenerate, Ising, Critical, Paramagnetic };
std::string_view to_string(Region r) noexcept;

/// Default absolute tolerance on a = |g^2 - delta_g^2| when comparing with 0 and 1.
inline constexpr double kDefaultRegionTol = 1e-12;
/// Width of the band around a = 1 where the coefficient series is refused.
inline constexpr double kSlowSeriesBand = 0.01;

struct RegionClass {
    double a;          // |g^2 - delta_g^2|
    double signed_a;   // g^2 - delta_g^2
    Region region;
    double g_max_sq;   // max(g^2, delta_g^2)
    double g_min_sq;   // min(g^2, delta_g^2)
    int sign_factor;   // sign of (g^2 - delta_g^2)^(N/2); +1 when a = 0
};

RegionClass classify(const ModelParams& params, double tol = kDefaultRegionTol);

/// u_l + v_l, the l-th cosine coefficient of eps+_k + eps-_k in cos(2kl).
struct FourierCoefficient {
    int index_l;
    double combined_value;
    double error_estimate;
};

FourierCoefficient fourier_coefficient_sum(int l, const ModelParams& params,
                                           double rel_tol = 1e-12,
                                           double region_tol = kDefaultRegionTol);

struct GapOptions {
    double region_tol = kDefaultRegionTol;
    /// Near-critical points (0 < |a - 1| <= region_tol) raise AmbiguousRegion
    /// instead of being evaluated at the exact field.
    bool strict = false;
    double rel_tol = 1e-12;
};

/// Thrown by gap_integral in strict mode when a lies within tolerance of 1 but
/// not on it. Carries the critical-line value and the exact-field value.
class AmbiguousRegion : public Error {
public:
    AmbiguousRegion(const std::string& what, double critical_value, double adjacent_value,
                    Region adjacent_region)
        : Error(what), critical_value_(critical_value), adjacent_value_(adjacent_value),
          adjacent_region_(adjacent_region)
    {
    }

    double critical_value() const noexcept { return critical_value_; }
    double adjacent_value() const noexcept { return adjacent_value_; }
    Region adjacent_region() const noexcept { return adjacent_region_; }

private:
    double critical_value_;
    double adjacent_value_;
    Region adjacent_region_;
};

/// Gap from the resummed coefficient integral of the region the point falls in.
GapResult gap_integral(const ModelParams& params, const GapOptions& options = {});

/// Gap from the boundary-mode step terms minus (N/2) sum_n (u+v)_{(2n+1)N/2},
/// truncated once the geometric tail bound drops below tol relative to the
/// running total. Throws SlowConvergence within kSlowSeriesBand of a = 1.
GapResult gap_series(const ModelParams& params, double tol = 1e-12,
                     const GapOptions& options = {});

struct BoundPair {
    double lower;
    double upper;
};

/// Bounds on |gap| on the critical hyperbolas. Throws WrongRegion elsewhere.
BoundPair bounds_critical(const ModelParams& params, double region_tol = kDefaultRegionTol);

/// Bounds on |gap| in the Ising region (0 < a < 1). Throws WrongRegion elsewhere.
BoundPair bounds_ising(const ModelParams& params, double region_tol = kDefaultRegionTol);

/// xi = 1 / |ln a|. The proportionality constant is fixed to one by convention.
struct CorrelationLength {
    enum class Kind { Finite, Infinite, ZeroField };
    Kind kind;
    double value; // +inf for Infinite, 0 for ZeroField
};

CorrelationLength correlation_length(double g, double delta_g,
                                     double region_tol = kDefaultRegionTol);
CorrelationLength correlation_length(const ModelParams& params,
                                     double region_tol = kDefaultRegionTol);

namespace testing_support {

struct SplitCoefficients {
    double u; // coefficient of eps+
    double v; // coefficient of eps-
};

/// u_l and v_l separately, by the periodic trapezoid rule in k with `points`
/// nodes over one period. Independent of the contour-integral route.
SplitCoefficients direct_coefficients(int l, double g, double delta_g, int points = 4096);

} // namespace testing_support

} // namespace spinchain::gap

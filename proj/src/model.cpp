#include "spinchain/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spinchain/compensated_sum.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

constexpr double kPi = std::numbers::pi;

// Bulk contribution -1/2 (eps+ + eps-) of both +k and -k.
void append_bulk_terms(std::vector<double>& terms, const MomentumGrid& grid,
                       const ModelParams& params, double sign)
{
    for (double k : grid.momenta) {
        const auto e = dispersion(k, params);
        terms.push_back(-sign * e.eps_plus);
        terms.push_back(-sign * e.eps_minus);
    }
}

void append_boundary_terms(std::vector<double>& terms, const SectorSpec& sector,
                           const BoundaryModeEnergies& b, double sign)
{
    const bool even = sector.half_n_parity() == HalfParity::Even;
    if (sector.parity() == Parity::Negative) {
        // eta_0 occupied; for even N/2 the pi/2 pair sits in its vacuum too.
        if (even)
            terms.push_back(-sign * b.g_half_pi);
        terms.push_back(-sign * b.g0);
    } else if (!even) {
        terms.push_back(-sign * b.g_half_pi);
    }
}

std::vector<double> sector_terms(const SectorSpec& sector, const ModelParams& params,
                                 double sign)
{
    std::vector<double> terms;
    append_bulk_terms(terms, momentum_grid(sector, params), params, sign);
    append_boundary_terms(terms, sector, boundary_modes(params), sign);
    return terms;
}

} // namespace

std::string_view to_string(Parity p) noexcept
{
    return p == Parity::Positive ? "positive" : "negative";
}

std::string_view to_string(GroundParity p) noexcept
{
    switch (p) {
    case GroundParity::Positive:
        return "positive";
    case GroundParity::Negative:
        return "negative";
    case GroundParity::Degenerate:
        return "degenerate";
    }
    return "unknown";
}

std::string_view to_string(GapMethod m) noexcept
{
    switch (m) {
    case GapMethod::DirectSum:
        return "direct";
    case GapMethod::Integral:
        return "integral";
    case GapMethod::Series:
        return "series";
    }
    return "unknown";
}

ModelParams::ModelParams(double g, double delta_g, int n_sites)
    : g_(g), delta_g_(delta_g), n_sites_(n_sites)
{
    if (!std::isfinite(g) || !std::isfinite(delta_g))
        throw InvalidInput("field parameters must be finite");
    if (n_sites < 4 || n_sites % 2 != 0)
        throw InvalidInput("n_sites must be even and >= 4, got " + std::to_string(n_sites));
}

DispersionPair dispersion(double k, double g, double delta_g) noexcept
{
    const double g2 = g * g;
    const double d2 = delta_g * delta_g;
    const double c = std::cos(k);
    const double s = std::sin(k);
    const double outer = 1.0 + g2 + d2;
    const double inner = std::sqrt(g2 * d2 + g2 * c * c + d2 * s * s);
    const double eps_plus = std::sqrt(outer + 2.0 * inner);

    // eps+^2 eps-^2 = 1 + a^2 - 2a cos 2k with a = g^2 - delta_g^2. Written as a
    // sum of squares it stays accurate where eps- is small.
    const double a = (g - delta_g) * (g + delta_g);
    const double product_sq = a >= 0.0 ? (1.0 - a) * (1.0 - a) + 4.0 * a * s * s
                                       : (1.0 + a) * (1.0 + a) - 4.0 * a * c * c;
    return {eps_plus, std::sqrt(product_sq) / eps_plus};
}

DispersionPair dispersion(double k, const ModelParams& params) noexcept
{
    return dispersion(k, params.g(), params.delta_g());
}

BoundaryModeEnergies boundary_modes(const ModelParams& params) noexcept
{
    const double g = params.g();
    const double d = params.delta_g();
    const double g0 = std::hypot(1.0, d);
    const double gh = std::hypot(1.0, g);
    return {g0, gh, g + g0, g - g0, gh + d, gh - d};
}

MomentumGrid momentum_grid(const SectorSpec& sector, const ModelParams& params)
{
    const int n = params.n_sites();
    const int half = n / 2;
    MomentumGrid grid;
    const bool even = sector.half_n_parity() == HalfParity::Even;
    if (sector.parity() == Parity::Positive) {
        // k = (2m+1) pi / N
        const int count = even ? n / 4 : (half - 1) / 2;
        for (int m = 0; m < count; ++m)
            grid.momenta.push_back((2 * m + 1) * kPi / n);
        grid.includes_half_pi = !even;
    } else {
        // k = 2m pi / N
        const int count = even ? n / 4 - 1 : (half - 1) / 2;
        for (int m = 1; m <= count; ++m)
            grid.momenta.push_back(2 * m * kPi / n);
        grid.includes_zero = true;
        grid.includes_half_pi = even;
    }
    return grid;
}

double sector_ground_energy(const SectorSpec& sector, const ModelParams& params)
{
    return sorted_compensated_sum(sector_terms(sector, params, 1.0));
}

GapResult gap_direct_sum(const ModelParams& params)
{
    auto terms = sector_terms(SectorSpec(Parity::Negative, params), params, 1.0);
    const auto positive = sector_terms(SectorSpec(Parity::Positive, params), params, -1.0);
    terms.insert(terms.end(), positive.begin(), positive.end());

    const double magnitude = absolute_sum(terms);
    GapResult r;
    r.value = sorted_compensated_sum(std::move(terms));
    r.method = GapMethod::DirectSum;
    r.error_estimate = 4.0 * std::numeric_limits<double>::epsilon() * magnitude;
    return r;
}

GroundParity ground_state_parity(const ModelParams& params, double tol)
{
    const double a = params.signed_field_gap();
    if (std::abs(a) <= tol)
        return GroundParity::Degenerate;
    if (a < 0.0 && params.half_n_parity() == HalfParity::Odd)
        return GroundParity::Negative;
    return GroundParity::Positive;
}

CandidateEnergies negative_parity_candidates(const ModelParams& params)
{
    if (params.half_n_parity() != HalfParity::Even)
        throw InvalidInput("negative-parity candidates need even N/2");
    const SectorSpec sector(Parity::Negative, params);
    const auto grid = momentum_grid(sector, params);
    if (grid.momenta.empty())
        throw InvalidInput("negative-parity candidates need at least one bulk momentum (N >= 8)");

    std::vector<double> bulk;
    append_bulk_terms(bulk, grid, params, 1.0);
    const double base = sorted_compensated_sum(bulk);

    double k_prime = grid.momenta.front();
    double lowest = std::numeric_limits<double>::infinity();
    for (double k : grid.momenta) {
        const double em = dispersion(k, params).eps_minus;
        if (em < lowest) {
            lowest = em;
            k_prime = k;
        }
    }

    const auto b = boundary_modes(params);
    CandidateEnergies c;
    // Occupying (k', -) turns its -1/2 eps- into +1/2 eps-.
    c.e1 = base + lowest - params.g() - b.g_half_pi;
    c.e2 = base - b.g0 - b.g_half_pi;
    c.k_prime = k_prime;
    return c;
}

} // namespace spinchain

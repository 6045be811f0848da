#pragma once

// Free-fermion description of the periodic Ising ring with a period-2
// alternating transverse field
//
//   H = -1/2 sum_j [ sx_j sx_{j+1} + (g - (-1)^j delta_g) sz_j ],  j = 1..N.
//
// Only energies are provided: momentum grids per parity sector, the two-band
// dispersion, the k = 0 and k = pi/2 boundary modes, and the sector ground
// energies built from them.

#include <string_view>
#include <vector>

namespace spinchain {

/// Absolute tolerance on |g^2 - delta_g^2| below which the field is treated
/// as degenerate (zero on one sublattice).
inline constexpr double kDefaultDegeneracyTol = 1e-12;

enum class Parity { Positive, Negative };
enum class HalfParity { Even, Odd };
enum class GroundParity { Positive, Negative, Degenerate };

std::string_view to_string(Parity p) noexcept;
std::string_view to_string(GroundParity p) noexcept;

class ModelParams {
public:
    /// Throws InvalidInput unless n_sites is even, >= 4 and both fields are finite.
    ModelParams(double g, double delta_g, int n_sites);

    double g() const noexcept { return g_; }
    double delta_g() const noexcept { return delta_g_; }
    int n_sites() const noexcept { return n_sites_; }
    int half_n() const noexcept { return n_sites_ / 2; }
    HalfParity half_n_parity() const noexcept
    {
        return half_n() % 2 == 0 ? HalfParity::Even : HalfParity::Odd;
    }

    /// g^2 - delta_g^2, evaluated as (g - delta_g)(g + delta_g) so that it is
    /// exactly zero on the lines g = +-delta_g.
    double signed_field_gap() const noexcept { return (g_ - delta_g_) * (g_ + delta_g_); }

private:
    double g_;
    double delta_g_;
    int n_sites_;
};

/// Parity sector of a chain. The N/2 parity always comes from the model.
class SectorSpec {
public:
    SectorSpec(Parity parity, const ModelParams& params) noexcept
        : parity_(parity), half_n_parity_(params.half_n_parity())
    {
    }

    Parity parity() const noexcept { return parity_; }
    HalfParity half_n_parity() const noexcept { return half_n_parity_; }

private:
    Parity parity_;
    HalfParity half_n_parity_;
};

/// Allowed fermion momenta of a sector. `momenta` holds the bulk values in
/// (0, pi/2), ascending; each stands for the pair +-k. The special points
/// 0 and pi/2 are flagged separately.
struct MomentumGrid {
    std::vector<double> momenta;
    bool includes_zero = false;
    bool includes_half_pi = false;

    /// Pairs counted twice, special points once. Always N/2.
    int mode_count() const noexcept
    {
        return 2 * static_cast<int>(momenta.size()) + (includes_zero ? 1 : 0) +
               (includes_half_pi ? 1 : 0);
    }
};

struct DispersionPair {
    double eps_plus;
    double eps_minus;
};

struct BoundaryModeEnergies {
    double g0;              // sqrt(1 + delta_g^2)
    double g_half_pi;       // sqrt(1 + g^2)
    double eps0_plus;       // g + g0
    double eps0_minus;      // g - g0
    double eps_half_pi_plus;  // g_half_pi + delta_g
    double eps_half_pi_minus; // g_half_pi - delta_g
};

/// Lowest negative-parity energies with the odd excitation placed in the
/// bulk (e1) or in the eta mode at k = 0 (e2). Only defined for even N/2.
struct CandidateEnergies {
    double e1;
    double e2;
    double k_prime; // bulk momentum that minimises eps_minus
};

enum class GapMethod { DirectSum, Integral, Series };
std::string_view to_string(GapMethod m) noexcept;

/// Signed gap e_negative - e_positive.
struct GapResult {
    double value = 0.0;
    GapMethod method = GapMethod::DirectSum;
    double error_estimate = 0.0;
    std::string_view note; // empty, or a static diagnostic string
};

DispersionPair dispersion(double k, double g, double delta_g) noexcept;
DispersionPair dispersion(double k, const ModelParams& params) noexcept;

BoundaryModeEnergies boundary_modes(const ModelParams& params) noexcept;

MomentumGrid momentum_grid(const SectorSpec& sector, const ModelParams& params);

double sector_ground_energy(const SectorSpec& sector, const ModelParams& params);

/// e_negative - e_positive from the momentum sums, accumulated in one
/// magnitude-sorted compensated sum.
GapResult gap_direct_sum(const ModelParams& params);

GroundParity ground_state_parity(const ModelParams& params,
                                 double tol = kDefaultDegeneracyTol);

/// Throws InvalidInput for odd N/2 and for N = 4 (no bulk momenta).
CandidateEnergies negative_parity_candidates(const ModelParams& params);

} // namespace spinchain

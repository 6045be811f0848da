#pragma once

// Brute-force reference for the spin chain: the full 2^N Hamiltonian, split
// into the two eigenspaces of P = prod_j sz_j.
//
// Basis convention: bit (j - 1) of a state index encodes site j, a set bit
// is a down spin (sz = -1). Site j carries the field g - (-1)^j delta_g, so
// odd sites see g + delta_g and even sites g - delta_g.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spinchain/model.hpp"

namespace spinchain::ed {

inline constexpr int kMinSites = 4;
inline constexpr int kMaxSites = 14;
/// Largest N whose sector blocks are diagonalised densely.
inline constexpr int kMaxDenseSites = 10;

using State = std::uint32_t;

class DenseSpinHamiltonian {
public:
    explicit DenseSpinHamiltonian(const ModelParams& params);

    int n_sites() const noexcept { return n_sites_; }
    std::size_t dimension() const noexcept { return std::size_t{1} << n_sites_; }
    const ModelParams& params() const noexcept { return params_; }

    /// Transverse field on site j (1-based).
    double site_field(int j) const { return fields_.at(static_cast<std::size_t>(j - 1)); }

    double diagonal(State s) const noexcept;

    /// Every state connected to `s` by one bond term; the matrix element is -1/2.
    template <class F>
    void for_each_neighbor(State s, F&& f) const
    {
        for (int j = 0; j < n_sites_; ++j) {
            const State mask = (State{1} << j) | (State{1} << ((j + 1) % n_sites_));
            f(s ^ mask);
        }
    }

    static constexpr double kBondElement = -0.5;

    /// y = H x on the full space.
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    ModelParams params_;
    int n_sites_;
    std::vector<double> fields_;
};

/// Throws InvalidInput outside 4 <= N <= 14.
DenseSpinHamiltonian build_hamiltonian(const ModelParams& params);

/// States of one parity sector in increasing order, with the inverse map.
struct SectorBasis {
    std::vector<State> states;
    std::vector<std::int32_t> index_of; // -1 for states outside the sector
};

SectorBasis sector_basis(int n_sites, Parity parity);

/// Matrix-free H restricted to a parity sector.
void apply_sector(const DenseSpinHamiltonian& h, const SectorBasis& basis,
                  std::span<const double> x, std::span<double> y);

struct LanczosOptions {
    double residual_tol = 1e-10;
    int krylov_dim = 120;
    int max_restarts = 30;
    unsigned seed = 12345;
};

struct LanczosResult {
    double eigenvalue;
    double residual;
    int iterations;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Lowest eigenvalue of a symmetric operator via restarted Lanczos with full
/// reorthogonalisation. Throws NonConvergence carrying the residual norm.
LanczosResult lowest_eigenvalue(const LinearOperator& apply, std::size_t dim,
                                const LanczosOptions& options = {});

struct EDSectorEnergies {
    double e_positive;
    double e_negative;
    double gap; // e_negative - e_positive
};

/// Dense eigensolve of each block for N <= 10, Lanczos above.
EDSectorEnergies sector_ground_energies(const DenseSpinHamiltonian& h,
                                        const LanczosOptions& options = {});

/// Full ascending spectrum of one parity block (N <= 10 only).
std::vector<double> sector_spectrum(const DenseSpinHamiltonian& h, Parity parity);

} // namespace spinchain::ed

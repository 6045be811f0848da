#include <catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "spinchain/ed.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/gap.hpp"
#include "spinchain/model.hpp"

using namespace spinchain;
using namespace spinchain::ed;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double analytic(Parity p, const ModelParams& m)
{
    return sector_ground_energy(SectorSpec(p, m), m);
}

std::vector<double> column(const DenseSpinHamiltonian& h, State s)
{
    std::vector<double> x(h.dimension(), 0.0), y(h.dimension());
    x[s] = 1.0;
    h.apply(x, y);
    return y;
}

} // namespace

TEST_CASE("sizes outside the supported range are rejected", "[ed]")
{
    CHECK_THROWS_AS(build_hamiltonian(ModelParams(0.5, 0.3, 16)), InvalidInput);
    CHECK_NOTHROW(build_hamiltonian(ModelParams(0.5, 0.3, 4)));
    CHECK_THROWS_AS(sector_spectrum(build_hamiltonian(ModelParams(0.5, 0.3, 12)),
                                    Parity::Positive),
                    InvalidInput);
}

TEST_CASE("site fields alternate starting with g + delta on site 1", "[ed]")
{
    const auto h = build_hamiltonian(ModelParams(0.5, 0.3, 6));
    CHECK(h.site_field(1) == 0.8);
    CHECK(h.site_field(2) == 0.2);
    CHECK(h.site_field(5) == 0.8);
    CHECK(h.site_field(6) == 0.2);
    // All spins up: -1/2 sum of fields.
    CHECK_THAT(h.diagonal(0), WithinAbs(-0.5 * 3 * (0.8 + 0.2), 1e-15));
    // Site 1 down flips its contribution.
    CHECK_THAT(h.diagonal(1), WithinAbs(-0.5 * (3 * 1.0 - 2 * 0.8), 1e-15));
}

TEST_CASE("Hamiltonian is symmetric with -1/2 bond elements", "[ed]")
{
    const auto h = build_hamiltonian(ModelParams(0.7, -0.4, 6));
    const auto dim = h.dimension();
    std::vector<std::vector<double>> cols;
    for (State s = 0; s < dim; ++s)
        cols.push_back(column(h, s));
    for (State i = 0; i < dim; ++i) {
        for (State j = 0; j < dim; ++j) {
            REQUIRE(cols[i][j] == cols[j][i]);
            if (i != j && cols[i][j] != 0.0) {
                REQUIRE(cols[i][j] == -0.5);
                const State diff = i ^ j;
                REQUIRE(std::popcount(diff) == 2);
            }
        }
    }
    // Wrap bond connects sites N and 1.
    CHECK(cols[0][0b100001] == -0.5);
}

TEST_CASE("parity blocks are decoupled", "[ed][property]")
{
    for (int n = 4; n <= 10; n += 2) {
        const auto h = build_hamiltonian(ModelParams(0.3, 0.9, n));
        for (State s = 0; s < h.dimension(); ++s)
            h.for_each_neighbor(s, [&](State t) {
                REQUIRE(std::popcount(s) % 2 == std::popcount(t) % 2);
            });
    }
    const auto basis = sector_basis(8, Parity::Negative);
    CHECK(basis.states.size() == 128);
    for (std::size_t i = 0; i < basis.states.size(); ++i)
        REQUIRE(basis.index_of[basis.states[i]] == static_cast<std::int32_t>(i));
}

TEST_CASE("limiting cases", "[ed]")
{
    const auto zero = sector_ground_energies(build_hamiltonian(ModelParams(0.0, 0.0, 4)));
    CHECK_THAT(zero.e_positive, WithinAbs(-2.0, 1e-12));
    CHECK_THAT(zero.e_negative, WithinAbs(-2.0, 1e-12));
    CHECK_THAT(zero.gap, WithinAbs(0.0, 1e-12));

    const auto polar = sector_ground_energies(build_hamiltonian(ModelParams(100.0, 0.0, 4)));
    CHECK_THAT(std::min(polar.e_positive, polar.e_negative), WithinRel(-200.0, 1e-4));
}

TEST_CASE("sector energies agree with the free-fermion formulas", "[ed]")
{
    const ModelParams p(0.5, 0.3, 8);
    const auto e = sector_ground_energies(build_hamiltonian(p));
    CHECK_THAT(e.e_positive, WithinAbs(analytic(Parity::Positive, p), 1e-10));
    CHECK_THAT(e.e_negative, WithinAbs(analytic(Parity::Negative, p), 1e-10));
    CHECK_THAT(e.gap, WithinAbs(gap_direct_sum(p).value, 1e-10));

    const auto odd = sector_ground_energies(build_hamiltonian(ModelParams(0.4, 0.9, 6)));
    CHECK(odd.e_negative < odd.e_positive);

    const ModelParams c(std::sqrt(2.0), 1.0, 8);
    const auto ec = sector_ground_energies(build_hamiltonian(c));
    const auto b = gap::bounds_critical(c);
    CHECK(std::abs(ec.gap) >= b.lower);
    CHECK(std::abs(ec.gap) <= b.upper);
}

TEST_CASE("spectrum is invariant under delta -> -delta", "[ed][property]")
{
    for (int n : {4, 6, 8}) {
        for (auto [g, d] : {std::pair{0.5, 0.3}, {1.2, 0.7}, {-0.4, 1.6}}) {
            const auto a = build_hamiltonian(ModelParams(g, d, n));
            const auto b = build_hamiltonian(ModelParams(g, -d, n));
            for (Parity par : {Parity::Positive, Parity::Negative}) {
                const auto sa = sector_spectrum(a, par);
                const auto sb = sector_spectrum(b, par);
                REQUIRE(sa.size() == sb.size());
                for (std::size_t i = 0; i < sa.size(); ++i)
                    REQUIRE_THAT(sa[i], WithinAbs(sb[i], 1e-10));
            }
        }
    }
}

TEST_CASE("ED matches the formulas on a 9x9 grid", "[ed][property]")
{
    for (int n : {4, 6, 8, 10, 12}) {
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < 9; ++j) {
                const double g = -2.0 + 0.5 * i, d = -2.0 + 0.5 * j;
                const ModelParams p(g, d, n);
                const auto e = sector_ground_energies(build_hamiltonian(p));
                INFO("g=" << g << " delta=" << d << " N=" << n);
                REQUIRE_THAT(e.e_positive, WithinAbs(analytic(Parity::Positive, p), 1e-8));
                REQUIRE_THAT(e.e_negative, WithinAbs(analytic(Parity::Negative, p), 1e-8));
                const auto gp = ground_state_parity(p);
                if (gp == GroundParity::Degenerate)
                    REQUIRE_THAT(e.gap, WithinAbs(0.0, 1e-10));
                else if (gp == GroundParity::Positive)
                    REQUIRE(e.gap > 0.0);
                else
                    REQUIRE(e.gap < 0.0);
            }
        }
    }
}

TEST_CASE("Lanczos agrees with dense diagonalisation", "[ed][lanczos]")
{
    const auto h = build_hamiltonian(ModelParams(0.9, 0.4, 10));
    for (Parity par : {Parity::Positive, Parity::Negative}) {
        const auto basis = sector_basis(10, par);
        const auto r = lowest_eigenvalue(
            [&](std::span<const double> x, std::span<double> y) { apply_sector(h, basis, x, y); },
            basis.states.size());
        CHECK(r.residual < 1e-10);
        CHECK_THAT(r.eigenvalue, WithinAbs(sector_spectrum(h, par).front(), 1e-10));
    }

    // Diagonal operator with known minimum; small Krylov spaces force restarts.
    const std::size_t dim = 300;
    auto diag = [](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = (1.0 + static_cast<double>(i)) * x[i];
    };
    LanczosOptions opts;
    opts.krylov_dim = 20;
    opts.max_restarts = 200;
    const auto r = lowest_eigenvalue(diag, dim, opts);
    CHECK_THAT(r.eigenvalue, WithinAbs(1.0, 1e-10));

    LanczosOptions starved;
    starved.krylov_dim = 3;
    starved.max_restarts = 0;
    try {
        lowest_eigenvalue(diag, dim, starved);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.error_estimate() > starved.residual_tol);
    }
    CHECK_THROWS_AS(lowest_eigenvalue(diag, 0), InvalidInput);
}

TEST_CASE("spectra are sorted and start at the sector ground energy", "[ed]")
{
    const ModelParams p(1.1, 0.2, 8);
    const auto h = build_hamiltonian(p);
    const auto e = sector_ground_energies(h);
    const auto pos = sector_spectrum(h, Parity::Positive);
    const auto neg = sector_spectrum(h, Parity::Negative);
    CHECK(pos.size() == 128);
    CHECK(neg.size() == 128);
    CHECK(std::is_sorted(pos.begin(), pos.end()));
    CHECK(pos.front() == e.e_positive);
    CHECK(neg.front() == e.e_negative);
}

#include "spinchain/ed.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "spinchain/errors.hpp"

namespace spinchain::ed {

namespace {

Eigen::MatrixXd dense_block(const DenseSpinHamiltonian& h, const SectorBasis& basis)
{
    const auto dim = static_cast<Eigen::Index>(basis.states.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const State s = basis.states[static_cast<std::size_t>(col)];
        m(col, col) = h.diagonal(s);
        h.for_each_neighbor(s, [&](State t) {
            const auto row = basis.index_of[t];
            if (row < 0)
                throw std::logic_error("bond term left its parity sector");
            m(row, col) += DenseSpinHamiltonian::kBondElement;
        });
    }
    return m;
}

double block_ground_energy(const DenseSpinHamiltonian& h, Parity parity,
                           const LanczosOptions& options)
{
    const auto basis = sector_basis(h.n_sites(), parity);
    if (h.n_sites() <= kMaxDenseSites) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_block(h, basis),
                                                          Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NonConvergence("dense eigensolver failed", 0.0,
                                 std::numeric_limits<double>::infinity());
        return es.eigenvalues()(0);
    }
    auto op = [&](std::span<const double> x, std::span<double> y) { apply_sector(h, basis, x, y); };
    return lowest_eigenvalue(op, basis.states.size(), options).eigenvalue;
}

} // namespace

DenseSpinHamiltonian::DenseSpinHamiltonian(const ModelParams& params)
    : params_(params), n_sites_(params.n_sites())
{
    if (n_sites_ < kMinSites || n_sites_ > kMaxSites)
        throw InvalidInput("exact diagonalisation supports 4 <= N <= 14, got " +
                           std::to_string(n_sites_));
    fields_.resize(static_cast<std::size_t>(n_sites_));
    for (int j = 1; j <= n_sites_; ++j)
        fields_[static_cast<std::size_t>(j - 1)] =
            j % 2 == 1 ? params.g() + params.delta_g() : params.g() - params.delta_g();
}

double DenseSpinHamiltonian::diagonal(State s) const noexcept
{
    double e = 0.0;
    for (int j = 0; j < n_sites_; ++j) {
        const double sz = (s >> j) & 1U ? -1.0 : 1.0;
        e += fields_[static_cast<std::size_t>(j)] * sz;
    }
    return -0.5 * e;
}

void DenseSpinHamiltonian::apply(std::span<const double> x, std::span<double> y) const
{
    const std::size_t dim = dimension();
    if (x.size() != dim || y.size() != dim)
        throw InvalidInput("vector size does not match the Hilbert space");
    for (State s = 0; s < dim; ++s) {
        double acc = diagonal(s) * x[s];
        for_each_neighbor(s, [&](State t) { acc += kBondElement * x[t]; });
        y[s] = acc;
    }
}

DenseSpinHamiltonian build_hamiltonian(const ModelParams& params)
{
    return DenseSpinHamiltonian(params);
}

SectorBasis sector_basis(int n_sites, Parity parity)
{
    if (n_sites < 1 || n_sites > kMaxSites)
        throw InvalidInput("sector basis size out of range");
    const State dim = State{1} << n_sites;
    const int wanted = parity == Parity::Positive ? 0 : 1;
    SectorBasis b;
    b.index_of.assign(dim, -1);
    b.states.reserve(dim / 2);
    for (State s = 0; s < dim; ++s) {
        if (std::popcount(s) % 2 == wanted) {
            b.index_of[s] = static_cast<std::int32_t>(b.states.size());
            b.states.push_back(s);
        }
    }
    return b;
}

void apply_sector(const DenseSpinHamiltonian& h, const SectorBasis& basis,
                  std::span<const double> x, std::span<double> y)
{
    const std::size_t dim = basis.states.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const State s = basis.states[i];
        double acc = h.diagonal(s) * x[i];
        h.for_each_neighbor(s, [&](State t) {
            acc += DenseSpinHamiltonian::kBondElement *
                   x[static_cast<std::size_t>(basis.index_of[t])];
        });
        y[i] = acc;
    }
}

LanczosResult lowest_eigenvalue(const LinearOperator& apply, std::size_t dim,
                                const LanczosOptions& options)
{
    if (dim == 0)
        throw InvalidInput("empty operator");
    using Eigen::Index;
    using Eigen::VectorXd;
    const Index n = static_cast<Index>(dim);
    const Index m = std::min<Index>(options.krylov_dim, n);

    std::mt19937 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VectorXd start(n);
    for (Index i = 0; i < n; ++i)
        start(i) = uniform(rng);
    start.normalize();

    Eigen::MatrixXd basis(n, m);
    VectorXd w(n);
    double residual = std::numeric_limits<double>::infinity();
    double theta = 0.0;
    int iterations = 0;

    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        VectorXd alpha = VectorXd::Zero(m);
        VectorXd beta = VectorXd::Zero(m);
        basis.col(0) = start;
        Index steps = 0;
        bool invariant = false;
        for (Index j = 0; j < m; ++j) {
            apply(std::span<const double>(basis.col(j).data(), dim),
                  std::span<double>(w.data(), dim));
            ++iterations;
            alpha(j) = basis.col(j).dot(w);
            // Full reorthogonalisation, applied twice.
            for (int pass = 0; pass < 2; ++pass)
                w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
            beta(j) = w.norm();
            steps = j + 1;
            if (beta(j) <= 1e-13 * std::max(1.0, std::abs(alpha(j)))) {
                invariant = true;
                break;
            }
            if (j + 1 < m)
                basis.col(j + 1) = w / beta(j);
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        const VectorXd sub = steps > 1 ? VectorXd(beta.head(steps - 1)) : VectorXd();
        tri.computeFromTridiagonal(alpha.head(steps), sub, Eigen::ComputeEigenvectors);
        theta = tri.eigenvalues()(0);
        const VectorXd y = tri.eigenvectors().col(0);
        residual = invariant ? 0.0 : std::abs(beta(steps - 1) * y(steps - 1));
        if (residual < options.residual_tol)
            return {theta, residual, iterations};

        start = basis.leftCols(steps) * y;
        start.normalize();
    }
    throw NonConvergence("Lanczos did not converge, residual " + std::to_string(residual), theta,
                         residual);
}

EDSectorEnergies sector_ground_energies(const DenseSpinHamiltonian& h,
                                        const LanczosOptions& options)
{
    EDSectorEnergies r;
    r.e_positive = block_ground_energy(h, Parity::Positive, options);
    r.e_negative = block_ground_energy(h, Parity::Negative, options);
    r.gap = r.e_negative - r.e_positive;
    return r;
}

std::vector<double> sector_spectrum(const DenseSpinHamiltonian& h, Parity parity)
{
    if (h.n_sites() > kMaxDenseSites)
        throw InvalidInput("full spectra are limited to N <= 10");
    const auto basis = sector_basis(h.n_sites(), parity);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_block(h, basis),
                                                      Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

} // namespace spinchain::ed

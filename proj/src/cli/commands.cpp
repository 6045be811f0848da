#include "spinchain/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "spinchain/ed.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/gap.hpp"
#include "spinchain/model.hpp"

namespace spinchain::cli {

namespace {

std::string describe(const std::exception& e)
{
    if (dynamic_cast<const gap::AmbiguousRegion*>(&e))
        return std::string("ambiguous region: ") + e.what();
    if (dynamic_cast<const NonConvergence*>(&e) || dynamic_cast<const SlowConvergence*>(&e))
        return std::string("non-convergence: ") + e.what();
    if (dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const WrongRegion*>(&e))
        return std::string("invalid input: ") + e.what();
    return std::string("error: ") + e.what();
}

unsigned resolve_threads(unsigned requested, std::size_t jobs)
{
    unsigned t = requested ? requested : std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on a pool of workers. Each job writes only
// its own slot, so the caller sees results in index order.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job job)
{
    const unsigned workers = resolve_threads(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                job(i);
        });
    for (auto& t : pool)
        t.join();
}

std::vector<double> grid_axis(std::pair<double, double> range, int steps)
{
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        v[static_cast<std::size_t>(i)] =
            i == steps - 1 ? range.second
                           : range.first + (range.second - range.first) * i / (steps - 1);
    return v;
}

std::vector<std::string> gap_columns()
{
    auto cols = sweep_columns();
    for (const char* extra :
         {"gap_series", "dev_direct_integral", "dev_direct_series", "dev_integral_series"})
        cols.emplace_back(extra);
    return cols;
}

std::optional<double> deviation(const std::optional<double>& x, const std::optional<double>& y)
{
    if (!x || !y)
        return std::nullopt;
    return std::abs(*x - *y);
}

void check_common(const CommonOptions& o)
{
    if (!(o.tol > 0.0) || !std::isfinite(o.tol))
        throw InvalidInput("--tol must be positive");
}

// Region, a, bounds, correlation length and ground parity of one point.
void fill_classification(SweepRecord& r, const ModelParams& params, double tol)
{
    const auto rc = gap::classify(params, tol);
    r.a = rc.a;
    r.region = std::string(gap::to_string(rc.region));
    r.ground_parity = std::string(to_string(ground_state_parity(params, tol)));
    if (rc.region == gap::Region::Critical) {
        const auto b = gap::bounds_critical(params, tol);
        r.lower_bound = b.lower;
        r.upper_bound = b.upper;
    } else if (rc.region == gap::Region::Ising) {
        const auto b = gap::bounds_ising(params, tol);
        r.lower_bound = b.lower;
        r.upper_bound = b.upper;
    }
    const auto xi = gap::correlation_length(params, tol);
    if (xi.kind == gap::CorrelationLength::Kind::Finite)
        r.xi = xi.value;
}

struct Fit {
    std::string kind;
    std::optional<double> value;
    std::optional<double> intercept;
    std::optional<double> residual;
    std::optional<double> reference;
    std::int64_t points = 0;
    std::string warning;
};

Fit fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    Fit f;
    f.kind = "slope";
    f.points = static_cast<std::int64_t>(x.size());
    if (x.size() < 2) {
        f.warning = "fewer than two points with a nonzero gap";
        return f;
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        f.warning = "all sizes identical";
        return f;
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss += r * r;
    }
    f.value = slope;
    f.intercept = intercept;
    f.residual = std::sqrt(ss / n);
    return f;
}

Fit fit_constant(const std::vector<double>& y)
{
    Fit f;
    f.kind = "constant";
    f.points = static_cast<std::int64_t>(y.size());
    if (y.empty()) {
        f.warning = "no points";
        return f;
    }
    double mean = 0.0;
    for (double v : y)
        mean += v;
    mean /= static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y)
        ss += (v - mean) * (v - mean);
    f.value = mean;
    f.residual = std::sqrt(ss / static_cast<double>(y.size()));
    return f;
}

Table fit_table(const Fit& f)
{
    Table t;
    t.columns = {"fit", "value", "intercept", "residual", "reference", "points", "warning"};
    t.rows.push_back({f.kind, optional_cell(f.value), optional_cell(f.intercept),
                      optional_cell(f.residual), optional_cell(f.reference), f.points,
                      f.warning.empty() ? Cell{} : Cell{f.warning}});
    return t;
}

} // namespace

int exit_code_for(const std::exception& e) noexcept
{
    if (dynamic_cast<const gap::AmbiguousRegion*>(&e))
        return kExitAmbiguousRegion;
    if (dynamic_cast<const NonConvergence*>(&e) || dynamic_cast<const SlowConvergence*>(&e))
        return kExitNonConvergence;
    return kExitInvalidInput;
}

std::pair<double, double> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos)
        throw InvalidInput("range must look like lo:hi, got '" + text + "'");
    auto parse = [&](const std::string& part) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw InvalidInput("bad number '" + part + "' in range '" + text + "'");
        }
        if (used != part.size() || !std::isfinite(v))
            throw InvalidInput("bad number '" + part + "' in range '" + text + "'");
        return v;
    };
    return {parse(text.substr(0, colon)), parse(text.substr(colon + 1))};
}

std::vector<int> parse_n_list(const std::string& text)
{
    auto to_int = [&](std::string_view part) {
        int v = 0;
        const auto* end = part.data() + part.size();
        const auto [ptr, ec] = std::from_chars(part.data(), end, v);
        if (ec != std::errc() || ptr != end)
            throw InvalidInput("bad size '" + std::string(part) + "' in '" + text + "'");
        return v;
    };
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<int> parts;
        std::string_view rest = text;
        while (true) {
            const auto c = rest.find(':');
            parts.push_back(to_int(rest.substr(0, c)));
            if (c == std::string_view::npos)
                break;
            rest.remove_prefix(c + 1);
        }
        if (parts.size() != 3 || parts[2] <= 0 || parts[1] < parts[0])
            throw InvalidInput("size range must be first:last:step, got '" + text + "'");
        for (int n = parts[0]; n <= parts[1]; n += parts[2])
            out.push_back(n);
    } else {
        std::string_view rest = text;
        while (!rest.empty()) {
            const auto c = rest.find(',');
            out.push_back(to_int(rest.substr(0, c)));
            if (c == std::string_view::npos)
                break;
            rest.remove_prefix(c + 1);
        }
    }
    if (out.empty())
        throw InvalidInput("empty size list");
    for (int n : out)
        if (n < 4 || n % 2 != 0)
            throw InvalidInput("chain sizes must be even and >= 4, got " + std::to_string(n));
    return out;
}

SweepRecord compute_record(double g, double delta_g, int n, const CommonOptions& options,
                           bool capture_errors)
{
    SweepRecord r;
    r.g = g;
    r.delta_g = delta_g;
    r.n_sites = n;
    try {
        check_common(options);
        const ModelParams params(g, delta_g, n);
        fill_classification(r, params, options.tol);
        r.gap_direct = gap_direct_sum(params).value;
        r.gap_integral =
            gap::gap_integral(params, {options.tol, options.strict, 1e-12}).value;
    } catch (const std::exception& e) {
        if (!capture_errors)
            throw;
        r.error = describe(e);
    }
    return r;
}

int run_gap(const GapCommand& cmd, std::ostream& out, std::ostream& err)
{
    try {
        check_common(cmd.common);
        const ModelParams params(cmd.g, cmd.delta_g, cmd.n);
        const gap::GapOptions gopts{cmd.common.tol, cmd.common.strict, 1e-12};

        SweepRecord r;
        r.g = cmd.g;
        r.delta_g = cmd.delta_g;
        r.n_sites = cmd.n;
        fill_classification(r, params, cmd.common.tol);

        r.gap_direct = gap_direct_sum(params).value;
        const bool all = cmd.method == MethodFlag::All;
        if (cmd.method == MethodFlag::Integral || all) {
            const auto gi = gap::gap_integral(params, gopts);
            r.gap_integral = gi.value;
            if (!gi.note.empty())
                err << "warning: " << gi.note << '\n';
        }
        std::optional<double> series;
        if (cmd.method == MethodFlag::Series || all) {
            try {
                series = gap::gap_series(params, 1e-12, gopts).value;
            } catch (const SlowConvergence& e) {
                if (!all)
                    throw;
                r.error = std::string("series: ") + e.what();
                err << "warning: " << r.error << '\n';
            }
        }

        Table t;
        t.columns = gap_columns();
        auto row = to_row(r);
        row.push_back(optional_cell(series));
        if (all) {
            row.push_back(optional_cell(deviation(r.gap_direct, r.gap_integral)));
            row.push_back(optional_cell(deviation(r.gap_direct, series)));
            row.push_back(optional_cell(deviation(r.gap_integral, series)));
        } else {
            row.insert(row.end(), 3, Cell{});
        }
        t.rows.push_back(std::move(row));
        write_table(out, t, cmd.common.format);
        return kExitOk;
    } catch (const gap::AmbiguousRegion& e) {
        err << describe(e) << " (critical-line value " << format_real(e.critical_value())
            << ", " << gap::to_string(e.adjacent_region()) << " value "
            << format_real(e.adjacent_value()) << ")\n";
        return kExitAmbiguousRegion;
    } catch (const std::exception& e) {
        err << describe(e) << '\n';
        return exit_code_for(e);
    }
}

int run_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err)
{
    try {
        check_common(cmd.common);
        if (cmd.steps < 2)
            throw InvalidInput("--steps must be at least 2");
        for (double v : {cmd.g_range.first, cmd.g_range.second, cmd.delta_range.first,
                         cmd.delta_range.second})
            if (!std::isfinite(v))
                throw InvalidInput("ranges must be finite");
        if (cmd.n < 4 || cmd.n % 2 != 0)
            throw InvalidInput("--n must be even and >= 4");
    } catch (const std::exception& e) {
        err << describe(e) << '\n';
        return exit_code_for(e);
    }

    const auto gs = grid_axis(cmd.g_range, cmd.steps);
    const auto ds = grid_axis(cmd.delta_range, cmd.steps);
    const std::size_t count = gs.size() * ds.size();
    std::vector<SweepRecord> records(count);
    parallel_for(count, cmd.threads, [&](std::size_t i) {
        records[i] = compute_record(gs[i / ds.size()], ds[i % ds.size()], cmd.n, cmd.common, true);
    });

    Table t;
    t.columns = sweep_columns();
    t.rows.reserve(count);
    for (const auto& r : records)
        t.rows.push_back(to_row(r));
    write_table(out, t, cmd.common.format);
    return kExitOk;
}

int run_scaling(const ScalingCommand& cmd, std::ostream& out, std::ostream& err)
{
    try {
        check_common(cmd.common);
        if (cmd.n_list.empty())
            throw InvalidInput("--n-list is required");
        const gap::GapOptions gopts{cmd.common.tol, cmd.common.strict, 1e-12};

        Table rows;
        rows.columns = {"n_sites", "gap", "n_gap", "ln_abs_gap", "lower_bound", "upper_bound",
                        "method"};
        std::vector<double> xs, ys, n_gaps;
        std::optional<gap::Region> region;
        for (int n : cmd.n_list) {
            const ModelParams params(cmd.g, cmd.delta_g, n);
            const auto rc = gap::classify(params, cmd.common.tol);
            region = rc.region;
            // Exponentially small Ising gaps are below the direct sum's resolution.
            GapResult gr = rc.region == gap::Region::Ising || rc.region == gap::Region::Paramagnetic
                               ? gap::gap_integral(params, gopts)
                               : gap_direct_sum(params);
            std::optional<double> lower, upper, ln_gap;
            if (rc.region == gap::Region::Critical) {
                const auto b = gap::bounds_critical(params, cmd.common.tol);
                lower = b.lower;
                upper = b.upper;
            } else if (rc.region == gap::Region::Ising) {
                const auto b = gap::bounds_ising(params, cmd.common.tol);
                lower = b.lower;
                upper = b.upper;
            }
            if (gr.value != 0.0) {
                ln_gap = std::log(std::abs(gr.value));
                xs.push_back(n);
                ys.push_back(*ln_gap);
            }
            n_gaps.push_back(n * gr.value);
            rows.rows.push_back({std::int64_t{n}, gr.value, n * gr.value, optional_cell(ln_gap),
                                 optional_cell(lower), optional_cell(upper),
                                 std::string(to_string(gr.method))});
        }

        Fit fit;
        switch (*region) {
        case gap::Region::Ising: {
            fit = fit_slope(xs, ys);
            const ModelParams p(cmd.g, cmd.delta_g, cmd.n_list.front());
            fit.reference = 0.5 * std::log(gap::classify(p, cmd.common.tol).a);
            break;
        }
        case gap::Region::Critical:
            fit = fit_constant(n_gaps);
            break;
        case gap::Region::Paramagnetic:
            fit.kind = "none";
            fit.points = static_cast<std::int64_t>(cmd.n_list.size());
            fit.warning = "paramagnetic region: the gap stays open, nothing to fit";
            break;
        case gap::Region::Degenerate:
            fit.kind = "degenerate";
            fit.points = static_cast<std::int64_t>(cmd.n_list.size());
            fit.warning = "degenerate line: the gap vanishes, slope undefined";
            break;
        }
        if (!fit.warning.empty())
            err << "warning: " << fit.warning << '\n';

        write_report(out, {{"rows", rows}, {"fit", fit_table(fit)}}, cmd.common.format);
        return kExitOk;
    } catch (const std::exception& e) {
        err << describe(e) << '\n';
        return exit_code_for(e);
    }
}

int run_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err)
{
    try {
        if (cmd.n_max < ed::kMinSites || cmd.n_max > ed::kMaxSites)
            throw InvalidInput("--n-max must lie in [4, 14]");
        if (cmd.samples < 0)
            throw InvalidInput("--samples must be non-negative");
        if (!(cmd.tol > 0.0))
            throw InvalidInput("--tol must be positive");
    } catch (const std::exception& e) {
        err << describe(e) << '\n';
        return exit_code_for(e);
    }
    if (cmd.samples == 0)
        err << "warning: no samples requested, the check passes vacuously\n";

    std::mt19937_64 rng(cmd.seed);
    std::uniform_real_distribution<double> uniform(-2.0, 2.0);
    std::vector<std::pair<double, double>> points(static_cast<std::size_t>(cmd.samples));
    for (auto& p : points) {
        p.first = uniform(rng);
        p.second = uniform(rng);
    }

    struct Deviation {
        double energy = 0.0;
        double gap_direct = 0.0;
        double gap_integral = 0.0;
        std::string failure;
        int code = kExitOk;
    };

    Table t;
    t.columns = {"n_sites", "samples", "max_energy_deviation", "max_gap_deviation_direct",
                 "max_gap_deviation_integral", "pass"};
    double worst = 0.0;
    int code = kExitOk;
    std::string failure;
    for (int n = ed::kMinSites; n <= cmd.n_max; n += 2) {
        std::vector<Deviation> devs(points.size());
        parallel_for(points.size(), cmd.threads, [&](std::size_t i) {
            auto& d = devs[i];
            try {
                const ModelParams params(points[i].first, points[i].second, n);
                const auto h = ed::build_hamiltonian(params);
                const auto e = ed::sector_ground_energies(h);
                const double ep = sector_ground_energy(SectorSpec(Parity::Positive, params), params);
                const double em = sector_ground_energy(SectorSpec(Parity::Negative, params), params);
                d.energy = std::max(std::abs(e.e_positive - ep), std::abs(e.e_negative - em));
                d.gap_direct = std::abs(e.gap - gap_direct_sum(params).value);
                d.gap_integral = std::abs(e.gap - gap::gap_integral(params).value);
            } catch (const std::exception& ex) {
                d.failure = describe(ex);
                d.code = exit_code_for(ex);
            }
        });
        double me = 0.0, mgd = 0.0, mgi = 0.0;
        for (const auto& d : devs) {
            if (d.code != kExitOk && code == kExitOk) {
                code = d.code;
                failure = d.failure;
            }
            me = std::max(me, d.energy);
            mgd = std::max(mgd, d.gap_direct);
            mgi = std::max(mgi, d.gap_integral);
        }
        const double m = std::max({me, mgd, mgi});
        worst = std::max(worst, m);
        t.rows.push_back({std::int64_t{n}, static_cast<std::int64_t>(points.size()), me, mgd, mgi,
                          m <= cmd.tol});
    }

    const bool pass = code == kExitOk && worst <= cmd.tol;
    Table summary;
    summary.columns = {"result", "max_deviation", "tol", "seed", "error"};
    summary.rows.push_back({std::string(pass ? "PASS" : "FAIL"), worst, cmd.tol,
                            static_cast<std::int64_t>(cmd.seed),
                            failure.empty() ? Cell{} : Cell{failure}});
    write_report(out, {{"sizes", t}, {"summary", summary}}, cmd.format);
    if (code != kExitOk) {
        err << failure << '\n';
        return code == kExitInvalidInput ? kExitInvalidInput : kExitNonConvergence;
    }
    return pass ? kExitOk : kExitVerificationFailed;
}

} // namespace spinchain::cli

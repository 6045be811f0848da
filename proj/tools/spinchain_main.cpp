#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "spinchain/cli/commands.hpp"
#include "spinchain/errors.hpp"

namespace {

using namespace spinchain::cli;

const std::map<std::string, OutputFormat> kFormats{{"csv", OutputFormat::Csv},
                                                   {"json", OutputFormat::Json}};
const std::map<std::string, MethodFlag> kMethods{{"direct", MethodFlag::Direct},
                                                 {"integral", MethodFlag::Integral},
                                                 {"series", MethodFlag::Series},
                                                 {"all", MethodFlag::All}};

CLI::Option* env(CLI::Option* opt, const char* name)
{
    return opt->envname(std::string("SPINCHAIN_") + name);
}

void add_common(CLI::App* sub, CommonOptions& common)
{
    env(sub->add_option("--out", common.format, "Output format")
            ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case)),
        "OUT");
    env(sub->add_option("--tol", common.tol, "Region tolerance on a and |a - 1|")
            ->capture_default_str(),
        "TOL");
    env(sub->add_flag("--strict", common.strict,
                      "Fail with exit code 3 on near-critical points"),
        "STRICT");
}

void add_point(CLI::App* sub, double& g, double& delta_g)
{
    env(sub->add_option("--g", g, "Uniform field g")->required(), "G");
    env(sub->add_option("--delta-g", delta_g, "Field modulation delta_g")->required(), "DELTA_G");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parity gap of the periodic Ising ring in an alternating transverse field"};
    app.require_subcommand(1);

    GapCommand gap;
    auto* gap_cmd = app.add_subcommand("gap", "Gap at a single point");
    add_point(gap_cmd, gap.g, gap.delta_g);
    env(gap_cmd->add_option("--n", gap.n, "Chain length (even, >= 4)")->required(), "N");
    env(gap_cmd->add_option("--method", gap.method, "direct|integral|series|all")
            ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case)),
        "METHOD");
    add_common(gap_cmd, gap.common);

    SweepCommand sweep;
    std::string g_range = "0:2", delta_range = "0:2";
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid over (g, delta_g)");
    env(sweep_cmd->add_option("--g-range", g_range, "lo:hi")->capture_default_str(), "G_RANGE");
    env(sweep_cmd->add_option("--delta-range", delta_range, "lo:hi")->capture_default_str(),
        "DELTA_RANGE");
    env(sweep_cmd->add_option("--steps", sweep.steps, "Points per axis")->capture_default_str(),
        "STEPS");
    env(sweep_cmd->add_option("--n", sweep.n, "Chain length")->capture_default_str(), "N");
    env(sweep_cmd->add_option("--threads", sweep.threads, "Worker threads, 0 = all cores"),
        "THREADS");
    add_common(sweep_cmd, sweep.common);

    ScalingCommand scaling;
    std::string n_list;
    auto* scaling_cmd = app.add_subcommand("scaling", "Finite-size scaling of the gap");
    add_point(scaling_cmd, scaling.g, scaling.delta_g);
    env(scaling_cmd->add_option("--n-list", n_list, "16,24,32 or 16:48:8")->required(),
        "N_LIST");
    add_common(scaling_cmd, scaling.common);

    VerifyCommand verify;
    auto* verify_cmd = app.add_subcommand("verify", "Exact diagonalisation against the formulas");
    env(verify_cmd->add_option("--n-max", verify.n_max, "Largest chain (<= 14)")
            ->capture_default_str(),
        "N_MAX");
    env(verify_cmd->add_option("--samples", verify.samples, "Random points per size")
            ->capture_default_str(),
        "SAMPLES");
    env(verify_cmd->add_option("--seed", verify.seed, "Sampling seed")->capture_default_str(),
        "SEED");
    env(verify_cmd->add_option("--tol", verify.tol, "Pass tolerance")->capture_default_str(),
        "TOL");
    env(verify_cmd->add_option("--threads", verify.threads, "Worker threads, 0 = all cores"),
        "THREADS");
    env(verify_cmd->add_option("--out", verify.format, "Output format")
            ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case)),
        "OUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInvalidInput;
    }

    try {
        if (*gap_cmd)
            return run_gap(gap, std::cout, std::cerr);
        if (*sweep_cmd) {
            sweep.g_range = parse_range(g_range);
            sweep.delta_range = parse_range(delta_range);
            return run_sweep(sweep, std::cout, std::cerr);
        }
        if (*scaling_cmd) {
            scaling.n_list = parse_n_list(n_list);
            return run_scaling(scaling, std::cout, std::cerr);
        }
        if (*verify_cmd)
            return run_verify(verify, std::cout, std::cerr);
    } catch (const spinchain::Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitInvalidInput;
}

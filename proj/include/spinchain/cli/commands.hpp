#pragma once

// Subcommands of the spinchain executable. Each writes its report to `out`,
// diagnostics to `err`, and returns the process exit code.

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/cli/records.hpp"

namespace spinchain::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidInput = 1,
    kExitNonConvergence = 2,
    kExitAmbiguousRegion = 3,
    kExitVerificationFailed = 4, // verify: deviations above tolerance
};

/// Exit code for an exception escaping a numerical routine.
int exit_code_for(const std::exception& e) noexcept;

enum class MethodFlag { Direct, Integral, Series, All };

/// Region tolerance on |a - 1| and a; near-critical handling; output format.
struct CommonOptions {
    OutputFormat format = OutputFormat::Csv;
    double tol = 1e-6;
    bool strict = false;
};

struct GapCommand {
    double g = 0.0;
    double delta_g = 0.0;
    int n = 0;
    MethodFlag method = MethodFlag::Integral;
    CommonOptions common;
};

struct SweepCommand {
    std::pair<double, double> g_range{0.0, 2.0};
    std::pair<double, double> delta_range{0.0, 2.0};
    int steps = 5;
    int n = 8;
    unsigned threads = 0; // 0: hardware concurrency
    CommonOptions common;
};

struct ScalingCommand {
    double g = 0.0;
    double delta_g = 0.0;
    std::vector<int> n_list;
    CommonOptions common;
};

struct VerifyCommand {
    int n_max = 8;
    int samples = 50;
    std::uint64_t seed = 12345;
    double tol = 1e-8;
    unsigned threads = 0;
    OutputFormat format = OutputFormat::Csv;
};

/// "lo:hi" with both ends finite.
std::pair<double, double> parse_range(const std::string& text);

/// Comma-separated even sizes, or "first:last:step".
std::vector<int> parse_n_list(const std::string& text);

/// One sweep row. With capture_errors the first failure is written to the
/// error column and the fields computed so far are kept; otherwise it throws.
SweepRecord compute_record(double g, double delta_g, int n, const CommonOptions& options,
                           bool capture_errors);

int run_gap(const GapCommand& cmd, std::ostream& out, std::ostream& err);
int run_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err);
int run_scaling(const ScalingCommand& cmd, std::ostream& out, std::ostream& err);
int run_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err);

} // namespace spinchain::cli

#pragma once

// Tabular output shared by the CLI subcommands. Every table is written either
// as CSV (header row, reals with 17 significant digits, nulls as empty
// fields) or as a JSON array of objects with the same keys.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spinchain::cli {

enum class OutputFormat { Csv, Json };

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

std::string format_real(double x);

void write_csv(std::ostream& os, const Table& table);
void write_json(std::ostream& os, const Table& table);
void write_table(std::ostream& os, const Table& table, OutputFormat format);

struct NamedTable {
    std::string name;
    Table table;
};

/// Several tables in one report: CSV blocks separated by a blank line, or a
/// JSON object mapping each name to its array.
void write_report(std::ostream& os, const std::vector<NamedTable>& tables, OutputFormat format);

inline Cell optional_cell(const std::optional<double>& x)
{
    return x ? Cell{*x} : Cell{};
}

struct SweepRecord {
    double g = 0.0;
    double delta_g = 0.0;
    int n_sites = 0;
    std::optional<double> a;
    std::string region;
    std::optional<double> gap_direct;
    std::optional<double> gap_integral;
    std::optional<double> lower_bound;
    std::optional<double> upper_bound;
    std::optional<double> xi;
    std::string ground_parity;
    std::string error;
};

const std::vector<std::string>& sweep_columns();
Row to_row(const SweepRecord& r);

} // namespace spinchain::cli

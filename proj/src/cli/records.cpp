#include "spinchain/cli/records.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace spinchain::cli {

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(const Cell& c)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double x) const { return format_real(x); }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const { return csv_escape(s); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c)
{
    struct Visitor {
        using J = nlohmann::ordered_json;
        J operator()(std::monostate) const { return nullptr; }
        // JSON has no inf/nan; treat them as missing.
        J operator()(double x) const { return std::isfinite(x) ? J(x) : J(nullptr); }
        J operator()(std::int64_t x) const { return x; }
        J operator()(const std::string& s) const { return s; }
        J operator()(bool b) const { return b; }
    };
    return std::visit(Visitor{}, c);
}

} // namespace

std::string format_real(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

static nlohmann::ordered_json json_array(const Table& table)
{
    auto array = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("row width does not match header");
        auto o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            o[table.columns[i]] = json_cell(row[i]);
        array.push_back(std::move(o));
    }
    return array;
}

void write_json(std::ostream& os, const Table& table)
{
    os << json_array(table).dump(2) << '\n';
}

void write_table(std::ostream& os, const Table& table, OutputFormat format)
{
    if (format == OutputFormat::Csv)
        write_csv(os, table);
    else
        write_json(os, table);
}

void write_report(std::ostream& os, const std::vector<NamedTable>& tables, OutputFormat format)
{
    if (format == OutputFormat::Csv) {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i)
                os << '\n';
            write_csv(os, tables[i].table);
        }
        return;
    }
    auto obj = nlohmann::ordered_json::object();
    for (const auto& t : tables)
        obj[t.name] = json_array(t.table);
    os << obj.dump(2) << '\n';
}

const std::vector<std::string>& sweep_columns()
{
    static const std::vector<std::string> columns{
        "g",           "delta_g",     "n_sites", "a",  "region",        "gap_direct",
        "gap_integral", "lower_bound", "upper_bound", "xi", "ground_parity", "error"};
    return columns;
}

Row to_row(const SweepRecord& r)
{
    return {r.g,
            r.delta_g,
            std::int64_t{r.n_sites},
            optional_cell(r.a),
            r.region,
            optional_cell(r.gap_direct),
            optional_cell(r.gap_integral),
            optional_cell(r.lower_bound),
            optional_cell(r.upper_bound),
            optional_cell(r.xi),
            r.ground_parity,
            r.error.empty() ? Cell{} : Cell{r.error}};
}

} // namespace spinchain::cli

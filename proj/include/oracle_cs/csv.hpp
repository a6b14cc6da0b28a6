#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oracle_cs/mc.hpp"

namespace oracle_cs::csv {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Exact inverse of format_double (also accepts nan/inf).
double parse_double(const std::string& s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Column `name` of a sweep table; throws if absent.
std::vector<double> column(const Table& table, const std::string& name);

/// Header: parameter, empirical_mse, std_error, predicted_mse, then
/// rip_lower_dk<d>, rip_upper_dk<d> per delta_k. The upper column carries the
/// correlated-noise bound when `correlated` is set, the white bound otherwise.
Table sweep_table(const SweepResult& result, bool correlated);

/// Comma separated, LF line endings, no quoting.
std::string to_string(const Table& table);
Table parse(const std::string& text);

void write_file(const std::filesystem::path& path, const Table& table);
Table read_file(const std::filesystem::path& path);

}  // namespace oracle_cs::csv

#include "oracle_cs/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oracle_cs::csv {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("csv: not a number: '" + s + "'");
    return v;
}

std::vector<double> column(const Table& table, const std::string& name) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (table.header[c] != name) continue;
        std::vector<double> out;
        out.reserve(table.rows.size());
        for (const auto& row : table.rows) out.push_back(row.at(c));
        return out;
    }
    throw std::out_of_range("csv: no column '" + name + "'");
}

Table sweep_table(const SweepResult& r, bool correlated) {
    Table t;
    t.header = {std::string(oracle_cs::to_string(r.parameter)), "empirical_mse", "std_error",
                "predicted_mse"};
    for (double d : r.delta_k) {
        t.header.push_back("rip_lower_dk" + format_double(d));
        t.header.push_back("rip_upper_dk" + format_double(d));
    }
    for (std::size_t p = 0; p < r.grid.size(); ++p) {
        std::vector<double> row{r.grid[p], r.empirical_mse[p], r.std_error[p],
                                r.predicted_mse[p]};
        for (const BoundSet& b : r.bounds[p]) {
            row.push_back(b.rip_lower_white);
            row.push_back(correlated ? b.rip_upper_corr : b.rip_upper_white);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string to_string(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Table parse(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != t.header.size())
            throw std::invalid_argument("csv: row has " + std::to_string(fields.size()) +
                                        " fields, header has " +
                                        std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_file(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << to_string(table);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace oracle_cs::csv

#pragma once

// Headerless CSV interchange: matrices as comma-separated rows, vectors as one
// value per line. Values are written with 17 significant digits so a write /
// read cycle reproduces every double exactly.

#include "riskpar/core.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace riskpar::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
    cell = trim(cell);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw InputError("row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1) +
                         ": cannot parse '" + std::string(cell) + "' as a finite number");
    }
    return v;
}

inline std::vector<std::vector<double>> parse_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> values;
        std::string_view rest(line);
        std::size_t col = 0;
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_cell(rest.substr(0, comma), row, col++));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        rows.push_back(std::move(values));
        ++row;
    }
    return rows;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    return in;
}

inline std::string format17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Square matrix; the dimension comes from the row count.
inline Matrix read_matrix_csv(std::istream& in) {
    const auto rows = detail::parse_rows(in);
    if (rows.empty()) throw InputError("matrix file is empty");
    const std::size_t n = rows.size();
    Matrix m(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw InputError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                             " columns, expected " + std::to_string(n) + " (matrix must be square)");
        }
        for (std::size_t j = 0; j < n; ++j) m(Index(i), Index(j)) = rows[i][j];
    }
    return m;
}

inline Matrix read_matrix_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_matrix_csv(in);
}

inline Vector read_vector_csv(std::istream& in) {
    const auto rows = detail::parse_rows(in);
    if (rows.empty()) throw InputError("vector file is empty");
    Vector v(Index(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 1) {
            throw InputError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                             " columns, expected 1");
        }
        v[Index(i)] = rows[i][0];
    }
    return v;
}

inline Vector read_vector_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_vector_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const Matrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << detail::format17(m(i, j));
        }
        out << '\n';
    }
}

inline void write_vector_csv(std::ostream& out, const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) out << detail::format17(v[i]) << '\n';
}

}  // namespace riskpar::io

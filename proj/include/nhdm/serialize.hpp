#pragma once

// Matrix text serialization: one row per line, entries as `a+bi` pairs
// separated by single spaces. `#`-prefixed comment lines are allowed and
// parsing accepts both `1` and `1+0i`.

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "nhdm/errors.hpp"
#include "nhdm/matcore.hpp"

namespace nhdm {

inline std::string format_complex(const cplx& z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

inline cplx parse_complex(const std::string& token) {
    const char* p = token.c_str();
    char* end = nullptr;
    double first = std::strtod(p, &end);
    if (end == p) throw ParseError("bad complex entry: '" + token + "'");
    if (*end == '\0') return {first, 0.0};               // plain real: "1"
    if (*end == 'i' && *(end + 1) == '\0') return {0.0, first};  // pure imaginary
    const char* q = end;
    double second = std::strtod(q, &end);
    if (end == q || *end != 'i' || *(end + 1) != '\0')
        throw ParseError("bad complex entry: '" + token + "'");
    return {first, second};
}

inline std::string format_matrix(const CMatrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ' ';
            out += format_complex(m(i, j));
        }
        out += '\n';
    }
    return out;
}

inline CMatrix parse_matrix(const std::string& text) {
    std::vector<std::vector<cplx>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<cplx> row;
        std::string token;
        while (ls >> token) row.push_back(parse_complex(token));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("parse_matrix: no data rows");
    const size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n)
            throw DimensionError("parse_matrix: matrix must be square");
    CMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace nhdm

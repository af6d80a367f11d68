#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "finrad/complex.hpp"
#include "finrad/geometry.hpp"
#include "finrad/rational.hpp"

namespace finrad {

/// Complex file format: a header line "q n", then one line per complex
/// line with its endpoint indices "i j", i < j. Whitespace is free-form;
/// the canonical writer emits pairs in ascending order.
inline LineComplex read_complex(std::istream& is) {
    int q = 0, n = 0;
    if (!(is >> q >> n))
        throw std::invalid_argument("read_complex: missing 'q n' header");
    const GeometrySpace s = make_space(q, n);
    std::vector<int> ids;
    long long i = 0, j = 0;
    while (is >> i >> j) {
        if (i < 0 || j < 0 || i >= s.point_count || j >= s.point_count)
            throw std::invalid_argument("read_complex: endpoint out of range in pair " + std::to_string(i) +
                                        " " + std::to_string(j));
        if (i >= j)
            throw std::invalid_argument("read_complex: endpoints must satisfy i < j, got " + std::to_string(i) +
                                        " " + std::to_string(j));
        ids.push_back(line_id(s, static_cast<int>(i), static_cast<int>(j)));
    }
    if (!is.eof()) {
        std::string tail;
        is.clear();
        is >> tail;
        throw std::invalid_argument("read_complex: unexpected token \"" + tail + "\"");
    }
    return make_line_complex(s, std::move(ids));
}

inline void write_complex(const LineComplex& c, std::ostream& os) {
    os << c.space.q << ' ' << c.space.n << '\n';
    for (int id : c.lines) {
        const auto [u, v] = line_endpoints(c.space, id);
        os << u << ' ' << v << '\n';
    }
}

/// Whitespace-separated exact rationals, each "p" or "p/q".
inline std::vector<Rational> read_values(std::istream& is) {
    std::vector<Rational> out;
    std::string token;
    while (is >> token) out.push_back(parse_rational(token));
    return out;
}

inline std::ifstream open_input(const std::string& path, const char* who) {
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument(std::string(who) + ": cannot open \"" + path + "\"");
    return f;
}

inline LineComplex read_complex_file(const std::string& path) {
    auto f = open_input(path, "read_complex_file");
    return read_complex(f);
}

inline std::vector<Rational> read_values_file(const std::string& path) {
    auto f = open_input(path, "read_values_file");
    return read_values(f);
}

}  // namespace finrad

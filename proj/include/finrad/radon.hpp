#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finrad/geometry.hpp"
#include "finrad/linalg.hpp"
#include "finrad/rational.hpp"

namespace finrad {

/// A finite incidence structure: x_count points, y_count blocks, and the
/// incidence pairs between them. Both fibrations are kept explicitly:
/// block_points[y] lists the points on block y and point_blocks[x] lists
/// the blocks through point x, each sorted ascending.
struct IncidenceGeometry {
    int x_count = 0;
    int y_count = 0;
    std::vector<std::pair<int, int>> pairs;  // (point, block), sorted, duplicate-free
    std::vector<std::vector<int>> block_points;
    std::vector<std::vector<int>> point_blocks;
};

inline IncidenceGeometry make_incidence_geometry(int x_count, int y_count,
                                                 std::vector<std::pair<int, int>> pairs) {
    if (x_count <= 0 || y_count <= 0)
        throw std::invalid_argument("make_incidence_geometry: counts must be positive");
    std::sort(pairs.begin(), pairs.end());
    IncidenceGeometry g;
    g.x_count = x_count;
    g.y_count = y_count;
    g.block_points.resize(static_cast<std::size_t>(y_count));
    g.point_blocks.resize(static_cast<std::size_t>(x_count));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [x, y] = pairs[i];
        if (x < 0 || x >= x_count || y < 0 || y >= y_count)
            throw std::invalid_argument("make_incidence_geometry: incidence pair out of range");
        if (i > 0 && pairs[i] == pairs[i - 1])
            throw std::invalid_argument("make_incidence_geometry: duplicate incidence pair");
        g.block_points[static_cast<std::size_t>(y)].push_back(x);
        g.point_blocks[static_cast<std::size_t>(x)].push_back(y);
    }
    g.pairs = std::move(pairs);
    return g;
}

/// Which index space a data vector lives on.
enum class DataRole { points, blocks };

/// An exact function on points or on blocks, in canonical index order.
struct DataVector {
    DataRole role = DataRole::points;
    std::vector<Rational> values;
};

/// 0/1 incidence matrix; rows are blocks in canonical order, columns are
/// points in canonical order.
struct IncidenceMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> entries;

    int at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
};

inline IncidenceMatrix radon_matrix(const IncidenceGeometry& g) {
    IncidenceMatrix m;
    m.rows = g.y_count;
    m.cols = g.x_count;
    m.entries.assign(static_cast<std::size_t>(g.y_count) * static_cast<std::size_t>(g.x_count), 0);
    for (const auto& [x, y] : g.pairs)
        m.entries[static_cast<std::size_t>(y) * g.x_count + x] = 1;
    return m;
}

/// Writes one row per block: entries '0'/'1' separated by single spaces,
/// each row newline-terminated. This is the interchange format for
/// incidence matrices.
inline void dump_matrix(const IncidenceMatrix& m, std::ostream& os) {
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (c) os << ' ';
            os << m.at(r, c);
        }
        os << '\n';
    }
}

namespace detail {

inline void require_role(const DataVector& v, DataRole role, int size, const char* who) {
    if (v.role != role)
        throw std::invalid_argument(std::string(who) + ": data vector has the wrong role");
    if (static_cast<int>(v.values.size()) != size)
        throw std::invalid_argument(std::string(who) + ": data vector has the wrong length");
}

}  // namespace detail

/// Forward transform: (Rf)(y) = sum of f over the points of block y.
inline DataVector radon_apply(const IncidenceGeometry& g, const DataVector& f) {
    detail::require_role(f, DataRole::points, g.x_count, "radon_apply");
    DataVector out;
    out.role = DataRole::blocks;
    out.values.assign(static_cast<std::size_t>(g.y_count), Rational(0));
    for (int y = 0; y < g.y_count; ++y)
        for (int x : g.block_points[static_cast<std::size_t>(y)])
            out.values[static_cast<std::size_t>(y)] += f.values[static_cast<std::size_t>(x)];
    return out;
}

/// Dual transform: (R^t h)(x) = sum of h over the blocks through x. This is
/// the adjoint of radon_apply for the counting measures on both sides.
inline DataVector dual_apply(const IncidenceGeometry& g, const DataVector& h) {
    detail::require_role(h, DataRole::blocks, g.y_count, "dual_apply");
    DataVector out;
    out.role = DataRole::points;
    out.values.assign(static_cast<std::size_t>(g.x_count), Rational(0));
    for (int x = 0; x < g.x_count; ++x)
        for (int y : g.point_blocks[static_cast<std::size_t>(x)])
            out.values[static_cast<std::size_t>(x)] += h.values[static_cast<std::size_t>(y)];
    return out;
}

/// Uniformity report for the double fibration. alpha is the common number
/// of blocks through a point when that count is uniform; beta the common
/// number of blocks through a pair of distinct points when uniform. holds
/// means both are uniform and 0 != alpha != beta, which makes the normal
/// operator R^t R = (alpha - beta) I + beta J invertible structure.
struct BolkerReport {
    std::optional<std::int64_t> alpha;
    std::optional<std::int64_t> beta;
    bool holds = false;
};

inline BolkerReport bolker_check(const IncidenceGeometry& g) {
    if (g.x_count < 2)
        throw std::invalid_argument("bolker_check: needs at least two points");
    BolkerReport rep;
    bool alpha_uniform = true;
    const auto a0 = static_cast<std::int64_t>(g.point_blocks[0].size());
    for (int x = 1; x < g.x_count; ++x)
        if (static_cast<std::int64_t>(g.point_blocks[static_cast<std::size_t>(x)].size()) != a0) {
            alpha_uniform = false;
            break;
        }
    if (alpha_uniform) rep.alpha = a0;

    bool beta_uniform = true;
    std::optional<std::int64_t> b0;
    std::vector<int> common;
    for (int x1 = 0; x1 < g.x_count && beta_uniform; ++x1) {
        for (int x2 = x1 + 1; x2 < g.x_count; ++x2) {
            common.clear();
            const auto& b1 = g.point_blocks[static_cast<std::size_t>(x1)];
            const auto& b2 = g.point_blocks[static_cast<std::size_t>(x2)];
            std::set_intersection(b1.begin(), b1.end(), b2.begin(), b2.end(), std::back_inserter(common));
            const auto c = static_cast<std::int64_t>(common.size());
            if (!b0) {
                b0 = c;
            } else if (*b0 != c) {
                beta_uniform = false;
                break;
            }
        }
    }
    if (beta_uniform) rep.beta = b0;
    rep.holds = alpha_uniform && beta_uniform && a0 != 0 && b0 && a0 != *b0;
    return rep;
}

/// Coefficients (c, d) with (R^t R)^{-1} = c I + d J, where J is the
/// all-ones matrix on x_count points. Derived from
/// (aI + bJ)(cI + dJ) = ac I + (ad + bc + N b d) J with a = alpha - beta,
/// b = beta, N = x_count.
inline std::pair<Rational, Rational> bolker_inverse_coefficients(std::int64_t alpha, std::int64_t beta,
                                                                 std::int64_t x_count) {
    const std::int64_t a = alpha - beta;
    const std::int64_t denom = a + x_count * beta;
    if (a == 0 || denom == 0)
        throw std::invalid_argument("bolker_inverse_coefficients: normal operator is singular");
    const Rational c = Rational(1, a);
    const Rational d = Rational(-beta) / (Rational(a) * Rational(denom));
    return {c, d};
}

/// Exact left inverse: recovers f from g = Rf by applying
/// (R^t R)^{-1} R^t. Requires the uniformity report to hold.
inline DataVector bolker_invert(const IncidenceGeometry& g, const DataVector& data) {
    detail::require_role(data, DataRole::blocks, g.y_count, "bolker_invert");
    const BolkerReport rep = bolker_check(g);
    if (!rep.holds)
        throw std::invalid_argument("bolker_invert: the uniformity condition fails for this geometry");
    const auto [c, d] = bolker_inverse_coefficients(*rep.alpha, *rep.beta, g.x_count);
    const DataVector back = dual_apply(g, data);
    Rational total = 0;
    for (const auto& v : back.values) total += v;
    DataVector out;
    out.role = DataRole::points;
    out.values.reserve(back.values.size());
    for (const auto& v : back.values) out.values.push_back(c * v + d * total);
    return out;
}

inline RatMatrix to_rational(const IncidenceMatrix& m) {
    RatMatrix r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = m.at(i, j);
    return r;
}

/// Rank of the incidence matrix over the rationals.
inline int exact_rank(const IncidenceMatrix& m) {
    return rational_rank(to_rational(m));
}

/// Injectivity of the forward transform, decided by exact rank.
inline bool is_injective(const IncidenceGeometry& g) {
    return exact_rank(radon_matrix(g)) == g.x_count;
}

/// Points of F_q^n versus all affine lines, in canonical line order.
inline IncidenceGeometry lines_geometry(const GeometrySpace& s) {
    const auto lines = enumerate_lines(s);
    std::vector<std::pair<int, int>> pairs;
    for (int y = 0; y < static_cast<int>(lines.size()); ++y)
        for (int x : lines[static_cast<std::size_t>(y)].points) pairs.emplace_back(x, y);
    return make_incidence_geometry(static_cast<int>(s.point_count), static_cast<int>(lines.size()),
                                   std::move(pairs));
}

/// Points of F_q^n versus all affine hyperplanes, in canonical order.
inline IncidenceGeometry hyperplanes_geometry(const GeometrySpace& s) {
    const auto flats = enumerate_hyperplanes(s);
    std::vector<std::pair<int, int>> pairs;
    for (int y = 0; y < static_cast<int>(flats.size()); ++y)
        for (int x : flats[static_cast<std::size_t>(y)].points) pairs.emplace_back(x, y);
    return make_incidence_geometry(static_cast<int>(s.point_count), static_cast<int>(flats.size()),
                                   std::move(pairs));
}

/// The m-gon: m vertices, m edges, edge i joining vertices i and i+1 mod m.
/// Summing over edges is injective exactly when m is odd.
inline IncidenceGeometry polygon_geometry(int m) {
    if (m < 3) throw std::invalid_argument("polygon_geometry: needs at least 3 vertices");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(2 * m));
    for (int i = 0; i < m; ++i) {
        pairs.emplace_back(i, i);
        pairs.emplace_back((i + 1) % m, i);
    }
    return make_incidence_geometry(m, m, std::move(pairs));
}

}  // namespace finrad

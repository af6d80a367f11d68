#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "finrad/rational.hpp"

namespace finrad {

/// Dense rational matrix, row-major. Small and exact; this library never
/// needs anything faster than textbook elimination at desk scale.
struct RatMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    RatMatrix() = default;
    RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {
        if (r < 0 || c < 0) throw std::invalid_argument("RatMatrix: negative dimensions");
    }
    Rational& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Rational& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

namespace detail {

/// Row-echelon elimination in place. Returns the pivot columns.
inline std::vector<int> echelonize(RatMatrix& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        const Rational inv = Rational(1) / m.at(r, c);
        for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            const Rational f = m.at(i, c);
            for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Exact rank over the rationals.
inline int rational_rank(RatMatrix m) {
    return static_cast<int>(detail::echelonize(m).size());
}

/// Solves A x = b exactly. Returns one solution (free variables zero) when
/// the system is consistent, and nullopt otherwise.
inline std::optional<std::vector<Rational>> rational_solve(RatMatrix a, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != a.rows)
        throw std::invalid_argument("rational_solve: right-hand side length does not match row count");
    RatMatrix aug(a.rows, a.cols + 1);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = b[static_cast<std::size_t>(i)];
    }
    const auto pivots = detail::echelonize(aug);
    if (!pivots.empty() && pivots.back() == a.cols) return std::nullopt;  // row 0 = 1
    std::vector<Rational> x(static_cast<std::size_t>(a.cols), Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[static_cast<std::size_t>(pivots[r])] = aug.at(static_cast<int>(r), a.cols);
    return x;
}

/// A basis for the exact nullspace of A, one vector per free column, in
/// ascending free-column order. Empty when A is injective.
inline std::vector<std::vector<Rational>> rational_nullspace(RatMatrix a) {
    const int cols = a.cols;
    const auto pivots = detail::echelonize(a);
    std::vector<char> is_pivot(static_cast<std::size_t>(cols), 0);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = 1;
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
        v[static_cast<std::size_t>(free)] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<std::size_t>(pivots[r])] = -a.at(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Fraction-free Bareiss rank for small integer matrices. Intermediate
/// entries are k x k minors of the input, so for 0/1 matrices up to 32x32
/// they stay far below the int64 overflow bound; a checked multiply guards
/// misuse anyway.
inline int bareiss_rank_int64(std::vector<std::int64_t> a, int rows, int cols) {
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != a.size())
        throw std::invalid_argument("bareiss_rank_int64: dimension mismatch");
    auto mul = [](std::int64_t x, std::int64_t y) {
        std::int64_t r;
        if (__builtin_mul_overflow(x, y, &r))
            throw std::overflow_error("bareiss_rank_int64: minor exceeds 64 bits; use rational_rank");
        return r;
    };
    auto at = [&](int i, int j) -> std::int64_t& { return a[static_cast<std::size_t>(i) * cols + j]; };
    int r = 0;
    std::int64_t prev = 1;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < cols; ++j) std::swap(at(piv, j), at(r, j));
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j)
                at(i, j) = (mul(at(i, j), at(r, c)) - mul(at(i, c), at(r, j))) / prev;
            at(i, c) = 0;
        }
        prev = at(r, c);
        ++r;
    }
    return r;
}

}  // namespace finrad

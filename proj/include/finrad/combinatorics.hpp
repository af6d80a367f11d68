#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "finrad/rational.hpp"

namespace finrad {

/// Exact binomial coefficient, zero outside 0 <= b <= a.
inline Integer binomial(int a, int b) {
    if (a < 0) throw std::invalid_argument("binomial: negative row " + std::to_string(a));
    if (b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    Integer c = 1;
    for (int i = 1; i <= b; ++i) {
        c *= a - b + i;
        c /= i;  // exact: c is C(a-b+i, i) after this step
    }
    return c;
}

namespace detail {

/// Binomial coefficient that must fit in int64; used on enumeration hot
/// paths where the values are known small.
inline std::int64_t binomial64(int a, int b) {
    const Integer c = binomial(a, b);
    if (c > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("binomial64: value does not fit in 64 bits");
    return static_cast<std::int64_t>(c);
}

}  // namespace detail

/// The index-th b-subset of {0..a-1} in lexicographic order of ascending
/// tuples. Requires 0 <= index < C(a,b).
inline std::vector<int> combination_unrank(int a, int b, const Integer& index) {
    if (b < 0 || b > a) throw std::invalid_argument("combination_unrank: requires 0 <= b <= a");
    if (index < 0 || index >= binomial(a, b))
        throw std::invalid_argument("combination_unrank: index out of range");
    std::vector<int> c;
    c.reserve(static_cast<std::size_t>(b));
    Integer r = index;
    int next = 0;
    for (int pos = 0; pos < b; ++pos) {
        for (int v = next;; ++v) {
            const Integer cnt = binomial(a - 1 - v, b - 1 - pos);
            if (r < cnt) {
                c.push_back(v);
                next = v + 1;
                break;
            }
            r -= cnt;
        }
    }
    return c;
}

/// Inverse of combination_unrank: the lexicographic position of a strictly
/// increasing b-subset of {0..a-1}.
inline Integer combination_rank(int a, int b, const std::vector<int>& subset) {
    if (static_cast<int>(subset.size()) != b)
        throw std::invalid_argument("combination_rank: subset size does not match b");
    if (b < 0 || b > a) throw std::invalid_argument("combination_rank: requires 0 <= b <= a");
    Integer r = 0;
    int prev = -1;
    for (int pos = 0; pos < b; ++pos) {
        const int v = subset[static_cast<std::size_t>(pos)];
        if (v <= prev || v >= a)
            throw std::invalid_argument("combination_rank: subset must be strictly increasing within range");
        for (int u = prev + 1; u < v; ++u) r += binomial(a - 1 - u, b - 1 - pos);
        prev = v;
    }
    return r;
}

/// Advances a strictly increasing tuple to its lexicographic successor
/// within {0..a-1}. Returns false (tuple unchanged) at the last tuple.
inline bool next_combination(std::vector<int>& c, int a) {
    const int b = static_cast<int>(c.size());
    int i = b - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == a - b + i) --i;
    if (i < 0) return false;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < b; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

}  // namespace finrad

#pragma once

#include <finrad/complex.hpp>
#include <finrad/radon.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace testutil {

using finrad::DataRole;
using finrad::DataVector;
using finrad::Rational;

inline DataVector random_point_values(int count, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(-9, 9);
    DataVector f;
    f.role = DataRole::points;
    f.values.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) f.values.emplace_back(dist(rng));
    return f;
}

inline DataVector random_block_values(int count, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(-9, 9);
    DataVector g;
    g.role = DataRole::blocks;
    g.values.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g.values.emplace_back(dist(rng));
    return g;
}

inline Rational inner(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Normal operator R^t R assembled directly from block membership, bypassing
// the incidence matrix: entry (x1, x2) counts blocks containing both.
inline std::vector<std::vector<long long>> gram(const finrad::IncidenceGeometry& g) {
    std::vector<std::vector<long long>> m(static_cast<std::size_t>(g.x_count),
                                          std::vector<long long>(static_cast<std::size_t>(g.x_count), 0));
    for (const auto& pts : g.block_points)
        for (int a : pts)
            for (int b : pts) ++m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    return m;
}

// Uniform random complex, independent of the library's own sampler.
inline finrad::LineComplex sample_complex(const finrad::GeometrySpace& s, std::mt19937_64& rng) {
    std::vector<int> pool(static_cast<std::size_t>(finrad::line_count(s)));
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(s.point_count));
    return finrad::make_line_complex(s, std::move(pool));
}

}  // namespace testutil

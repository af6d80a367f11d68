#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace finrad {

/// The affine space F_q^n over a prime field. Points are identified with
/// the integers 0 .. q^n-1 through little-endian base-q digits: coordinate
/// i of a point is digit i of its index. All enumerations in this header
/// are derived from that indexing and are therefore stable across runs.
struct GeometrySpace {
    int q = 0;
    int n = 0;
    std::int64_t point_count = 0;  // q^n
};

namespace detail {

inline bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; static_cast<std::int64_t>(d) * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

}  // namespace detail

/// Desk-scale guard: enumerations here are exhaustive, so the space must
/// stay small enough to hold point lists in memory.
inline constexpr std::int64_t kMaxPointCount = std::int64_t(1) << 20;

inline GeometrySpace make_space(int q, int n) {
    if (!detail::is_prime(q))
        throw std::invalid_argument("make_space: field order must be prime, got " + std::to_string(q));
    if (n < 1)
        throw std::invalid_argument("make_space: dimension must be at least 1, got " + std::to_string(n));
    std::int64_t pc = 1;
    for (int i = 0; i < n; ++i) {
        pc *= q;
        if (pc > kMaxPointCount)
            throw std::invalid_argument("make_space: q^n exceeds the enumeration limit");
    }
    return GeometrySpace{q, n, pc};
}

/// A point as its coordinate vector; coords[i] is the i-th base-q digit of
/// the point index.
struct Point {
    std::vector<int> coords;
};

inline std::int64_t point_index(const GeometrySpace& s, const Point& p) {
    if (static_cast<int>(p.coords.size()) != s.n)
        throw std::invalid_argument("point_index: coordinate count does not match the space dimension");
    std::int64_t idx = 0;
    for (int i = s.n - 1; i >= 0; --i) {
        const int c = p.coords[i];
        if (c < 0 || c >= s.q)
            throw std::invalid_argument("point_index: coordinate out of field range");
        idx = idx * s.q + c;
    }
    return idx;
}

inline Point point_from_index(const GeometrySpace& s, std::int64_t idx) {
    if (idx < 0 || idx >= s.point_count)
        throw std::invalid_argument("point_from_index: index out of range");
    Point p;
    p.coords.resize(s.n);
    for (int i = 0; i < s.n; ++i) {
        p.coords[i] = static_cast<int>(idx % s.q);
        idx /= s.q;
    }
    return p;
}

namespace detail {

/// Coordinate-wise x - y + z mod q. Affine flats are exactly the nonempty
/// sets closed under this ternary operation: closure makes the translate
/// through any member a subgroup of (F_q^n, +), and for prime q every
/// additive subgroup is a subspace.
inline int affine_triple(const GeometrySpace& s, int x, int y, int z) {
    int out = 0;
    std::int64_t place = 1;
    for (int i = 0; i < s.n; ++i) {
        const int d = ((x % s.q) - (y % s.q) + (z % s.q) + s.q) % s.q;
        out += static_cast<int>(place) * d;
        x /= s.q;
        y /= s.q;
        z /= s.q;
        place *= s.q;
    }
    return out;
}

/// Coordinate-wise x + t*(y - x) mod q: the point at parameter t on the
/// line through x and y.
inline int affine_interpolate(const GeometrySpace& s, int x, int y, int t) {
    int out = 0;
    std::int64_t place = 1;
    for (int i = 0; i < s.n; ++i) {
        const int xd = x % s.q, yd = y % s.q;
        const int d = (xd + t * ((yd - xd + s.q) % s.q)) % s.q;
        out += static_cast<int>(place) * d;
        x /= s.q;
        y /= s.q;
        place *= s.q;
    }
    return out;
}

/// Coordinate-wise x - y mod q, as a point index (direction vector).
inline int affine_sub(const GeometrySpace& s, int x, int y) {
    int out = 0;
    std::int64_t place = 1;
    for (int i = 0; i < s.n; ++i) {
        const int d = ((x % s.q) - (y % s.q) + s.q) % s.q;
        out += static_cast<int>(place) * d;
        x /= s.q;
        y /= s.q;
        place *= s.q;
    }
    return out;
}

}  // namespace detail

/// An affine flat of dimension dim, stored extensionally as the strictly
/// increasing list of its point indices. Flats compare equal exactly when
/// their point sets are equal.
struct AffineFlat {
    int dim = 0;
    std::vector<int> points;

    friend bool operator==(const AffineFlat& a, const AffineFlat& b) {
        return a.points == b.points;
    }
};

/// Validates and canonicalizes a flat: correct cardinality q^dim, indices
/// in range and distinct, and closure under x - y + z.
inline AffineFlat make_flat(const GeometrySpace& s, int dim, std::vector<int> points) {
    if (dim < 0 || dim > s.n)
        throw std::invalid_argument("make_flat: dimension out of range");
    std::int64_t want = 1;
    for (int i = 0; i < dim; ++i) want *= s.q;
    if (static_cast<std::int64_t>(points.size()) != want)
        throw std::invalid_argument("make_flat: a " + std::to_string(dim) + "-flat needs exactly q^dim points");
    std::sort(points.begin(), points.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] < 0 || points[i] >= s.point_count)
            throw std::invalid_argument("make_flat: point index out of range");
        if (i > 0 && points[i] == points[i - 1])
            throw std::invalid_argument("make_flat: duplicate point index");
    }
    std::vector<char> member(static_cast<std::size_t>(s.point_count), 0);
    for (int p : points) member[static_cast<std::size_t>(p)] = 1;
    for (int x : points)
        for (int y : points)
            for (int z : points)
                if (!member[static_cast<std::size_t>(detail::affine_triple(s, x, y, z))])
                    throw std::invalid_argument("make_flat: point set is not affinely closed");
    return AffineFlat{dim, std::move(points)};
}

/// All q^n points in index order.
inline std::vector<Point> enumerate_points(const GeometrySpace& s) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(s.point_count));
    for (std::int64_t i = 0; i < s.point_count; ++i) out.push_back(point_from_index(s, i));
    return out;
}

/// All affine lines, canonically ordered by their sorted point lists.
/// There are q^(n-1) * (q^n - 1) / (q - 1) of them.
inline std::vector<AffineFlat> enumerate_lines(const GeometrySpace& s) {
    const int P = static_cast<int>(s.point_count);
    std::set<std::vector<int>> seen;
    for (int x = 0; x < P; ++x) {
        for (int y = x + 1; y < P; ++y) {
            std::vector<int> pts;
            pts.reserve(static_cast<std::size_t>(s.q));
            for (int t = 0; t < s.q; ++t) pts.push_back(detail::affine_interpolate(s, x, y, t));
            std::sort(pts.begin(), pts.end());
            seen.insert(std::move(pts));
        }
    }
    std::vector<AffineFlat> out;
    out.reserve(seen.size());
    for (const auto& pts : seen) out.push_back(make_flat(s, 1, pts));
    return out;
}

/// All affine hyperplanes ((n-1)-flats), canonically ordered by their
/// sorted point lists. Requires n >= 2; there are q * (q^n - 1) / (q - 1).
inline std::vector<AffineFlat> enumerate_hyperplanes(const GeometrySpace& s) {
    if (s.n < 2)
        throw std::invalid_argument("enumerate_hyperplanes: requires dimension at least 2");
    const int P = static_cast<int>(s.point_count);
    std::vector<std::vector<int>> flats;
    // One normal vector per direction, normalized so its first nonzero
    // coordinate is 1; each normal contributes q parallel level sets.
    for (int a = 1; a < P; ++a) {
        Point normal = point_from_index(s, a);
        int lead = 0;
        while (normal.coords[static_cast<std::size_t>(lead)] == 0) ++lead;
        if (normal.coords[static_cast<std::size_t>(lead)] != 1) continue;
        for (int c = 0; c < s.q; ++c) {
            std::vector<int> pts;
            for (int x = 0; x < P; ++x) {
                int dot = 0, xx = x;
                for (int i = 0; i < s.n; ++i) {
                    dot = (dot + normal.coords[static_cast<std::size_t>(i)] * (xx % s.q)) % s.q;
                    xx /= s.q;
                }
                if (dot == c) pts.push_back(x);
            }
            flats.push_back(std::move(pts));
        }
    }
    std::sort(flats.begin(), flats.end());
    std::vector<AffineFlat> out;
    out.reserve(flats.size());
    for (auto& pts : flats) out.push_back(make_flat(s, s.n - 1, std::move(pts)));
    return out;
}

/// A parallel class of hyperplanes, as indices into the canonical
/// hyperplane enumeration. Every spread partitions the point set.
struct Spread {
    std::vector<int> flat_ids;

    friend bool operator==(const Spread& a, const Spread& b) {
        return a.flat_ids == b.flat_ids;
    }
};

/// Groups the canonical hyperplanes into their (q^n - 1) / (q - 1) parallel
/// classes, each of size q, ordered by member id lists. Verifies that each
/// class partitions the space.
inline std::vector<Spread> hyperplane_spreads(const GeometrySpace& s) {
    const auto flats = enumerate_hyperplanes(s);
    std::set<std::vector<int>> dir_seen;
    std::vector<std::vector<int>> dirs_of;
    // Parallel flats share their direction set {p - base : p in flat}.
    std::vector<std::pair<std::vector<int>, int>> keyed;
    keyed.reserve(flats.size());
    for (int id = 0; id < static_cast<int>(flats.size()); ++id) {
        const auto& f = flats[static_cast<std::size_t>(id)];
        std::vector<int> dirs;
        dirs.reserve(f.points.size());
        for (int p : f.points) dirs.push_back(detail::affine_sub(s, p, f.points[0]));
        std::sort(dirs.begin(), dirs.end());
        keyed.emplace_back(std::move(dirs), id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<Spread> out;
    std::size_t i = 0;
    while (i < keyed.size()) {
        std::size_t j = i;
        Spread sp;
        while (j < keyed.size() && keyed[j].first == keyed[i].first) {
            sp.flat_ids.push_back(keyed[j].second);
            ++j;
        }
        std::sort(sp.flat_ids.begin(), sp.flat_ids.end());
        if (static_cast<int>(sp.flat_ids.size()) != s.q)
            throw std::logic_error("hyperplane_spreads: parallel class of unexpected size");
        std::vector<char> covered(static_cast<std::size_t>(s.point_count), 0);
        std::int64_t total = 0;
        for (int id : sp.flat_ids)
            for (int p : flats[static_cast<std::size_t>(id)].points) {
                if (covered[static_cast<std::size_t>(p)])
                    throw std::logic_error("hyperplane_spreads: parallel class members overlap");
                covered[static_cast<std::size_t>(p)] = 1;
                ++total;
            }
        if (total != s.point_count)
            throw std::logic_error("hyperplane_spreads: parallel class does not cover the space");
        out.push_back(std::move(sp));
        i = j;
    }
    std::sort(out.begin(), out.end(), [](const Spread& a, const Spread& b) {
        return a.flat_ids < b.flat_ids;
    });
    return out;
}

/// Membership test: does the flat contain the point? Indices must belong
/// to the given space.
inline bool incidence(const GeometrySpace& s, const Point& p, const AffineFlat& f) {
    const std::int64_t idx = point_index(s, p);
    for (int fp : f.points)
        if (fp < 0 || fp >= s.point_count)
            throw std::invalid_argument("incidence: flat does not belong to this space");
    return std::binary_search(f.points.begin(), f.points.end(), static_cast<int>(idx));
}

}  // namespace finrad

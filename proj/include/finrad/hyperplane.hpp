#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finrad/geometry.hpp"
#include "finrad/linalg.hpp"
#include "finrad/radon.hpp"
#include "finrad/rational.hpp"

namespace finrad {

/// Everything the hyperplane-transform range theory needs about one space,
/// built once: the canonical hyperplane list, the parallel spreads, and the
/// point/hyperplane incidence structure.
struct HyperplaneGeometry {
    GeometrySpace space;
    std::vector<AffineFlat> flats;
    std::vector<Spread> spreads;
    IncidenceGeometry geometry;
};

inline HyperplaneGeometry make_hyperplane_geometry(const GeometrySpace& s) {
    HyperplaneGeometry ctx;
    ctx.space = s;
    ctx.flats = enumerate_hyperplanes(s);
    ctx.spreads = hyperplane_spreads(s);
    ctx.geometry = hyperplanes_geometry(s);
    return ctx;
}

/// Per-spread sums of a block data vector. The vector lies in the range of
/// the hyperplane transform exactly when all spread sums agree: summing Rf
/// over any spread counts every point once, so each spread sum equals the
/// total mass of f.
struct CavalieriReport {
    bool consistent = false;
    std::vector<Rational> spread_sums;
};

inline CavalieriReport cavalieri_check(const HyperplaneGeometry& ctx, const DataVector& g) {
    detail::require_role(g, DataRole::blocks, static_cast<int>(ctx.flats.size()), "cavalieri_check");
    CavalieriReport rep;
    rep.spread_sums.reserve(ctx.spreads.size());
    for (const auto& sp : ctx.spreads) {
        Rational sum = 0;
        for (int id : sp.flat_ids) sum += g.values[static_cast<std::size_t>(id)];
        rep.spread_sums.push_back(std::move(sum));
    }
    rep.consistent = true;
    for (const auto& s : rep.spread_sums)
        if (s != rep.spread_sums.front()) {
            rep.consistent = false;
            break;
        }
    return rep;
}

/// Range membership decided by the spread-sum conditions, cross-checked on
/// every call against an exact linear solve of Rf = g. The two routes
/// agreeing is the range characterization itself, so a disagreement is a
/// logic error, not a data condition.
inline bool range_membership(const HyperplaneGeometry& ctx, const DataVector& g) {
    const bool by_sums = cavalieri_check(ctx, g).consistent;
    const RatMatrix a = to_rational(radon_matrix(ctx.geometry));
    const bool by_solve = rational_solve(a, g.values).has_value();
    if (by_sums != by_solve)
        throw std::logic_error("range_membership: spread-sum conditions disagree with exact solvability");
    return by_sums;
}

namespace detail {

inline std::vector<int> checked_flat_subset(const HyperplaneGeometry& ctx, std::vector<int> ids,
                                            const char* who) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < 0 || ids[i] >= static_cast<int>(ctx.flats.size()))
            throw std::invalid_argument(std::string(who) + ": hyperplane id out of range");
        if (i > 0 && ids[i] == ids[i - 1])
            throw std::invalid_argument(std::string(who) + ": duplicate hyperplane id");
    }
    return ids;
}

}  // namespace detail

/// How many members of each spread appear in the sub-collection, in spread
/// order. The complement (q minus the count) is the omission profile.
inline std::vector<int> spread_member_counts(const HyperplaneGeometry& ctx, std::vector<int> ids) {
    ids = detail::checked_flat_subset(ctx, std::move(ids), "spread_member_counts");
    std::vector<char> chosen(ctx.flats.size(), 0);
    for (int id : ids) chosen[static_cast<std::size_t>(id)] = 1;
    std::vector<int> counts;
    counts.reserve(ctx.spreads.size());
    for (const auto& sp : ctx.spreads) {
        int c = 0;
        for (int id : sp.flat_ids) c += chosen[static_cast<std::size_t>(id)];
        counts.push_back(c);
    }
    return counts;
}

/// Structural admissibility test for a sub-collection of q^n hyperplanes:
/// exactly one spread is fully contained and every other spread omits
/// exactly one member. Admissible collections support reconstruction of
/// any point function from its sums over just these hyperplanes.
inline bool hyperplane_admissible_pattern(const HyperplaneGeometry& ctx, std::vector<int> ids) {
    if (static_cast<std::int64_t>(ids.size()) != ctx.space.point_count)
        throw std::invalid_argument("hyperplane_admissible_pattern: collection must have q^n members");
    const auto counts = spread_member_counts(ctx, std::move(ids));
    int full = 0;
    bool rest_ok = true;
    for (int c : counts) {
        if (c == ctx.space.q)
            ++full;
        else if (c != ctx.space.q - 1)
            rest_ok = false;
    }
    return full == 1 && rest_ok;
}

/// Admissibility by the definition: the rows of the incidence matrix
/// restricted to the sub-collection span enough to determine any point
/// function, i.e. the restricted matrix has full column rank.
inline bool hyperplane_admissible_rank(const HyperplaneGeometry& ctx, std::vector<int> ids) {
    if (static_cast<std::int64_t>(ids.size()) != ctx.space.point_count)
        throw std::invalid_argument("hyperplane_admissible_rank: collection must have q^n members");
    ids = detail::checked_flat_subset(ctx, std::move(ids), "hyperplane_admissible_rank");
    const int P = static_cast<int>(ctx.space.point_count);
    RatMatrix m(static_cast<int>(ids.size()), P);
    for (int r = 0; r < static_cast<int>(ids.size()); ++r)
        for (int p : ctx.flats[static_cast<std::size_t>(ids[static_cast<std::size_t>(r)])].points)
            m.at(r, p) = 1;
    return rational_rank(std::move(m)) == P;
}

/// The classical two-plate witness: +1 on one hyperplane, -1 on a parallel
/// one, 0 elsewhere. Its transform vanishes on every other hyperplane
/// because any non-parallel hyperplane meets both plates in flats of equal
/// cardinality q^(n-2). Verified before returning.
inline DataVector capacitor_witness(const HyperplaneGeometry& ctx, int h1, int h2) {
    const int H = static_cast<int>(ctx.flats.size());
    if (h1 < 0 || h1 >= H || h2 < 0 || h2 >= H)
        throw std::invalid_argument("capacitor_witness: hyperplane id out of range");
    if (h1 == h2) throw std::invalid_argument("capacitor_witness: the two plates must differ");
    const bool parallel = [&] {
        for (const auto& sp : ctx.spreads) {
            const bool a = std::binary_search(sp.flat_ids.begin(), sp.flat_ids.end(), h1);
            const bool b = std::binary_search(sp.flat_ids.begin(), sp.flat_ids.end(), h2);
            if (a || b) return a && b;
        }
        return false;
    }();
    if (!parallel)
        throw std::invalid_argument("capacitor_witness: the plates must be parallel");
    DataVector f;
    f.role = DataRole::points;
    f.values.assign(static_cast<std::size_t>(ctx.space.point_count), Rational(0));
    for (int p : ctx.flats[static_cast<std::size_t>(h1)].points) f.values[static_cast<std::size_t>(p)] = 1;
    for (int p : ctx.flats[static_cast<std::size_t>(h2)].points) f.values[static_cast<std::size_t>(p)] = -1;
    const DataVector rf = radon_apply(ctx.geometry, f);
    for (int y = 0; y < H; ++y) {
        if (y == h1 || y == h2) continue;
        if (rf.values[static_cast<std::size_t>(y)] != 0)
            throw std::logic_error("capacitor_witness: transform fails to vanish away from the plates");
    }
    return f;
}

/// Exhaustive search for all partitions of the point set into hyperplanes.
/// The parallel spreads are always among them; for the spaces in scope
/// they are exactly them, which the range conditions rely on.
inline std::vector<std::vector<int>> enumerate_hyperplane_partitions(const HyperplaneGeometry& ctx) {
    const int P = static_cast<int>(ctx.space.point_count);
    std::vector<std::vector<int>> found;
    std::vector<int> chosen;
    std::vector<char> covered(static_cast<std::size_t>(P), 0);
    // Branching on the lowest uncovered point visits each partition once,
    // in a canonical order, so no deduplication is needed.
    const auto& by_point = ctx.geometry.point_blocks;
    auto rec = [&](auto&& self, int covered_count) -> void {
        if (covered_count == P) {
            auto part = chosen;
            std::sort(part.begin(), part.end());
            found.push_back(std::move(part));
            return;
        }
        int first = 0;
        while (covered[static_cast<std::size_t>(first)]) ++first;
        for (int id : by_point[static_cast<std::size_t>(first)]) {
            const auto& pts = ctx.flats[static_cast<std::size_t>(id)].points;
            bool free = true;
            for (int p : pts)
                if (covered[static_cast<std::size_t>(p)]) {
                    free = false;
                    break;
                }
            if (!free) continue;
            for (int p : pts) covered[static_cast<std::size_t>(p)] = 1;
            chosen.push_back(id);
            self(self, covered_count + static_cast<int>(pts.size()));
            chosen.pop_back();
            for (int p : pts) covered[static_cast<std::size_t>(p)] = 0;
        }
    };
    rec(rec, 0);
    std::sort(found.begin(), found.end());
    return found;
}

}  // namespace finrad

#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finrad/combinatorics.hpp"
#include "finrad/complex.hpp"
#include "finrad/linalg.hpp"

namespace finrad {

/// Aggregate results of an exhaustive sweep over all complexes of F_2^3.
/// The obstruction fields are non-exclusive: one complex can contribute to
/// several. The multiplicity counters sum, over all complexes, the number
/// of obstruction instances (per point, per point pair, per isolated
/// line...), which is what the closed-form counting arguments predict; the
/// distinct counters count complexes having at least one such instance.
struct CensusResult {
    std::uint64_t total = 0;
    std::uint64_t admissible = 0;
    std::uint64_t inadmissible = 0;

    // Non-exclusive obstruction histogram.
    std::uint64_t with_omitted_point = 0;
    std::uint64_t with_isolated_tree = 0;
    std::uint64_t with_even_cycle = 0;

    // Omitted-point bookkeeping: sums of C(#omitted, k) for k = 1..4 and
    // the distinct count.
    std::uint64_t omitted_point_multiplicity = 0;
    std::uint64_t omitted_pair_multiplicity = 0;
    std::uint64_t omitted_triple_multiplicity = 0;
    std::uint64_t omitted_quad_multiplicity = 0;
    std::uint64_t omitted_distinct = 0;

    // Isolated-line bookkeeping.
    std::uint64_t isolated_line_multiplicity = 0;
    std::uint64_t isolated_line_exactly_two = 0;
    std::uint64_t isolated_line_three_plus = 0;
    std::uint64_t isolated_line_distinct = 0;

    // Sum over complexes of (#omitted points) * (#isolated lines).
    std::uint64_t mixed_pair_multiplicity = 0;

    // Optional definition-level cross-check.
    std::uint64_t rank_checked = 0;
    std::uint64_t rank_disagreements = 0;

    void merge(const CensusResult& o) {
        total += o.total;
        admissible += o.admissible;
        inadmissible += o.inadmissible;
        with_omitted_point += o.with_omitted_point;
        with_isolated_tree += o.with_isolated_tree;
        with_even_cycle += o.with_even_cycle;
        omitted_point_multiplicity += o.omitted_point_multiplicity;
        omitted_pair_multiplicity += o.omitted_pair_multiplicity;
        omitted_triple_multiplicity += o.omitted_triple_multiplicity;
        omitted_quad_multiplicity += o.omitted_quad_multiplicity;
        omitted_distinct += o.omitted_distinct;
        isolated_line_multiplicity += o.isolated_line_multiplicity;
        isolated_line_exactly_two += o.isolated_line_exactly_two;
        isolated_line_three_plus += o.isolated_line_three_plus;
        isolated_line_distinct += o.isolated_line_distinct;
        mixed_pair_multiplicity += o.mixed_pair_multiplicity;
        rank_checked += o.rank_checked;
        rank_disagreements += o.rank_disagreements;
    }
};

namespace detail {

inline bool census_verbose() {
    const char* v = std::getenv("FINRAD_VERBOSE");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

/// Sweeps complexes with lexicographic ranks [lo, hi) and accumulates all
/// counters. Omitted points come from the union of bit-packed point masks
/// and isolated lines from per-line adjacency mask intersections; the
/// union-find classifier supplies the tree and even-cycle flags and
/// recomputes both mask counts, so the two routes cross-check each other
/// on every complex. With verify_rank each verdict is additionally
/// re-derived from the exact rank of the 8x8 restricted matrix.
inline CensusResult census_range(std::int64_t lo, std::int64_t hi, bool verify_rank) {
    const GeometrySpace s = make_space(2, 3);
    const int L = line_count(s);
    const int P = static_cast<int>(s.point_count);
    std::vector<std::pair<int, int>> ends(static_cast<std::size_t>(L));
    std::vector<std::uint8_t> point_mask(static_cast<std::size_t>(L));
    std::vector<std::uint32_t> adjacent_mask(static_cast<std::size_t>(L), 0);
    for (int id = 0; id < L; ++id) {
        ends[static_cast<std::size_t>(id)] = line_endpoints(s, id);
        point_mask[static_cast<std::size_t>(id)] = static_cast<std::uint8_t>(
            (1u << ends[static_cast<std::size_t>(id)].first) | (1u << ends[static_cast<std::size_t>(id)].second));
    }
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
            if (a != b && (point_mask[static_cast<std::size_t>(a)] & point_mask[static_cast<std::size_t>(b)]))
                adjacent_mask[static_cast<std::size_t>(a)] |= 1u << b;

    std::vector<int> chosen = combination_unrank(L, P, Integer(lo));
    std::vector<std::pair<int, int>> edges(static_cast<std::size_t>(P));
    ClassifyScratch ws;
    CensusResult res;
    const bool verbose = census_verbose();
    for (std::int64_t idx = lo; idx < hi; ++idx) {
        std::uint32_t chosen_mask = 0;
        std::uint8_t cover = 0;
        for (int k = 0; k < P; ++k) {
            const int id = chosen[static_cast<std::size_t>(k)];
            edges[static_cast<std::size_t>(k)] = ends[static_cast<std::size_t>(id)];
            chosen_mask |= 1u << id;
            cover |= point_mask[static_cast<std::size_t>(id)];
        }
        const int mask_omitted = P - std::popcount(static_cast<unsigned>(cover));
        int mask_isolated = 0;
        for (int k = 0; k < P; ++k)
            if ((adjacent_mask[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])] & chosen_mask) == 0)
                ++mask_isolated;
        const ClassifyFlags flags = classify_edges(edges.data(), P, P, ws);
        if (flags.omitted_points != mask_omitted || flags.isolated_lines != mask_isolated)
            throw std::logic_error("census_range: mask census disagrees with the component census");
        ++res.total;
        if (flags.admissible)
            ++res.admissible;
        else
            ++res.inadmissible;
        const auto om = static_cast<std::uint64_t>(flags.omitted_points);
        const auto iso = static_cast<std::uint64_t>(flags.isolated_lines);
        if (om > 0) {
            ++res.with_omitted_point;
            ++res.omitted_distinct;
            res.omitted_point_multiplicity += om;
            res.omitted_pair_multiplicity += om * (om - 1) / 2;
            res.omitted_triple_multiplicity += om * (om - 1) * (om - 2) / 6;
            res.omitted_quad_multiplicity += om * (om - 1) * (om - 2) * (om - 3) / 24;
        }
        if (flags.isolated_tree) ++res.with_isolated_tree;
        if (flags.even_cycle) ++res.with_even_cycle;
        if (iso > 0) {
            ++res.isolated_line_distinct;
            res.isolated_line_multiplicity += iso;
            if (iso == 2) ++res.isolated_line_exactly_two;
            if (iso >= 3) ++res.isolated_line_three_plus;
        }
        res.mixed_pair_multiplicity += om * iso;
        if (verify_rank) {
            std::vector<std::int64_t> a(static_cast<std::size_t>(P) * static_cast<std::size_t>(P), 0);
            for (int r = 0; r < P; ++r) {
                const auto [u, v] = edges[static_cast<std::size_t>(r)];
                a[static_cast<std::size_t>(r) * P + u] = 1;
                a[static_cast<std::size_t>(r) * P + v] = 1;
            }
            const bool by_rank = bareiss_rank_int64(std::move(a), P, P) == P;
            ++res.rank_checked;
            if (by_rank != flags.admissible) ++res.rank_disagreements;
        }
        if (verbose && res.total % 500000 == 0)
            std::cerr << "census: " << res.total << " complexes classified in [" << lo << ", " << hi << ")\n";
        if (idx + 1 < hi && !next_combination(chosen, L))
            throw std::logic_error("census_range: combination stream ended early");
    }
    return res;
}

}  // namespace detail

/// Classifies every one of the C(28,8) = 3,108,105 complexes of F_2^3.
/// partitions splits the rank range into contiguous chunks enumerated
/// concurrently; the merged counters are identical for any partition count
/// because every counter is a sum over complexes. verify_rank re-derives
/// each verdict from the rank definition. Only n = 3 is exhaustively
/// enumerable at desk scale (n = 4 already has C(120,16) > 10^20
/// complexes; use sample_admissibility_rate there).
inline CensusResult enumerate_all_complexes(int n, int partitions = 1, bool verify_rank = false) {
    if (n != 3)
        throw std::invalid_argument(
            "enumerate_all_complexes: exhaustive enumeration is only feasible for n = 3; "
            "use sample_admissibility_rate for larger spaces");
    if (partitions < 1)
        throw std::invalid_argument("enumerate_all_complexes: partition count must be positive");
    const std::int64_t total = detail::binomial64(line_count(make_space(2, 3)), 8);
    if (partitions > total) partitions = static_cast<int>(total);
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    ranges.reserve(static_cast<std::size_t>(partitions));
    for (int k = 0; k < partitions; ++k) {
        const std::int64_t lo = total * k / partitions;
        const std::int64_t hi = total * (k + 1) / partitions;
        if (lo < hi) ranges.emplace_back(lo, hi);
    }
    CensusResult res;
    if (ranges.size() == 1) {
        res = detail::census_range(ranges[0].first, ranges[0].second, verify_rank);
    } else {
        std::vector<std::future<CensusResult>> futures;
        futures.reserve(ranges.size());
        for (const auto& [lo, hi] : ranges)
            futures.push_back(std::async(std::launch::async, detail::census_range, lo, hi, verify_rank));
        for (auto& f : futures) res.merge(f.get());
    }
    return res;
}

/// Closed-form counts of complexes omitting marked points: choosing k
/// points to avoid leaves C(8-k, 2) usable lines. The distinct count is
/// the inclusion-exclusion alternating sum.
struct PointOmittingCounts {
    Integer with_multiplicity;    // sum over complexes of #omitted
    Integer pair_multiplicity;    // sum of C(#omitted, 2)
    Integer triple_multiplicity;  // sum of C(#omitted, 3)
    Integer quad_multiplicity;    // sum of C(#omitted, 4); zero, too few lines remain
    Integer distinct;             // complexes with at least one omitted point
};

inline PointOmittingCounts count_point_omitting() {
    auto lines_avoiding = [](int k) { return binomial(8 - k, 2); };
    auto choose_complex = [&](int k) {
        const Integer pool = lines_avoiding(k);
        return pool >= 8 ? binomial(static_cast<int>(pool), 8) : Integer(0);
    };
    PointOmittingCounts c;
    c.with_multiplicity = binomial(8, 1) * choose_complex(1);
    c.pair_multiplicity = binomial(8, 2) * choose_complex(2);
    c.triple_multiplicity = binomial(8, 3) * choose_complex(3);
    c.quad_multiplicity = binomial(8, 4) * choose_complex(4);
    c.distinct = c.with_multiplicity - c.pair_multiplicity + c.triple_multiplicity - c.quad_multiplicity;
    return c;
}

/// Closed-form counts of complexes with isolated lines. A line is isolated
/// when the other 7 chosen lines avoid both its endpoints, leaving
/// C(6,2) = 15 candidates. Two isolated lines use 4 distinct points and
/// force the rest into the remaining K4; three disjoint isolated lines
/// would leave only one usable line for the other five slots, so the count
/// stops at two.
struct IsolatedLineCounts {
    Integer with_multiplicity;  // sum over complexes of #isolated lines
    Integer exactly_two;        // complexes with exactly two isolated lines
    Integer distinct;           // complexes with at least one isolated line
};

inline IsolatedLineCounts count_isolated_lines() {
    IsolatedLineCounts c;
    c.with_multiplicity = Integer(28) * binomial(15, 7);
    // 28 * 15 / 2 disjoint line pairs; the remaining six lines are forced
    // to be the whole K4 on the four untouched points, which has no
    // further isolated line.
    c.exactly_two = Integer(28) * 15 / 2;
    // Inclusion-exclusion truncates at pairs because three disjoint
    // isolated lines are impossible in eight points with eight lines.
    c.distinct = c.with_multiplicity - c.exactly_two;
    return c;
}

/// Closed-form count of (omitted point, isolated line) coincidences: the
/// point is never on the line (it is omitted), so choose the point, a line
/// avoiding it, and 7 more lines avoiding the point and both endpoints.
struct MixedCounts {
    Integer pair_multiplicity;  // sum over complexes of #omitted * #isolated
};

inline MixedCounts count_mixed() {
    MixedCounts c;
    c.pair_multiplicity = Integer(8) * 21 * binomial(10, 7);
    return c;
}

}  // namespace finrad

#include <finrad/complex.hpp>
#include <finrad/combinatorics.hpp>
#include <finrad/linalg.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <type_traits>
#include <vector>

using namespace finrad;

namespace {

const GeometrySpace& space3() {
    static const GeometrySpace s = make_space(2, 3);
    return s;
}

// Fixtures on the 8-point space. Line ids follow the pair order
// (0,1)=0, (0,2)=1, ..., (6,7)=27.
LineComplex omitted_point_complex() {
    // everything inside {0..6}; point 7 never appears
    return make_line_complex(space3(), {0, 1, 2, 3, 4, 5, 7, 8});
}

LineComplex two_squares_complex() {
    // 4-cycles 0-1-2-3 and 4-5-6-7
    return make_line_complex(space3(), {0, 2, 7, 13, 22, 24, 25, 27});
}

LineComplex isolated_line_complex() {
    // the line {0,1} alone, plus a dense component on {2..7}
    return make_line_complex(space3(), {0, 13, 14, 15, 16, 17, 18, 19});
}

LineComplex two_triangles_complex() {
    // triangle+pendant in the plane z=0 and again in z=1; admissible
    return make_line_complex(space3(), {0, 1, 2, 7, 22, 23, 24, 25});
}

}  // namespace

TEST_CASE("line ids enumerate unordered pairs in order") {
    for (int n : {3, 4}) {
        CAPTURE(n);
        const auto s = make_space(2, n);
        const int P = static_cast<int>(s.point_count);
        CHECK(line_count(s) == P * (P - 1) / 2);

        const auto lines = enumerate_lines(s);
        REQUIRE(static_cast<int>(lines.size()) == line_count(s));
        int id = 0;
        for (int i = 0; i < P; ++i)
            for (int j = i + 1; j < P; ++j, ++id) {
                CHECK(line_id(s, i, j) == id);
                CHECK(line_endpoints(s, id) == std::pair{i, j});
                CHECK(lines[static_cast<std::size_t>(id)].points == std::vector{i, j});
            }
    }

    const auto s = space3();
    CHECK_THROWS_AS(line_id(s, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(line_id(s, -1, 3), std::invalid_argument);
    CHECK_THROWS_AS(line_endpoints(s, 28), std::invalid_argument);
    CHECK_THROWS_AS(line_count(make_space(3, 2)), std::invalid_argument);
}

TEST_CASE("make_line_complex wants exactly 2^n distinct lines") {
    CHECK_NOTHROW(make_line_complex(space3(), {27, 0, 1, 2, 3, 4, 5, 6}));
    CHECK_THROWS_AS(make_line_complex(space3(), {0, 1, 2, 3, 4, 5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(make_line_complex(space3(), {0, 0, 1, 2, 3, 4, 5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(make_line_complex(space3(), {0, 1, 2, 3, 4, 5, 6, 28}), std::invalid_argument);
    CHECK_THROWS_AS(make_line_complex(make_space(3, 2), {0, 1, 2, 3, 4, 5, 6, 7, 8}),
                    std::invalid_argument);

    // stored sorted regardless of input order
    const auto c = make_line_complex(space3(), {27, 0, 1, 2, 3, 4, 5, 6});
    CHECK(std::is_sorted(c.lines.begin(), c.lines.end()));
}

TEST_CASE("build_graph reports components with cycle structure") {
    const auto g = build_graph(two_triangles_complex());
    REQUIRE(g.components.size() == 2);

    const auto& a = g.components[0];
    CHECK(a.vertices == std::vector{0, 1, 2, 3});
    CHECK_FALSE(a.is_tree);
    CHECK_FALSE(a.bipartite);
    REQUIRE(a.unique_cycle.has_value());
    CHECK(*a.unique_cycle == std::vector{0, 1, 2});

    const auto& b = g.components[1];
    CHECK(b.vertices == std::vector{4, 5, 6, 7});
    REQUIRE(b.unique_cycle.has_value());
    CHECK(*b.unique_cycle == std::vector{4, 5, 6});

    const auto sq = build_graph(two_squares_complex());
    REQUIRE(sq.components.size() == 2);
    CHECK(sq.components[0].bipartite);
    CHECK_FALSE(sq.components[0].is_tree);
    REQUIRE(sq.components[0].unique_cycle.has_value());
    CHECK(*sq.components[0].unique_cycle == std::vector{0, 1, 2, 3});
}

TEST_CASE("obstruction_scan names each obstruction") {
    SECTION("omitted point") {
        const auto rep = obstruction_scan(omitted_point_complex());
        CHECK_FALSE(rep.admissible);
        CHECK(rep.omitted_points == std::vector{7});
        CHECK(rep.isolated_tree_components.empty());
        CHECK_FALSE(rep.even_cycle.has_value());
    }

    SECTION("even cycles") {
        const auto rep = obstruction_scan(two_squares_complex());
        CHECK_FALSE(rep.admissible);
        CHECK(rep.omitted_points.empty());
        CHECK(rep.isolated_tree_components.empty());
        REQUIRE(rep.even_cycle.has_value());
        CHECK(*rep.even_cycle == std::vector{0, 1, 2, 3});
    }

    SECTION("isolated line next to a crowded component") {
        const auto rep = obstruction_scan(isolated_line_complex());
        CHECK_FALSE(rep.admissible);
        CHECK(rep.omitted_points.empty());
        REQUIRE(rep.isolated_tree_components.size() == 1);
        CHECK(rep.isolated_tree_components[0] == std::vector{0, 1});
        // the {2..7} companion is multicyclic but odd, so no even cycle
        CHECK_FALSE(rep.even_cycle.has_value());
    }

    SECTION("bipartite multicyclic component") {
        // K_{2,3} on {0,1} x {2,3,4} plus the path 6-5-7
        const auto c = make_line_complex(space3(), {1, 2, 3, 7, 8, 9, 25, 26});
        const auto rep = obstruction_scan(c);
        CHECK_FALSE(rep.admissible);
        REQUIRE(rep.even_cycle.has_value());
        CHECK(rep.even_cycle->size() % 2 == 0);
        REQUIRE(rep.isolated_tree_components.size() == 1);
        CHECK(rep.isolated_tree_components[0] == std::vector{5, 6, 7});

        // the reported cycle is a real even cycle of the complex
        const auto& cyc = *rep.even_cycle;
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            const int u = cyc[k], v = cyc[(k + 1) % cyc.size()];
            const int id = line_id(space3(), std::min(u, v), std::max(u, v));
            CHECK(std::binary_search(c.lines.begin(), c.lines.end(), id));
        }
    }

    SECTION("admissible spread union") {
        const auto rep = obstruction_scan(two_triangles_complex());
        CHECK(rep.admissible);
        CHECK(rep.omitted_points.empty());
        CHECK(rep.isolated_tree_components.empty());
        CHECK_FALSE(rep.even_cycle.has_value());
    }
}

TEST_CASE("scan verdict equals the rank oracle") {
    SECTION("fixtures") {
        CHECK_FALSE(rank_oracle_admissible(omitted_point_complex()));
        CHECK_FALSE(rank_oracle_admissible(two_squares_complex()));
        CHECK_FALSE(rank_oracle_admissible(isolated_line_complex()));
        CHECK(rank_oracle_admissible(two_triangles_complex()));
    }

    SECTION("random n=3") {
        std::mt19937_64 rng(41);
        for (int t = 0; t < 20000; ++t) {
            const auto c = testutil::sample_complex(space3(), rng);
            CHECK(obstruction_scan(c).admissible == rank_oracle_admissible(c));
        }
    }

    SECTION("random n=4") {
        std::mt19937_64 rng(42);
        const auto s = make_space(2, 4);
        for (int t = 0; t < 100000; ++t) {
            const auto c = testutil::sample_complex(s, rng);
            const auto rep = obstruction_scan(c);
            REQUIRE(rep.admissible == rank_oracle_admissible(c));
        }
    }
}

TEST_CASE("classifier flags match the detailed scan") {
    std::mt19937_64 rng(43);
    for (int n : {3, 4}) {
        const auto s = make_space(2, n);
        const int trials = n == 3 ? 20000 : 5000;
        for (int t = 0; t < trials; ++t) {
            const auto c = testutil::sample_complex(s, rng);
            std::vector<std::pair<int, int>> edges;
            for (int id : c.lines) edges.push_back(line_endpoints(s, id));
            detail::ClassifyScratch scratch;
            const auto flags = detail::classify_edges(edges.data(), static_cast<int>(edges.size()),
                                                      static_cast<int>(s.point_count), scratch);
            const auto rep = obstruction_scan(c);
            REQUIRE(flags.admissible == rep.admissible);
            REQUIRE(flags.omitted_points == static_cast<int>(rep.omitted_points.size()));
            REQUIRE((flags.even_cycle) == rep.even_cycle.has_value());
            int isolated = 0;
            for (const auto& t2 : rep.isolated_tree_components) isolated += t2.size() == 2;
            REQUIRE(flags.isolated_lines == isolated);
        }
    }
}

TEST_CASE("kernel witnesses are nonzero and annihilated") {
    SECTION("named obstructions") {
        const auto omitted = kernel_witness(omitted_point_complex());
        std::vector<Rational> delta7(8, Rational(0));
        delta7[7] = 1;
        CHECK(omitted.values == delta7);

        const auto alternating = kernel_witness(two_squares_complex());
        CHECK(alternating.values ==
              std::vector<Rational>{1, -1, 1, -1, 0, 0, 0, 0});

        const auto pair = kernel_witness(isolated_line_complex());
        CHECK(pair.values[0] == 1);
        CHECK(pair.values[1] == -1);
    }

    SECTION("random inadmissible complexes") {
        std::mt19937_64 rng(44);
        int found = 0;
        while (found < 500) {
            const auto c = testutil::sample_complex(space3(), rng);
            if (obstruction_scan(c).admissible) continue;
            ++found;
            const auto w = kernel_witness(c);
            bool nonzero = false;
            for (const auto& v : w.values) nonzero = nonzero || v != 0;
            REQUIRE(nonzero);
            const auto image = restricted_apply(c, w);
            for (const auto& v : image.values) REQUIRE(v == 0);
        }
    }

    SECTION("witness attachment and the admissible error") {
        const auto rep = obstruction_scan(two_squares_complex(), true);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->values == kernel_witness(two_squares_complex()).values);

        CHECK_THROWS_AS(kernel_witness(two_triangles_complex()), std::invalid_argument);
    }
}

TEST_CASE("restricted transform matches its matrix") {
    std::mt19937_64 rng(45);
    const auto c = two_triangles_complex();
    const auto m = restricted_matrix(c);
    REQUIRE(m.rows == 8);
    REQUIRE(m.cols == 8);
    for (int t = 0; t < 20; ++t) {
        const auto f = testutil::random_point_values(8, rng);
        const auto g = restricted_apply(c, f);
        REQUIRE(g.role == DataRole::blocks);
        for (int r = 0; r < m.rows; ++r) {
            Rational acc = 0;
            for (int col = 0; col < m.cols; ++col)
                if (m.at(r, col)) acc += f.values[static_cast<std::size_t>(col)];
            CHECK(acc == g.values[static_cast<std::size_t>(r)]);
        }
    }
}

TEST_CASE("reconstruct inverts the restricted transform") {
    std::mt19937_64 rng(46);

    SECTION("structured fixtures") {
        const auto c = two_triangles_complex();
        for (int t = 0; t < 50; ++t) {
            const auto f = testutil::random_point_values(8, rng);
            const auto g = restricted_apply(c, f);
            CHECK(reconstruct(c, g).values == f.values);
        }

        // odd-cycle seed: f(v1) = (g1 - g2 + g3)/2 around the triangle 0-1-2
        const auto f = testutil::random_point_values(8, rng);
        const auto g = restricted_apply(c, f);
        const auto s = space3();
        const Rational g01 = g.values[0];  // lines arrive sorted: (0,1) first
        const Rational g12 = g.values[static_cast<std::size_t>(
            std::lower_bound(c.lines.begin(), c.lines.end(), line_id(s, 1, 2)) - c.lines.begin())];
        const Rational g02 = g.values[static_cast<std::size_t>(
            std::lower_bound(c.lines.begin(), c.lines.end(), line_id(s, 0, 2)) - c.lines.begin())];
        CHECK(f.values[0] == (g01 - g12 + g02) / 2);
    }

    SECTION("sampled admissible complexes") {
        int found = 0;
        while (found < 100) {
            const auto c = testutil::sample_complex(space3(), rng);
            if (!obstruction_scan(c).admissible) continue;
            ++found;
            for (int t = 0; t < 5; ++t) {
                const auto f = testutil::random_point_values(8, rng);
                CHECK(reconstruct(c, restricted_apply(c, f)).values == f.values);
            }
        }
    }

    SECTION("rejects bad inputs") {
        const auto c = two_triangles_complex();
        DataVector g;
        g.role = DataRole::blocks;
        g.values.assign(7, Rational(0));
        CHECK_THROWS_AS(reconstruct(c, g), std::invalid_argument);

        DataVector ok;
        ok.role = DataRole::blocks;
        ok.values.assign(8, Rational(0));
        CHECK_THROWS_AS(reconstruct(two_squares_complex(), ok), InadmissibleComplexError);

        // both error types stay catchable on their own
        static_assert(std::is_base_of_v<std::runtime_error, InadmissibleComplexError>);
        static_assert(std::is_base_of_v<std::runtime_error, InconsistentDataError>);
        static_assert(!std::is_base_of_v<InadmissibleComplexError, InconsistentDataError>);
    }
}

TEST_CASE("relative admissibility within a 4-point plane") {
    const auto s = space3();
    const auto plane = make_flat(s, 2, {0, 1, 2, 3});

    // triangle + pendant works, the 4-cycle does not
    CHECK(relatively_admissible(s, plane, {0, 1, 2, 7}));
    CHECK_FALSE(relatively_admissible(s, plane, {0, 2, 7, 13}));

    // of the C(6,4)=15 quadruples, exactly the three perfect-matching
    // complements are even 4-cycles; the other 12 pass
    const std::vector<int> plane_lines = {0, 1, 2, 7, 8, 13};
    const std::set<std::set<int>> cycles = {{1, 2, 7, 8}, {0, 2, 7, 13}, {0, 1, 8, 13}};
    int passing = 0;
    std::vector<int> pick = {0, 1, 2, 3};
    do {
        std::vector<int> ids;
        for (int k : pick) ids.push_back(plane_lines[static_cast<std::size_t>(k)]);
        const bool ok = relatively_admissible(s, plane, ids);
        passing += ok;
        CHECK(ok == !cycles.count(std::set<int>(ids.begin(), ids.end())));
    } while (next_combination(pick, 6));
    CHECK(passing == 12);

    CHECK_THROWS_AS(relatively_admissible(s, plane, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(relatively_admissible(s, plane, {0, 1, 2, 3}), std::invalid_argument);  // (0,4) leaves the plane
}

TEST_CASE("two-plane unions and perpendicular legs assemble admissible complexes") {
    const auto s = space3();
    const auto bottom = make_flat(s, 2, {0, 1, 2, 3});
    const auto top = make_flat(s, 2, {4, 5, 6, 7});

    SECTION("spread union") {
        const auto c = construct_spread_union(s, bottom, top, {0, 1, 2, 7}, {22, 23, 24, 25});
        CHECK(c.lines == std::vector{0, 1, 2, 7, 22, 23, 24, 25});
        CHECK(obstruction_scan(c).admissible);

        CHECK_THROWS_AS(construct_spread_union(s, bottom, top, {0, 2, 7, 13}, {22, 23, 24, 25}),
                        std::invalid_argument);  // 4-cycle on the bottom
        CHECK_THROWS_AS(construct_spread_union(s, bottom, bottom, {0, 1, 2, 7}, {0, 1, 2, 7}),
                        std::invalid_argument);  // same plane twice
        const auto crossing = make_flat(s, 2, {0, 1, 4, 5});
        CHECK_THROWS_AS(construct_spread_union(s, bottom, crossing, {0, 1, 2, 7}, {3, 10, 22, 4}),
                        std::invalid_argument);  // planes intersect
    }

    SECTION("legs") {
        const auto legs = perpendicular_legs(s, bottom, 4);
        CHECK(legs == std::vector{3, 10, 16, 21});  // (0,4),(1,5),(2,6),(3,7)

        const auto c = construct_legs(s, bottom, {0, 1, 2, 7}, legs);
        CHECK(obstruction_scan(c).admissible);
        const auto g = build_graph(c);
        REQUIRE(g.components.size() == 1);  // core plus pendants, one odd cycle

        CHECK_THROWS_AS(perpendicular_legs(s, bottom, 1), std::invalid_argument);  // stays in the plane
        CHECK_THROWS_AS(perpendicular_legs(s, bottom, 0), std::invalid_argument);
        CHECK_THROWS_AS(construct_legs(s, bottom, {0, 2, 7, 13}, legs), std::invalid_argument);
        CHECK_THROWS_AS(construct_legs(s, bottom, {0, 1, 2, 7}, {3, 10, 16, 20}),
                        std::invalid_argument);  // legs collide on 6, leaving 7 uncovered
    }
}

TEST_CASE("a fully nonplanar admissible complex exists") {
    const auto found = search_nonplanar_admissible();
    REQUIRE(found.has_value());
    CHECK(found->lines == std::vector{0, 1, 2, 3, 4, 5, 11, 17});
    CHECK(obstruction_scan(*found).admissible);
    CHECK(rank_oracle_admissible(*found));

    // no 2-flat sees a relatively admissible quadruple
    const auto s = space3();
    for (const auto& plane : enumerate_hyperplanes(s)) {
        std::vector<int> inside;
        for (int id : found->lines) {
            const auto [u, v] = line_endpoints(s, id);
            const bool uin = std::binary_search(plane.points.begin(), plane.points.end(), u);
            const bool vin = std::binary_search(plane.points.begin(), plane.points.end(), v);
            if (uin && vin) inside.push_back(id);
        }
        if (inside.size() == 4)
            CHECK_FALSE(relatively_admissible(s, plane, inside));
        else
            CHECK(inside.size() < 4);
    }
}

TEST_CASE("admissibility-rate sampling is deterministic and plausible") {
    const auto a = sample_admissibility_rate(3, 20000, 7);
    const auto b = sample_admissibility_rate(3, 20000, 7);
    CHECK(a.trials == 20000);
    CHECK(a.admissible == b.admissible);
    CHECK(a.rate == b.rate);
    // exhaustive rate is 937440/3108105 ~ 0.3016
    CHECK(a.rate > Rational(28, 100));
    CHECK(a.rate < Rational(33, 100));

    const auto c = sample_admissibility_rate(3, 20000, 8);
    CHECK(c.admissible != a.admissible);  // different seed, different draw

    CHECK_NOTHROW(sample_admissibility_rate(4, 2000, 1));
    CHECK_NOTHROW(sample_admissibility_rate(5, 500, 1));
    CHECK_THROWS_AS(sample_admissibility_rate(2, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_admissibility_rate(3, 0, 1), std::invalid_argument);
}

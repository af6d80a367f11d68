#include <finrad/radon.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <random>
#include <sstream>
#include <vector>

using namespace finrad;

TEST_CASE("make_incidence_geometry validates its pairs") {
    // pairs are (point, block)
    CHECK_NOTHROW(make_incidence_geometry(2, 1, {{0, 0}, {1, 0}}));
    CHECK_THROWS_AS(make_incidence_geometry(2, 1, {{0, 0}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_incidence_geometry(2, 1, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(make_incidence_geometry(2, 1, {{1, 0}, {-1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_incidence_geometry(0, 1, {}), std::invalid_argument);

    // one point, one block
    const auto g = make_incidence_geometry(1, 1, {{0, 0}});
    const auto m = radon_matrix(g);
    REQUIRE(m.rows == 1);
    REQUIRE(m.cols == 1);
    CHECK(m.at(0, 0) == 1);
}

TEST_CASE("incidence matrix of the line transform has uniform weights") {
    const auto g = lines_geometry(make_space(2, 3));
    REQUIRE(g.x_count == 8);
    REQUIRE(g.y_count == 28);
    const auto m = radon_matrix(g);
    REQUIRE(m.rows == 28);
    REQUIRE(m.cols == 8);
    for (int r = 0; r < m.rows; ++r) {
        int w = 0;
        for (int c = 0; c < m.cols; ++c) w += m.at(r, c);
        CHECK(w == 2);  // q points per line
    }
    for (int c = 0; c < m.cols; ++c) {
        int w = 0;
        for (int r = 0; r < m.rows; ++r) w += m.at(r, c);
        CHECK(w == 7);  // lines through a point
    }
}

TEST_CASE("dump_matrix emits single-space rows") {
    const auto m = radon_matrix(polygon_geometry(3));
    std::ostringstream os;
    dump_matrix(m, os);
    CHECK(os.str() == "1 1 0\n0 1 1\n1 0 1\n");
}

TEST_CASE("polygon geometry is the two-point circulant") {
    for (int m = 3; m <= 6; ++m) {
        CAPTURE(m);
        const auto g = polygon_geometry(m);
        REQUIRE(g.x_count == m);
        REQUIRE(g.y_count == m);
        const auto mat = radon_matrix(g);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                const int expect = (c == r || c == (r + 1) % m) ? 1 : 0;
                CHECK(mat.at(r, c) == expect);
            }
    }
    CHECK_THROWS_AS(polygon_geometry(2), std::invalid_argument);
}

TEST_CASE("radon_apply and dual_apply are adjoint") {
    std::mt19937_64 rng(21);
    const std::vector<IncidenceGeometry> geoms = {
        lines_geometry(make_space(2, 3)),
        hyperplanes_geometry(make_space(2, 3)),
        lines_geometry(make_space(3, 2)),
        polygon_geometry(5),
    };
    for (const auto& g : geoms) {
        for (int t = 0; t < 25; ++t) {
            const auto f = testutil::random_point_values(g.x_count, rng);
            const auto h = testutil::random_block_values(g.y_count, rng);
            CHECK(testutil::inner(radon_apply(g, f).values, h.values) ==
                  testutil::inner(f.values, dual_apply(g, h).values));
        }
    }
}

TEST_CASE("radon_apply sums over block points") {
    const auto g = lines_geometry(make_space(2, 3));
    DataVector delta;
    delta.role = DataRole::points;
    delta.values.assign(8, Rational(0));
    delta.values[0] = 1;
    const auto image = radon_apply(g, delta);
    int nonzero = 0;
    for (int y = 0; y < g.y_count; ++y) {
        const auto& pts = g.block_points[static_cast<std::size_t>(y)];
        const bool contains = std::binary_search(pts.begin(), pts.end(), 0);
        CHECK(image.values[static_cast<std::size_t>(y)] == (contains ? 1 : 0));
        nonzero += contains;
    }
    CHECK(nonzero == 7);

    DataVector wrong_role = image;
    CHECK_THROWS_AS(radon_apply(g, wrong_role), std::invalid_argument);
    DataVector wrong_size = delta;
    wrong_size.values.pop_back();
    CHECK_THROWS_AS(radon_apply(g, wrong_size), std::invalid_argument);
}

namespace {

struct UniformityCase {
    IncidenceGeometry g;
    std::int64_t alpha;
    std::int64_t beta;
};

std::vector<UniformityCase> uniform_cases() {
    std::vector<UniformityCase> cs;
    cs.push_back({lines_geometry(make_space(2, 3)), 7, 1});
    cs.push_back({hyperplanes_geometry(make_space(2, 3)), 7, 3});
    cs.push_back({lines_geometry(make_space(3, 2)), 4, 1});
    cs.push_back({polygon_geometry(3), 2, 1});
    return cs;
}

}  // namespace

TEST_CASE("bolker_check finds the uniform intersection counts") {
    for (const auto& c : uniform_cases()) {
        const auto rep = bolker_check(c.g);
        REQUIRE(rep.holds);
        CHECK(rep.alpha == c.alpha);
        CHECK(rep.beta == c.beta);
    }

    // even polygons have both shared and disjoint edge pairs
    const auto rect = bolker_check(polygon_geometry(4));
    CHECK_FALSE(rect.holds);
    CHECK(rect.alpha == 2);
    CHECK_FALSE(rect.beta.has_value());

    const auto pent = bolker_check(polygon_geometry(5));
    CHECK_FALSE(pent.holds);

    CHECK_THROWS_AS(bolker_check(make_incidence_geometry(1, 1, {{0, 0}})), std::invalid_argument);
}

TEST_CASE("normal operator equals (alpha-beta)I + beta J entrywise") {
    for (const auto& c : uniform_cases()) {
        const auto m = testutil::gram(c.g);
        for (int i = 0; i < c.g.x_count; ++i)
            for (int j = 0; j < c.g.x_count; ++j) {
                const long long expect = (i == j) ? c.alpha : c.beta;
                CHECK(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == expect);
            }
    }
}

TEST_CASE("inverse coefficients invert the normal operator symbolically") {
    for (const auto& c : uniform_cases()) {
        const auto [cc, dd] = bolker_inverse_coefficients(c.alpha, c.beta, c.g.x_count);
        const auto m = testutil::gram(c.g);
        const int n = c.g.x_count;
        // (c I + d J) (R^t R) must be the identity
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational acc = 0;
                for (int k = 0; k < n; ++k) {
                    const Rational inv = (i == k ? cc : Rational(0)) + dd;
                    acc += inv * m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                }
                CHECK(acc == (i == j ? 1 : 0));
            }
    }

    const auto [c23, d23] = bolker_inverse_coefficients(7, 1, 8);
    CHECK(c23 == Rational(1, 6));
    CHECK(d23 == Rational(-1, 84));
    const auto [ch, dh] = bolker_inverse_coefficients(7, 3, 8);
    CHECK(ch == Rational(1, 4));
    CHECK(dh == Rational(-3, 112));
    const auto [c32, d32] = bolker_inverse_coefficients(4, 1, 9);
    CHECK(c32 == Rational(1, 3));
    CHECK(d32 == Rational(-1, 36));

    CHECK_THROWS_AS(bolker_inverse_coefficients(3, 3, 5), std::invalid_argument);
}

TEST_CASE("bolker_invert undoes radon_apply") {
    std::mt19937_64 rng(22);
    for (const auto& c : uniform_cases()) {
        for (int t = 0; t < 30; ++t) {
            const auto f = testutil::random_point_values(c.g.x_count, rng);
            const auto back = bolker_invert(c.g, radon_apply(c.g, f));
            CHECK(back.values == f.values);
        }
    }

    const auto rect = polygon_geometry(4);
    DataVector data;
    data.role = DataRole::blocks;
    data.values.assign(4, Rational(1));
    CHECK_THROWS_AS(bolker_invert(rect, data), std::invalid_argument);
}

TEST_CASE("polygon injectivity depends on parity") {
    for (int m = 3; m <= 12; ++m) {
        CAPTURE(m);
        CHECK(is_injective(polygon_geometry(m)) == (m % 2 == 1));
    }
}

TEST_CASE("line transform injectivity by dimension over Z_2") {
    // n=1 has a single line summing both points: not injective
    CHECK_FALSE(is_injective(lines_geometry(make_space(2, 1))));
    CHECK(is_injective(lines_geometry(make_space(2, 2))));
    CHECK(is_injective(lines_geometry(make_space(2, 3))));
    CHECK(is_injective(lines_geometry(make_space(2, 4))));

    CHECK(exact_rank(radon_matrix(lines_geometry(make_space(2, 3)))) == 8);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "semirec/space.hpp"

using namespace semirec;

TEST_CASE("metric: boxes use the Euclidean distance, circles arc length") {
    const PhaseSpace box1 = PhaseSpace::box(IntervalBox(Interval{-2, 2}));
    CHECK(box1.dist(Point(-1.0), Point(0.0)) == 1.0);

    const PhaseSpace circle = PhaseSpace::circle();
    CHECK(circle.dist(Point(0.1), Point(0.9)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(circle.dist(Point(0.25), Point(0.75)) == doctest::Approx(0.5).epsilon(1e-12));

    const PhaseSpace box2 = PhaseSpace::box(IntervalBox(Interval{-10, 10}, Interval{-10, 10}));
    CHECK(box2.dist(Point(0.0, 0.0), Point(3.0, 4.0)) == 5.0);
}

TEST_CASE("metric: symmetry, identity and the triangle inequality on random triples") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const PhaseSpace spaces[2] = {PhaseSpace::box(IntervalBox(Interval{-5, 5}, Interval{-1, 7})),
                                  PhaseSpace::circle()};
    for (const auto& space : spaces) {
        for (int trial = 0; trial < 10000; ++trial) {
            Point p[3];
            for (auto& q : p) {
                q = Point::zero(space.dim());
                for (int d = 0; d < space.dim(); ++d)
                    q[d] = space.bounds()[d].lo() + space.bounds()[d].width() * unit(rng);
            }
            const double ab = space.dist(p[0], p[1]);
            const double bc = space.dist(p[1], p[2]);
            const double ac = space.dist(p[0], p[2]);
            REQUIRE(ab >= 0.0);
            REQUIRE(ab == space.dist(p[1], p[0]));
            REQUIRE(ac <= ab + bc + 1e-12);
            REQUIRE(space.dist(p[0], p[0]) == 0.0);
        }
    }
}

TEST_CASE("grid: cell lookup matches the worked arithmetic") {
    const PhaseSpace space = PhaseSpace::box(IntervalBox(Interval{-2, 2}));
    const Grid grid(space, {4});
    CHECK(grid.flat_cell_of(Point(-1.9)) == 0);
    CHECK(grid.center_of_flat(0)[0] == doctest::Approx(-1.5).epsilon(1e-15));

    const Grid tens(PhaseSpace::box(IntervalBox(Interval{0, 1})), {10});
    CHECK(tens.flat_cell_of(Point(0.55)) == 5);
    // Last cell is closed: the right endpoint belongs to the grid.
    CHECK(tens.flat_cell_of(Point(1.0)) == 9);
}

TEST_CASE("grid: center_of then cell_of is the identity on every cell") {
    const Grid grids[] = {Grid(PhaseSpace::box(IntervalBox(Interval{-2, 2})), {17}),
                          Grid(PhaseSpace::box(IntervalBox(Interval{-1, 1}, Interval{0, 3})), {5, 8}),
                          Grid(PhaseSpace::circle(), {12})};
    for (const auto& grid : grids) {
        for (int c = 0; c < grid.cell_count(); ++c) {
            REQUIRE(grid.flat(grid.cell_of(grid.center_of_flat(c))) == c);
        }
    }
}

TEST_CASE("grid: every point lands in exactly one cell, within the center bound") {
    const Grid grid(PhaseSpace::box(IntervalBox(Interval{-2, 2}, Interval{-2, 2})), {7, 11});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double bound = grid.center_slack() + 1e-12;
    for (int trial = 0; trial < 5000; ++trial) {
        Point p(-2.0 + 4.0 * unit(rng), -2.0 + 4.0 * unit(rng));
        const CellId c = grid.cell_of(p);
        REQUIRE(grid.space().dist(p, grid.center_of(c)) <= bound);
        REQUIRE(grid.cell_box(c).contains(p, 1e-12));
    }
    CHECK_THROWS_AS(grid.cell_of(Point(3.0, 0.0)), DomainError);
}

TEST_CASE("grid: circle cells wrap") {
    const Grid grid(PhaseSpace::circle(), {10});
    CHECK(grid.flat_cell_of(Point(1.05)) == 0);
    CHECK(grid.flat_cell_of(Point(-0.05)) == 9);
    CHECK(grid.space().dist(Point(0.05), grid.center_of_flat(0)) == 0.0);
}

TEST_CASE("circle arcs: wrapping an interval") {
    const auto one = circle_arcs(Interval{0.2, 0.4});
    REQUIRE(one.size() == 1);
    CHECK(one[0].lo() == doctest::Approx(0.2));

    const auto two = circle_arcs(Interval{0.9, 1.2});
    REQUIRE(two.size() == 2);
    CHECK(two[0].contains(0.95));
    CHECK(two[1].contains(0.1));

    const auto all = circle_arcs(Interval{-3.0, 3.0});
    REQUIRE(all.size() == 1);
    CHECK(all[0] == Interval{0.0, 1.0});

    const PhaseSpace circle = PhaseSpace::circle();
    CHECK(image_overlaps(circle, IntervalBox(Interval{0.95, 1.1}),
                         IntervalBox(Interval{0.0, 0.2})));
    CHECK_FALSE(image_overlaps(circle, IntervalBox(Interval{0.3, 0.4}),
                               IntervalBox(Interval{0.6, 0.8})));
}

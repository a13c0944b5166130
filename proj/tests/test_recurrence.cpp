#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semirec/recurrence.hpp"
#include "test_util.hpp"

using namespace semirec;
using testutil::box_system;
using testutil::circle_system;

namespace {

bool has_point(const std::vector<OrbitPointRecord>& recs, double x, double tol = 1e-7) {
    for (const auto& r : recs)
        if (std::fabs(r.point[0] - x) <= tol) return true;
    return false;
}

} // namespace

TEST_CASE("fixed points of single generators by sign-change bisection") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});

    const auto sq = fixed_points_of_word(sys, Word::single(0), 10000);
    REQUIRE(sq.records.size() == 2);
    CHECK(has_point(sq.records, 0.0));
    CHECK(has_point(sq.records, 1.0));

    // Quadratic-formula oracle for x^2 - x - 1/2 = 0.
    const double root_lo = (1.0 - std::sqrt(3.0)) / 2.0;
    const double root_hi = (1.0 + std::sqrt(3.0)) / 2.0;
    const auto off = fixed_points_of_word(sys, Word::single(1), 10000);
    REQUIRE(off.records.size() == 2);
    CHECK(has_point(off.records, root_lo));
    CHECK(has_point(off.records, root_hi));
    for (const auto& r : off.records) CHECK(r.residual <= kTolFix);
}

TEST_CASE("the cube map fixes -1, 0 and 1") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    const auto cube = fixed_points_of_word(sys, Word::single(1), 10000);
    REQUIRE(cube.records.size() == 3);
    CHECK(has_point(cube.records, -1.0));
    CHECK(has_point(cube.records, 0.0));
    CHECK(has_point(cube.records, 1.0));
}

TEST_CASE("orbit points: shortest witnesses and the worked systems") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    const auto r = orbit_points(sys, 1, 10000);
    REQUIRE(has_point(r.records, 1.0));
    for (const auto& rec : r.records) {
        if (std::fabs(rec.point[0] - 1.0) <= 1e-7) {
            CHECK(rec.witness.applied == std::vector<int>{0}); // witness is the squaring map
        }
        // every record replays
        const auto replay = word_eval(sys, rec.witness, rec.point);
        REQUIRE_FALSE(replay.escaped);
        REQUIRE(std::fabs(replay.value[0] - rec.point[0]) <= kTolFix);
    }

    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    const auto rc = orbit_points(cubes, 1, 10000);
    CHECK(has_point(rc.records, -1.0));
    CHECK(has_point(rc.records, 0.0));
    CHECK(has_point(rc.records, 1.0));
}

TEST_CASE("fixed set: intersection over the generators") {
    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    const auto fs = fix_set(cubes, 10000);
    REQUIRE(fs.size() == 2);
    CHECK(std::fabs(fs[0][0] - 0.0) <= 1e-7);
    CHECK(std::fabs(fs[1][0] - 1.0) <= 1e-7);

    const auto disjoint = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    CHECK(fix_set(disjoint, 10000).empty());

    const auto single = box_system(-2, 2, {{"g1", "x^2"}});
    CHECK(fix_set(single, 10000).size() == 2);
}

TEST_CASE("fixed set is contained in the orbit points") {
    for (const auto& sys :
         {box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}}),
          box_system(-1, 1, {{"t2", "2*x^2 - 1"}, {"t3", "4*x^3 - 3*x"}})}) {
        const auto fs = fix_set(sys, 4000);
        const auto op = orbit_points(sys, 1, 4000);
        for (const auto& p : fs) REQUIRE(has_point(op.records, p[0], 1e-6));
    }
}

TEST_CASE("omega limit of 1 under the squaring pair accumulates at 0") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    const OmegaApprox w = omega_limit(sys, Point(1.0), 0, {3, 5, 8});
    const auto persistent = w.persistent_clusters();
    REQUIRE_FALSE(persistent.empty());
    bool near_zero = false, near_one = false;
    for (const auto& c : persistent) {
        if (std::fabs(c.center[0]) <= kTolCluster) near_zero = true;
        if (std::fabs(c.center[0] - 1.0) <= kTolCluster) near_one = true;
    }
    CHECK(near_zero); // the walked-down sequence
    CHECK(near_one);  // 1 is fixed by every pivot power
}

TEST_CASE("omega limit of a common fixed point is that point") {
    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    for (int pivot = 0; pivot < 2; ++pivot) {
        const OmegaApprox w = omega_limit(cubes, Point(0.0), pivot, {3, 5, 8});
        const auto persistent = w.persistent_clusters();
        REQUIRE(persistent.size() == 1);
        CHECK(std::fabs(persistent[0].center[0]) <= 1e-12);
    }
}

TEST_CASE("omega limit of an irrational rotation fills the circle") {
    const auto rot = circle_system({{"r", "x + 0.618034"}});
    std::vector<int> schedule;
    for (int n = 1; n <= 1500; ++n) schedule.push_back(n);
    OmegaOptions opts;
    opts.tol_cluster = 0.02;

    // Equidistribution oracle: direct iteration visits every 0.05-wide cell.
    {
        std::vector<bool> hit(20, false);
        double x = 0.2;
        for (int n = 0; n < 1500; ++n) {
            x += 0.618034;
            x -= std::floor(x);
            hit[static_cast<std::size_t>(std::min(19, static_cast<int>(x / 0.05)))] = true;
        }
        for (bool h : hit) REQUIRE(h);
    }

    const OmegaApprox w = omega_limit(rot, Point(0.2), 0, schedule, opts);
    std::vector<bool> covered(20, false);
    for (const auto& c : w.clusters) {
        const int cell = std::min(19, static_cast<int>(c.center[0] / 0.05));
        covered[static_cast<std::size_t>(cell)] = true;
    }
    for (int i = 0; i < 20; ++i) {
        CAPTURE(i);
        CHECK(covered[static_cast<std::size_t>(i)]);
    }

    // With a sparse schedule nothing persists: each image lands far from the
    // others, so no cluster is hit at every scheduled count.
    const OmegaApprox sparse = omega_limit(rot, Point(0.2), 0, {3, 5, 8});
    CHECK(sparse.persistent_clusters().empty());
}

TEST_CASE("recurrence: the orbit point -1 returns under cube powers") {
    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    const Verdict v = is_recurrent(cubes, Point(-1.0), 1);
    REQUIRE(v.status == Status::CertifiedYes);
    REQUIRE(v.witness_words.size() == 3);
    RecurrenceBudgets budgets;
    for (std::size_t i = 0; i < v.witness_words.size(); ++i) {
        const Word& w = v.witness_words[i];
        CHECK(w.count_of(1) == budgets.schedule[i]);
        const auto replay = word_eval(cubes, w, Point(-1.0));
        REQUIRE_FALSE(replay.escaped);
        REQUIRE(cubes.space().dist(replay.value, Point(-1.0)) < budgets.tol);
    }
}

TEST_CASE("recurrence: common fixed points are recurrent, drifting points are not certified") {
    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    CHECK(is_recurrent(cubes, Point(0.0), 0).status == Status::CertifiedYes);
    CHECK(is_recurrent(cubes, Point(0.0), 1).status == Status::CertifiedYes);

    // Oracle: under squaring, 0.3 decays monotonically, never returning.
    double x = 0.3;
    for (int n = 0; n < 8; ++n) {
        x = x * x;
        REQUIRE(std::fabs(x - 0.3) > kTolCluster);
    }
    const auto single = box_system(-2, 2, {{"g1", "x^2"}});
    const Verdict v = is_recurrent(single, Point(0.3), 0);
    CHECK(v.status == Status::Inconclusive);
    CHECK_FALSE(v.budgets.empty()); // the budget that bounded the search is disclosed
}

TEST_CASE("containment: every detected orbit point is certified recurrent") {
    const auto systems = {box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}}),
                          box_system(-1, 1, {{"t2", "2*x^2 - 1"}, {"t3", "4*x^3 - 3*x"}})};
    for (const auto& sys : systems) {
        const auto op = orbit_points(sys, 2, 4000);
        REQUIRE_FALSE(op.records.empty());
        for (const auto& rec : op.records) {
            const int pivot = rec.witness.applied.front();
            const int m = rec.witness.count_of(pivot);
            RecurrenceBudgets budgets;
            budgets.schedule = {3 * m, 5 * m, 8 * m};
            budgets.block_cap = rec.witness.length();
            const Verdict v = is_recurrent(sys, rec.point, pivot, budgets, rec.witness);
            CAPTURE(rec.point[0]);
            REQUIRE(v.status == Status::CertifiedYes);
        }
    }
}

TEST_CASE("abelian systems carry their orbit points along the generators") {
    const auto cheb = box_system(-1, 1, {{"t2", "2*x^2 - 1"}, {"t3", "4*x^3 - 3*x"}}, true);
    const auto op = orbit_points(cheb, 2, 4000);
    REQUIRE(op.records.size() >= 5);
    for (const auto& rec : op.records) {
        for (int gi = 0; gi < cheb.generator_count(); ++gi) {
            const auto moved = word_eval(cheb, Word::single(gi), rec.point);
            if (moved.escaped) continue;
            const auto back = word_eval(cheb, rec.witness, moved.value);
            REQUIRE_FALSE(back.escaped);
            REQUIRE(std::fabs(back.value[0] - moved.value[0]) <= 10 * kTolFix);
        }
    }
}

TEST_CASE("identity-like words are flagged, not expanded into a continuum") {
    const auto rot = circle_system({{"r", "x + 0.25"}});
    const auto op = orbit_points(rot, 4, 200);
    REQUIRE(op.identity_like_words.size() == 1);
    CHECK(op.identity_like_words[0].applied == std::vector<int>{0, 0, 0, 0});
    CHECK(op.records.empty());
}

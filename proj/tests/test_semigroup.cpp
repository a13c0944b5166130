#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semirec/verdict.hpp"
#include "test_util.hpp"

using namespace semirec;
using testutil::box_system;
using testutil::circle_system;

namespace {

// Plain coefficient arithmetic, used as an oracle for composition identities.
using Poly = std::vector<double>;

Poly pmul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly pcompose(const Poly& outer, const Poly& inner) {
    Poly r{0.0};
    Poly power{1.0};
    for (std::size_t i = 0; i < outer.size(); ++i) {
        if (r.size() < power.size()) r.resize(power.size(), 0.0);
        for (std::size_t j = 0; j < power.size(); ++j) r[j] += outer[i] * power[j];
        power = pmul(power, inner);
    }
    return r;
}

double peval(const Poly& p, double x) {
    double r = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

} // namespace

TEST_CASE("enumeration: shortlex order and counts") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});

    const auto full = enumerate_words(sys, WordClass::Full, 2);
    REQUIRE(full.size() == 6);
    CHECK(full[0].applied == std::vector<int>{0});
    CHECK(full[1].applied == std::vector<int>{1});
    CHECK(full[2].applied == std::vector<int>{0, 0});
    CHECK(full[3].applied == std::vector<int>{0, 1});
    CHECK(full[4].applied == std::vector<int>{1, 0});
    CHECK(full[5].applied == std::vector<int>{1, 1});

    const auto composite = enumerate_words(sys, WordClass::CompositeOnly, 2);
    REQUIRE(composite.size() == 4);
    for (const auto& w : composite) CHECK(w.length() == 2);

    const auto with_id = enumerate_words(sys, WordClass::WithIdentity, 1);
    REQUIRE(with_id.size() == 3);
    CHECK(with_id[0].empty());

    CHECK_THROWS_AS(enumerate_words(sys, WordClass::Full, 30), BudgetError);
}

TEST_CASE("word evaluation: worked examples and the empty word") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    // Apply g1 first, then g2.
    CHECK(word_eval(sys, Word{{0, 1}}, Point(1.0)).value[0] == 0.5);
    CHECK(word_eval(sys, Word::empty_word(), Point(0.73)).value[0] == 0.73);

    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    const auto r = word_eval(cubes, Word::single(1), Point(-1.0));
    CHECK_FALSE(r.escaped);
    CHECK(r.value[0] == -1.0);

    // 2 -> 4 leaves the window.
    CHECK(word_eval(cubes, Word::single(0), Point(2.0)).escaped);
}

TEST_CASE("word evaluation is a homomorphism over concatenation") {
    const auto sys = box_system(-1, 1, {{"t2", "2*x^2 - 1"}, {"t3", "4*x^3 - 3*x"}});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> len(0, 4), gen(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
        Word w1, w2;
        for (int i = len(rng); i-- > 0;) w1.applied.push_back(gen(rng));
        for (int i = len(rng); i-- > 0;) w2.applied.push_back(gen(rng));
        const Point x(unit(rng));
        const auto direct = word_eval(sys, w1.then(w2), x);
        const auto staged = word_eval(sys, w2, word_eval(sys, w1, x).value);
        REQUIRE(direct.value[0] == staged.value[0]);
    }
}

TEST_CASE("orbit of 1 under the squaring pair walks down to 0 but never reaches it") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    const OrbitResult r = orbit(sys, Point(1.0), 12);

    auto contains = [&](double v) {
        for (const auto& e : r.entries)
            if (std::fabs(e.value[0] - v) <= 1e-12) return true;
        return false;
    };
    CHECK(contains(1.0));
    CHECK(contains(0.5));
    CHECK(contains(0.25));
    CHECK(contains(0.0625)); // squaring after the offset step: 1/4 -> 1/16

    bool tiny = false;
    for (const auto& e : r.entries) {
        REQUIRE(std::fabs(e.value[0]) > 0.0); // 0 itself is never reached
        if (std::fabs(e.value[0]) < 1e-3) tiny = true;
    }
    CHECK(tiny);
}

TEST_CASE("orbit: witnesses replay and the common fixed point is alone") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    const OrbitResult r = orbit(sys, Point(1.0), 6);
    for (const auto& e : r.entries) {
        const auto replay = word_eval(sys, e.witness, Point(1.0));
        REQUIRE_FALSE(replay.escaped);
        REQUIRE(replay.value[0] == e.value[0]);
    }

    const auto cubes = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    const OrbitResult fixed = orbit(cubes, Point(0.0), 5);
    CHECK(fixed.entries.size() == 1);
    CHECK(fixed.entries[0].value[0] == 0.0);
}

TEST_CASE("orbit grows monotonically with the word budget") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    for (int budget = 1; budget < 8; ++budget) {
        const OrbitResult small = orbit(sys, Point(1.0), budget);
        const OrbitResult big = orbit(sys, Point(1.0), budget + 1);
        for (const auto& e : small.entries) {
            bool found = false;
            for (const auto& f : big.entries)
                if (std::fabs(e.value[0] - f.value[0]) <= 1e-9) found = true;
            REQUIRE(found);
        }
    }
}

TEST_CASE("generator-invariant sets absorb every word") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    // [0, 1] is invariant under both generators; check by interval images.
    const IntervalBox y(Interval{0.0, 1.0});
    for (int gi = 0; gi < sys.generator_count(); ++gi) {
        const Interval img = eval_interval(sys.generator(gi).map, y)[0];
        REQUIRE(img.lo() >= -1e-12);
        REQUIRE(img.hi() <= 1.0 + 1e-12);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 6), gen(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        Word w;
        for (int i = len(rng); i-- > 0;) w.applied.push_back(gen(rng));
        const auto r = word_eval(sys, w, Point(unit(rng)));
        REQUIRE_FALSE(r.escaped);
        REQUIRE(r.value[0] >= -1e-9);
        REQUIRE(r.value[0] <= 1.0 + 1e-9);
    }
}

TEST_CASE("commutativity probe: commuting families stay unrefuted") {
    const auto powers = box_system(-1, 1, {{"g1", "x^2"}, {"g2", "x^4"}});
    CHECK(is_abelian_sampled(powers, 500, 1e-9).status == Status::Inconclusive);

    // Oracle: coefficient-level composition of the degree-2 and degree-3
    // Chebyshev-style polynomials agrees both ways.
    const Poly t2{-1.0, 0.0, 2.0};
    const Poly t3{0.0, -3.0, 0.0, 4.0};
    const Poly a = pcompose(t2, t3);
    const Poly b = pcompose(t3, t2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == doctest::Approx(b[i]).epsilon(1e-12));

    const auto cheb = box_system(-1, 1, {{"t2", "2*x^2 - 1"}, {"t3", "4*x^3 - 3*x"}});
    CHECK(is_abelian_sampled(cheb, 500, 1e-9).status == Status::Inconclusive);
    // And the semigroup evaluation agrees with the oracle composition.
    for (double x = -1.0; x <= 1.0; x += 0.125) {
        const double via_words = word_eval(cheb, Word{{0, 1}}, Point(x)).value[0];
        REQUIRE(via_words == doctest::Approx(peval(a, x)).epsilon(1e-12));
    }
}

TEST_CASE("commutativity probe: the squaring pair is refuted with a replayable witness") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^2 - 1/2"}});
    const Verdict v = is_abelian_sampled(sys, 2000, 1e-9);
    REQUIRE(v.status == Status::CertifiedNo);
    REQUIRE(v.witness_points.size() == 3);
    REQUIRE(v.witness_words.size() == 2);
    const Point x = v.witness_points[0];
    const auto ij = word_eval(sys, v.witness_words[0], x);
    const auto ji = word_eval(sys, v.witness_words[1], x);
    CHECK(sys.space().dist(ij.value, ji.value) > 1e-9);

    // Direct evaluation at the worked point: applying g2 then g1 gives 1/4,
    // applying g1 then g2 gives 1/2.
    CHECK(word_eval(sys, Word{{1, 0}}, Point(1.0)).value[0] == 0.25);
    CHECK(word_eval(sys, Word{{0, 1}}, Point(1.0)).value[0] == 0.5);
}

TEST_CASE("system validation") {
    CHECK_THROWS_AS(box_system(-1, 1, {{"id", "x"}}), std::invalid_argument);
    CHECK_THROWS_AS(box_system(-1, 1, {{"a", "x^2"}, {"a", "x^3"}}), std::invalid_argument);
    CHECK_THROWS_AS(GeneratorSystem(PhaseSpace::circle(), {}), std::invalid_argument);
}

TEST_CASE("word rendering uses composition order") {
    const auto sys = box_system(-2, 2, {{"g1", "x^2"}, {"g2", "x^3"}});
    CHECK(word_to_string(sys, Word{{0, 1}}) == "g2∘g1"); // g1 applied first
    CHECK(word_to_string(sys, Word::empty_word()) == "id");
}

TEST_CASE("rational rotations compose to identity-like words") {
    const auto sys = circle_system({{"r", "x + 0.25"}});
    CHECK(word_is_identity_like(sys, Word{{0, 0, 0, 0}}));
    CHECK_FALSE(word_is_identity_like(sys, Word{{0, 0}}));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semirec/expr.hpp"
#include "test_util.hpp"

using namespace semirec;

namespace {

double eval1(const ExprAst& e, double x) {
    const double arr[1] = {x};
    return eval_point(e, arr);
}

Interval ieval1(const ExprAst& e, const Interval& box) {
    return eval_interval(e, IntervalBox(box));
}

} // namespace

TEST_CASE("parse: maps from the worked examples") {
    const ExprAst g2 = parse("x^2 - 1/2", 1);
    CHECK(g2.kind() == ExprAst::Kind::Binary);
    CHECK(g2.binary_op() == ExprAst::BinaryOp::Sub);
    CHECK(g2.lhs().kind() == ExprAst::Kind::Pow);
    CHECK(eval1(g2, 1.0) == 0.5);

    const ExprAst id = parse("x", 1);
    CHECK(id.kind() == ExprAst::Kind::Variable);
    CHECK(eval1(id, 0.37) == 0.37);

    const ExprAst cube = parse("x^3", 1);
    CHECK(eval1(cube, -1.0) == -1.0);
}

TEST_CASE("parse: errors carry positions and reasons") {
    CHECK_THROWS_AS(parse("x +", 1), ParseError);
    CHECK_THROWS_AS(parse("x + )", 1), ParseError);
    CHECK_THROWS_AS(parse("foo(x)", 1), ParseError);
    CHECK_THROWS_AS(parse("x^2.5", 1), ParseError);
    CHECK_THROWS_AS(parse("x^-2", 1), ParseError);
    CHECK_THROWS_AS(parse("x / 0", 1), ParseError);
    CHECK_THROWS_AS(parse("x2", 1), ParseError); // index above dimension
    CHECK_NOTHROW(parse("x2", 2));

    try {
        parse("1 + % 2", 1);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("parse: ^ binds tighter than unary minus, powers do not chain") {
    const ExprAst e = parse("-x^2", 1);
    REQUIRE(e.kind() == ExprAst::Kind::Unary);
    CHECK(e.unary_op() == ExprAst::UnaryOp::Neg);
    CHECK(e.lhs().kind() == ExprAst::Kind::Pow);
    CHECK(eval1(e, 3.0) == -9.0);

    CHECK_THROWS_AS(parse("x^2^3", 1), ParseError);
    CHECK(eval1(parse("(-x)^2", 1), 3.0) == 9.0);
}

TEST_CASE("pretty/parse round trip on hand-written forms") {
    for (const char* text : {"x^2 - 1/2", "x^3", "x", "2*x^2 - 1", "4*x^3 - 3*x",
                             "sin(pi*x)", "1 - 2*abs(x - 0.5)", "compose(x^2, x + 1)",
                             "-x^2", "(-2)^3 + x", "asin(sqrt(x))", "x/(x^2 + 1)"}) {
        const ExprAst ast = parse(text, 1);
        const std::string printed = pretty(ast, 1);
        CAPTURE(text);
        CAPTURE(printed);
        CHECK(parse(printed, 1) == ast);
    }
}

TEST_CASE("pretty/parse round trip on random trees") {
    testutil::RandomExprGen gen(20240901);
    for (int i = 0; i < 500; ++i) {
        const ExprAst ast = gen.tree(4);
        const std::string printed = pretty(ast, 1);
        CAPTURE(printed);
        REQUIRE(parse(printed, 1) == ast);
    }
}

TEST_CASE("composition node coheres with nested evaluation, exactly") {
    testutil::RandomExprGen gen(7);
    for (int i = 0; i < 200; ++i) {
        const ExprAst f = gen.tree(3);
        const ExprAst g = gen.tree(3);
        const ExprAst both = ExprAst::compose(f, g);
        const double x = gen.uniform(-2.0, 2.0);
        double nested, composed;
        try {
            nested = eval1(f, eval1(g, x));
            composed = eval1(both, x);
        } catch (const DomainError&) {
            continue;
        }
        CHECK(composed == nested);
    }
}

TEST_CASE("interval: identity and monotone cube") {
    const ExprAst id = parse("x", 1);
    const Interval box{-1.25, 3.5};
    CHECK(ieval1(id, box) == box);

    // Monotone cube: the exact range of x^3 over [0,2] is [0,8].
    const ExprAst cube = parse("x^3", 1);
    const Interval r = ieval1(cube, Interval{0.0, 2.0});
    CHECK(r.contains(Interval{0.0, 8.0}));
    CHECK(r.lo() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.hi() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("interval: squaring an unbounded negative tail") {
    const ExprAst sq = parse("x^2", 1);
    const Interval r = ieval1(sq, Interval{-kInf, 0.0});
    CHECK(r.lo() == 0.0);
    CHECK(r.hi() == kInf);

    // Transcendental nodes reject unbounded boxes.
    CHECK_THROWS_AS(ieval1(parse("sin(x)", 1), Interval{0.0, kInf}), DomainError);
    CHECK_THROWS_AS(ieval1(parse("sqrt(x)", 1), Interval{0.0, kInf}), DomainError);
}

TEST_CASE("interval: division by an interval containing zero is a domain error") {
    const ExprAst inv = parse("1/x", 1);
    CHECK_THROWS_AS(ieval1(inv, Interval{-1.0, 1.0}), DomainError);
    const Interval r = ieval1(inv, Interval{2.0, 4.0});
    CHECK(r.contains(0.25));
    CHECK(r.contains(0.5));
}

TEST_CASE("interval soundness: point evaluations stay inside enclosures") {
    testutil::RandomExprGen gen(123456);
    int checked = 0;
    int attempts = 0;
    while (checked < 10000 && attempts < 400000) {
        ++attempts;
        const ExprAst f = gen.tree(4);
        const double center = gen.uniform(-3.0, 3.0);
        const double halfwidth = gen.uniform(0.0, 1.0);
        const Interval box{center - halfwidth, center + halfwidth};
        const double x = gen.uniform(box.lo(), box.hi());
        Interval enclosure;
        double value;
        try {
            enclosure = ieval1(f, box);
            value = eval1(f, x);
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(value)) continue;
        ++checked;
        CAPTURE(pretty(f, 1));
        CAPTURE(box.lo());
        CAPTURE(box.hi());
        CAPTURE(x);
        REQUIRE(enclosure.contains(value));
    }
    CHECK(checked == 10000);
}

TEST_CASE("interval: sin/cos enclosures catch interior extrema") {
    const ExprAst s = parse("sin(x)", 1);
    const Interval r = ieval1(s, Interval{0.0, 3.2});
    CHECK(r.hi() >= 1.0);
    CHECK(r.lo() <= std::sin(3.2) + 1e-12);

    const ExprAst c = parse("cos(x)", 1);
    const Interval rc = ieval1(c, Interval{3.0, 3.3});
    CHECK(rc.lo() <= -1.0);

    const Interval wide = ieval1(s, Interval{0.0, 100.0});
    CHECK(wide.lo() <= -1.0);
    CHECK(wide.hi() >= 1.0);
}

TEST_CASE("map expressions: coordinatewise evaluation in two dimensions") {
    const MapExpr m = MapExpr::parse_map({"x1 + x2", "x1*x2"}, 2);
    const Point y = eval_point(m, Point(2.0, 3.0));
    CHECK(y[0] == 5.0);
    CHECK(y[1] == 6.0);

    const IntervalBox img = eval_interval(m, IntervalBox(Interval{0, 1}, Interval{0, 2}));
    CHECK(img[0].contains(Interval{0.0, 3.0}));
    CHECK(img[1].contains(Interval{0.0, 2.0}));
}

TEST_CASE("syntactic identity detection") {
    CHECK(MapExpr::parse_map({"x"}, 1).is_syntactic_identity());
    CHECK(MapExpr::parse_map({"x1", "x2"}, 2).is_syntactic_identity());
    CHECK_FALSE(MapExpr::parse_map({"x^1"}, 1).is_syntactic_identity());
    CHECK_FALSE(MapExpr::parse_map({"x2", "x1"}, 2).is_syntactic_identity());
}

#include <doctest.h>

#include <cmath>

#include "summatau/function_expr.hpp"
#include "summatau/sequence.hpp"

using namespace summatau;

TEST_CASE("parse_function: catalog aliases desugar structurally") {
    CHECK(parse_function("1/(1+t^2)").equals(parse_function("witch")));
    CHECK(parse_function("t^3").equals(parse_function("cube")));
    CHECK(parse_function("t^2").equals(parse_function("square")));
    CHECK(parse_function("t").equals(parse_function("identity")));
    CHECK(parse_function("2*t+1").equals(parse_function("affine(a=2,b=1)")));
    CHECK_FALSE(parse_function("t^2").equals(parse_function("t^3")));
}

TEST_CASE("parse_function: errors with positions") {
    try {
        parse_function("t^^2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_function("t^13"), ParseError);    // exponent out of range
    CHECK_THROWS_AS(parse_function("t^-1"), ParseError);    // negative exponent
    CHECK_THROWS_AS(parse_function("t^2^4"), ParseError);   // folded 16 > 12
    CHECK_THROWS_AS(parse_function("frob(t)"), ParseError); // unknown identifier
    CHECK_THROWS_AS(parse_function("1+"), ParseError);
    CHECK_THROWS_AS(parse_function("(1+t"), ParseError);
    CHECK_THROWS_AS(parse_function(""), ParseError);
    CHECK_THROWS_AS(parse_function("affine(a=1)"), ParseError);
}

TEST_CASE("eval: precedence, associativity, functions") {
    CHECK(parse_function("1+2*3").eval(0) == 7.0);
    CHECK(parse_function("(1+2)*3").eval(0) == 9.0);
    CHECK(parse_function("2*t^2").eval(3) == 18.0);   // ^ binds tighter than *
    CHECK(parse_function("-t^2").eval(3) == -9.0);    // ^ binds tighter than unary -
    CHECK(parse_function("t^2^3").eval(2) == 256.0);  // right-assoc: t^(2^3)
    CHECK(parse_function("2-3-4").eval(0) == -5.0);   // left-assoc
    CHECK(parse_function("witch").eval(1) == 0.5);
    CHECK(parse_function("abs(t)").eval(-3) == 3.0);
    CHECK(parse_function("sqrt(t^2)").eval(-4) == 4.0);
    CHECK(parse_function("sin(t)").eval(0.5) == std::sin(0.5));
    CHECK(parse_function("exp(t)").eval(1) == std::exp(1.0));
    CHECK(parse_function("t^0").eval(5) == 1.0);
}

TEST_CASE("eval: domain violations are errors, not NaNs") {
    CHECK_THROWS_AS(parse_function("1/t").eval(0), EvalError);
    CHECK_THROWS_AS(parse_function("sqrt(t)").eval(-1), EvalError);
    CHECK_THROWS_AS(parse_function("exp(t)").eval(1e9), EvalError); // overflow -> non-finite
}

TEST_CASE("render/parse round-trip is stable") {
    for (const char* text : {"t", "t^2", "1/(1+t^2)", "2*t+1", "-t", "t^2-t^3", "(t+1)*(t-1)",
                             "sin(t)+cos(t)*exp(t)", "abs(t)/sqrt(1+t^2)", "affine(a=-2,b=0.5)",
                             "-(t+1)", "2/(3*t)", "t-(1-t)", "(t^2)^3"}) {
        FunctionSpec f = parse_function(text);
        const std::string rendered = f.render();
        CAPTURE(text);
        CAPTURE(rendered);
        FunctionSpec again = parse_function(rendered);
        CHECK(again.equals(f));
        CHECK(again.render() == rendered);
    }
}

TEST_CASE("substitute composes ASTs") {
    FunctionSpec f = parse_function("t^2");
    FunctionSpec g = parse_function("t+1");
    FunctionSpec fg = f.substitute(g);
    CHECK(fg.eval(2) == 9.0);
    CHECK(fg.equals(parse_function("(t+1)^2")));
}

TEST_CASE("growth propagation: bounded inputs via interval arithmetic") {
    const GrowthClass in = GrowthClass::bounded(1.0);

    GrowthClass w = parse_function("witch").propagate_growth(in);
    REQUIRE(w.kind == GrowthKind::Bounded);
    CHECK(w.coeff == doctest::Approx(1.0).epsilon(1e-9));

    GrowthClass sq = parse_function("t^2").propagate_growth(in);
    REQUIRE(sq.kind == GrowthKind::Bounded);
    CHECK(sq.coeff == doctest::Approx(1.0).epsilon(1e-9));

    GrowthClass aff = parse_function("2*t+1").propagate_growth(GrowthClass::bounded(0.5));
    REQUIRE(aff.kind == GrowthKind::Bounded);
    CHECK(aff.coeff == doctest::Approx(2.0).epsilon(1e-9));

    GrowthClass sin_t = parse_function("sin(t)").propagate_growth(in);
    REQUIRE(sin_t.kind == GrowthKind::Bounded);
    CHECK(sin_t.coeff <= 1.0 + 1e-9);

    // denominator interval straddles zero: no bound
    CHECK(parse_function("1/t").propagate_growth(in).kind == GrowthKind::Unknown);
}

TEST_CASE("growth propagation: polynomial inputs") {
    const GrowthClass in = GrowthClass::polynomial(1.0, 1);

    GrowthClass cube = parse_function("t^3").propagate_growth(in);
    REQUIRE(cube.kind == GrowthKind::Polynomial);
    CHECK(cube.degree == 3);
    CHECK(cube.coeff == doctest::Approx(1.0).epsilon(1e-9));

    GrowthClass aff = parse_function("2*t+1").propagate_growth(in);
    REQUIRE(aff.kind == GrowthKind::Polynomial);
    CHECK(aff.degree == 1);
    CHECK(aff.coeff == doctest::Approx(3.0).epsilon(1e-9));

    CHECK(parse_function("sin(t)").propagate_growth(in).kind == GrowthKind::Bounded);
    CHECK(parse_function("exp(t)").propagate_growth(in).kind == GrowthKind::Unknown);
    CHECK(parse_function("1/(1+t^2)").propagate_growth(in).kind == GrowthKind::Unknown);

    GrowthClass root = parse_function("sqrt(abs(t))").propagate_growth(GrowthClass::polynomial(4.0, 3));
    REQUIRE(root.kind == GrowthKind::Polynomial);
    CHECK(root.degree == 2);
    CHECK(root.coeff == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("growth propagation: unknown input stays unknown") {
    CHECK(parse_function("t").propagate_growth(GrowthClass::unknown()).kind == GrowthKind::Unknown);
}

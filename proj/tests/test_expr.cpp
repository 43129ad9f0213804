#include "nslag/expr.hpp"

#include <doctest.h>

#include <cmath>

using nslag::Expr;
using nslag::ExprError;

TEST_SUITE("expr") {

TEST_CASE("arithmetic and precedence") {
    CHECK(Expr::parse("1 + 2*3").eval(0) == doctest::Approx(7.0));
    CHECK(Expr::parse("(1 + 2)*3").eval(0) == doctest::Approx(9.0));
    CHECK(Expr::parse("2^3^2").eval(0) == doctest::Approx(512.0));  // right assoc
    CHECK(Expr::parse("-2^2").eval(0) == doctest::Approx(-4.0));
    CHECK(Expr::parse("6/3/2").eval(0) == doctest::Approx(1.0));
    CHECK(Expr::parse("x^-2").eval(2.0) == doctest::Approx(0.25));
}

TEST_CASE("functions and constants") {
    CHECK(Expr::parse("sin(pi/2)").eval(0) == doctest::Approx(1.0));
    CHECK(Expr::parse("cos(0)").eval(0) == doctest::Approx(1.0));
    CHECK(Expr::parse("exp(log(5))").eval(0) == doctest::Approx(5.0));
    CHECK(Expr::parse("sin(pi*x)").eval(0.5) == doctest::Approx(1.0));
}

TEST_CASE("bound names") {
    const Expr e = Expr::parse("x + M + theta");
    CHECK(e.eval(1.0, 2.0, 3.0) == doctest::Approx(6.0));
    CHECK(e.eval(1.0) == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry position and source") {
    CHECK_THROWS_AS(Expr::parse("1 +"), ExprError);
    CHECK_THROWS_AS(Expr::parse("foo(1)"), ExprError);
    CHECK_THROWS_AS(Expr::parse("1 2"), ExprError);
    CHECK_THROWS_AS(Expr::parse(""), ExprError);
    CHECK_THROWS_AS(Expr::parse("sin 1"), ExprError);
    try {
        Expr::parse("1 + bogus");
    } catch (const ExprError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
}

TEST_CASE("logistic switch survives extreme arguments") {
    const Expr e = Expr::parse("1/(1 + exp(-2000*(x - 0.5)))");
    CHECK(e.eval(0.0) == doctest::Approx(0.0));
    CHECK(e.eval(1.0) == doctest::Approx(1.0));
    CHECK(std::isfinite(e.eval(0.5)));
}

} // TEST_SUITE

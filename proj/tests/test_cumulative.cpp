#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardycheck/cumulative.hpp"
#include "hardycheck/parser.hpp"

using namespace hardycheck;

TEST_CASE("exponential cumulative has its closed form", "[cumulative]") {
  Cumulative F(parse("exp(-x)"));
  REQUIRE(F.closed_form());
  REQUIRE(F(0.0) == 0.0);
  for (double x : {0.1, 1.0, 3.0, 20.0})
    REQUIRE(F(x) == Catch::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
}

TEST_CASE("min(x,1) cumulative is the spec piecewise form", "[cumulative]") {
  Cumulative F(parse("min(x,1)"));
  REQUIRE(F.closed_form());
  REQUIRE(F(0.5) == Catch::Approx(0.125));
  REQUIRE(F(1.0) == Catch::Approx(0.5));
  REQUIRE(F(2.0) == Catch::Approx(1.5));
  REQUIRE(F(10.0) == Catch::Approx(9.5));
}

TEST_CASE("truncated power cumulative matches the window formula", "[cumulative]") {
  const double T = 1000.0;
  Cumulative F(parse("trunc(x^(-0.5),1,1000)"));
  REQUIRE(F.closed_form());
  REQUIRE(F(0.5) == 0.0);
  REQUIRE(F(4.0) == Catch::Approx(2.0 * (2.0 - 1.0)));
  REQUIRE(F(T) == Catch::Approx(2.0 * (std::sqrt(T) - 1.0)));
  REQUIRE(F(T + 50.0) == Catch::Approx(2.0 * (std::sqrt(T) - 1.0)));
}

TEST_CASE("linear g gives exactly quadratic G", "[cumulative]") {
  Cumulative G(parse("2*x"));
  REQUIRE(G.closed_form());
  REQUIRE(G(3.0) == Catch::Approx(9.0).epsilon(1e-14));
  REQUIRE(G(11.5) == Catch::Approx(11.5 * 11.5).epsilon(1e-14));
}

TEST_CASE("shifted reciprocal integrates to a log", "[cumulative]") {
  Cumulative F(parse("2/(1+x)"));
  REQUIRE(F.closed_form());
  REQUIRE(F(4.0) == Catch::Approx(2.0 * std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("non-linearizable sources fall back to quadrature", "[cumulative]") {
  Cumulative F(parse("x*exp(-x)"));
  REQUIRE_FALSE(F.closed_form());
  for (double x : {0.5, 2.0, 7.0})
    REQUIRE(F(x) == Catch::Approx(1.0 - std::exp(-x) * (1.0 + x)).epsilon(1e-7));
}

TEST_CASE("cumulative is additive over splits", "[cumulative]") {
  for (const char* src : {"min(x,1)", "x*exp(-x)", "trunc(x^(-0.5),1,100)", "x^0.5"}) {
    Cumulative F(parse(src));
    Expr f = parse(src);
    auto raw = [&](double t) { return f(t); };
    for (auto [a, b] : {std::pair{0.5, 2.0}, std::pair{1.5, 30.0}}) {
      IntegralEstimate mid = integrate_bounded(raw, a, b, QuadOptions{}, F.breakpoints());
      INFO(src);
      REQUIRE(F(b) - F(a) == Catch::Approx(mid.value).margin(1e-6));
    }
  }
}

TEST_CASE("divergence at zero is an error naming the node", "[cumulative]") {
  try {
    Cumulative F(parse("x^(-1.5)"));
    FAIL("expected CumulativeError");
  } catch (const CumulativeError& e) {
    REQUIRE(std::string(e.what()).find("diverges at 0") != std::string::npos);
  }
  REQUIRE_THROWS_AS(Cumulative(parse("1/x")), CumulativeError);
  // Truncated away from zero the same power is fine.
  Cumulative ok(parse("trunc(x^(-1.5),1,10)"));
  REQUIRE(ok(0.5) == 0.0);
  REQUIRE(ok(10.0) == Catch::Approx(2.0 * (1.0 - 1.0 / std::sqrt(10.0))));
}

TEST_CASE("cumulative of a nonnegative source is nondecreasing", "[cumulative]") {
  Cumulative F(parse("min(x^2, 4) + 0.5"));
  double prev = 0.0;
  for (double x = 0.05; x < 20.0; x += 0.35) {
    double v = F(x);
    REQUIRE(v >= prev - 1e-12);
    prev = v;
  }
}

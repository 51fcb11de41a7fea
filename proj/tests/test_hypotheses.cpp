#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardycheck/hypotheses.hpp"
#include "hardycheck/parser.hpp"

using namespace hardycheck;

namespace {
FunctionSpec spec_of(const char* text) {
  return FunctionSpec(parse(text), Interval::positive_axis(), {}, text);
}
}  // namespace

TEST_CASE("x^2 is submultiplicative with equality", "[hypotheses]") {
  Certificate c = check_property(spec_of("x^2"), Property::submultiplicative);
  REQUIRE(c.status == CertStatus::verified_numeric);
}

TEST_CASE("e^x is refuted submultiplicative with a reproducible witness", "[hypotheses]") {
  FunctionSpec phi = spec_of("exp(x)");
  Certificate c = check_property(phi, Property::submultiplicative);
  REQUIRE(c.status == CertStatus::refuted);
  REQUIRE(c.witness.has_value());
  REQUIRE(witness_reproduces(phi, Property::submultiplicative, c));
  // The spec's illustrative witness: e^9 > e^3 * e^3.
  double v = property_violation_at(phi, Property::submultiplicative, Witness{3.0, 3.0});
  REQUIRE(v > 0.0);
}

TEST_CASE("x over 2x ratio is constant, certificate passes", "[hypotheses]") {
  Certificate c = check_property(spec_of("2*x"), Property::ratio_x_over_g_nonincreasing);
  REQUIRE(c.status == CertStatus::verified_numeric);
}

TEST_CASE("monotone checks pass in both directions only for constants", "[hypotheses]") {
  FunctionSpec konst = spec_of("1.5");
  REQUIRE(check_property(konst, Property::monotone_nondecreasing).passed());
  REQUIRE(check_property(konst, Property::monotone_nonincreasing).passed());

  FunctionSpec linear = spec_of("x");
  REQUIRE(check_property(linear, Property::monotone_nondecreasing).passed());
  Certificate down = check_property(linear, Property::monotone_nonincreasing);
  REQUIRE(down.status == CertStatus::refuted);
  REQUIRE(down.witness.has_value());
  REQUIRE(witness_reproduces(linear, Property::monotone_nonincreasing, down));
}

TEST_CASE("convexity via second differences", "[hypotheses]") {
  REQUIRE(check_property(spec_of("x^3"), Property::convex).passed());
  REQUIRE(check_property(spec_of("x"), Property::convex).passed());
  Certificate concave = check_property(spec_of("x^0.5"), Property::convex);
  REQUIRE(concave.status == CertStatus::refuted);
  REQUIRE(witness_reproduces(spec_of("x^0.5"), Property::convex, concave));
}

TEST_CASE("zero-at-zero limit probe", "[hypotheses]") {
  REQUIRE(check_property(spec_of("x^2"), Property::zero_at_zero).passed());
  REQUIRE(check_property(spec_of("3*x"), Property::zero_at_zero).passed());
  Certificate bad = check_property(spec_of("exp(x)"), Property::zero_at_zero);
  REQUIRE(bad.status == CertStatus::refuted);
}

TEST_CASE("non-negative check and witnesses", "[hypotheses]") {
  REQUIRE(check_property(spec_of("min(x,1)"), Property::non_negative).passed());
  Certificate c = check_property(spec_of("x - 2"), Property::non_negative);
  REQUIRE(c.status == CertStatus::refuted);
  REQUIRE(c.witness.has_value());
  REQUIRE(c.witness->x < 2.0);
}

TEST_CASE("evaluation failure at a grid point is inconclusive", "[hypotheses]") {
  // log(x-5) is unevaluable for x < 5 but fine beyond; no violation is found.
  FunctionSpec s(parse("log(x - 5) + 10"), Interval::positive_axis());
  Certificate c = check_property(s, Property::monotone_nondecreasing);
  REQUIRE(c.status == CertStatus::inconclusive);
  REQUIRE(c.detail.find("failures") != std::string::npos);
}

TEST_CASE("doubling the grid never flips verified to refuted on structured specs",
          "[hypotheses]") {
  const char* members[] = {"min(x,1.3) + 0.7*(1 - exp(-2*x))", "x^1.5", "0.5*x + min(x^2, 4)"};
  for (const char* m : members) {
    FunctionSpec s = spec_of(m);
    for (Property p : {Property::non_negative, Property::monotone_nondecreasing}) {
      Certificate c256 = check_property(s, p, 256);
      Certificate c512 = check_property(s, p, 512);
      Certificate c1024 = check_property(s, p, 1024);
      INFO(m << " / " << to_string(p));
      REQUIRE(c256.status == CertStatus::verified_numeric);
      REQUIRE(c512.status == CertStatus::verified_numeric);
      REQUIRE(c1024.status == CertStatus::verified_numeric);
    }
  }
}

TEST_CASE("lemma-G on the worked examples", "[hypotheses]") {
  // g = x^2: G = x^3/3, G/x^2 = x/3 nondecreasing.
  Certificate a = verify_ratio_lemma(RatioLemma::cumulative_g, spec_of("x^2"));
  REQUIRE(a.status == CertStatus::verified_numeric);
  REQUIRE(a.detail.find("non-decreasing") != std::string::npos);

  // g = sqrt(x): G = (2/3) x^(3/2), G/x^2 = (2/3) x^(-1/2) nonincreasing.
  Certificate b = verify_ratio_lemma(RatioLemma::cumulative_g, spec_of("x^0.5"));
  REQUIRE(b.status == CertStatus::verified_numeric);
  REQUIRE(b.detail.find("non-increasing") != std::string::npos);

  Certificate c = verify_ratio_lemma(RatioLemma::cumulative_g, spec_of("2*x"));
  REQUIRE(c.status == CertStatus::verified_numeric);
}

TEST_CASE("lemma-phi on powers", "[hypotheses]") {
  Certificate a = verify_ratio_lemma(RatioLemma::phi, spec_of("x^3"));
  REQUIRE(a.status == CertStatus::verified_numeric);
  Certificate b = verify_ratio_lemma(RatioLemma::phi, spec_of("x^1.5"));
  REQUIRE(b.status == CertStatus::verified_numeric);
}

TEST_CASE("lemma premises are enforced", "[hypotheses]") {
  // e^x is not submultiplicative: lemma-phi premises fail.
  REQUIRE_THROWS_AS(verify_ratio_lemma(RatioLemma::phi, spec_of("exp(x)")), PremiseError);
  // g changing sign fails lemma-G positivity.
  REQUIRE_THROWS_AS(verify_ratio_lemma(RatioLemma::cumulative_g, spec_of("x - 1")), PremiseError);
  try {
    verify_ratio_lemma(RatioLemma::phi, spec_of("exp(x)"));
  } catch (const PremiseError& e) {
    REQUIRE(std::string(e.what()).find("premises not satisfied") != std::string::npos);
  }
}

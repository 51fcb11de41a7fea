#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardycheck/catalog.hpp"
#include "hardycheck/parser.hpp"

using namespace hardycheck;

namespace {
Params make_params(double p, double a = std::nan(""), double q = std::nan("")) {
  Params P;
  P.p = p;
  P.a = a;
  P.q = q;
  return P;
}
}  // namespace

TEST_CASE("thm31 constant worked examples", "[catalog]") {
  // p=2, a=1/2, q=1: ((a-1)(p-1)+2q-1) = 1/2, (1-a)^(p-1) = 1/2, constant 4.
  REQUIRE(inequality_constant("thm31", make_params(2, 0.5, 1)) ==
          Catch::Approx(4.0).epsilon(1e-12));
  // p=3, a=1/2, q=2: denominator 2 * 1/4.
  REQUIRE(inequality_constant("thm31", make_params(3, 0.5, 2)) ==
          Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("thm32 constant matches the sqrt(3) special case", "[catalog]") {
  REQUIRE(inequality_constant("thm32", make_params(0.5, 2, 0.25)) ==
          Catch::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("thm31 reduction to the sharp Hardy constant", "[catalog]") {
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    double expected = std::pow(p / (p - 1.0), p);
    double got = inequality_constant("thm31", make_params(p, 1.0 / p, p / 2.0));
    REQUIRE(got == Catch::Approx(expected).epsilon(1e-12));
  }
  REQUIRE(inequality_constant("thm31", make_params(2, 0.5, 1)) ==
          Catch::Approx(inequality_constant("hardy", make_params(2))).epsilon(1e-12));
}

TEST_CASE("thm32 reduction to the reverse-Hardy constant", "[catalog]") {
  for (double p : {0.25, 0.5, 0.75}) {
    double expected = (1.0 + p) / (1.0 - p) * std::pow(p / (1.0 + p), p);
    double got = inequality_constant("thm32", make_params(p, 1.0 / p, p / 2.0));
    REQUIRE(got == Catch::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("constants are positive inside the constraint region and blow up at the q bound",
          "[catalog]") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (double a : {0.2, 0.5, 0.8}) {
      double bound = (p - a * (p - 1.0)) / 2.0;
      for (double dq : {0.05, 0.5, 2.0}) {
        double c = inequality_constant("thm31", make_params(p, a, bound + dq));
        REQUIRE(std::isfinite(c));
        REQUIRE(c > 0.0);
      }
      REQUIRE(inequality_constant("thm31", make_params(p, a, bound + 1e-7)) > 1e6);
    }
  }
  for (double p : {0.25, 0.5, 0.75}) {
    for (double a : {0.5, 1.0, 2.0}) {
      double bound = (p + a * (p - 1.0)) / 2.0;
      for (double dq : {0.05, 0.5, 2.0}) {
        double c = inequality_constant("thm32", make_params(p, a, bound + dq));
        REQUIRE(std::isfinite(c));
        REQUIRE(c > 0.0);
      }
      REQUIRE(inequality_constant("thm32", make_params(p, a, bound + 1e-7)) > 1e6);
    }
  }
  REQUIRE(inequality_constant("ws-weighted", make_params(2.0, 0.5)) > 0.0);
  REQUIRE(inequality_constant("thm34", make_params(3.0)) == Catch::Approx(0.5));
  Params p36 = make_params(3.0);
  p36.q = 2.0;
  REQUIRE(inequality_constant("thm36", p36) == Catch::Approx(0.5));
}

TEST_CASE("constraint violations name the constraint", "[catalog]") {
  try {
    inequality_constant("thm31", make_params(2, 1.5, 2));
    FAIL("expected ConstraintError");
  } catch (const ConstraintError& e) {
    REQUIRE(std::string(e.what()).find("0<a<1") != std::string::npos);
  }
  try {
    inequality_constant("hardy", make_params(1.0));
    FAIL("expected ConstraintError");
  } catch (const ConstraintError& e) {
    REQUIRE(std::string(e.what()).find("p>1") != std::string::npos);
  }
  Params bad36 = make_params(3.0);
  bad36.q = 1.5;
  REQUIRE_THROWS_AS(inequality_constant("thm36", bad36), ConstraintError);
  REQUIRE_THROWS_AS(inequality_constant("thm31", make_params(2, 0.5, 0.7)), ConstraintError);
  REQUIRE_THROWS_AS(inequality_constant("nope", make_params(2)), ConstraintError);
}

TEST_CASE("list_catalog returns the twelve entries in stable order", "[catalog]") {
  auto cat = list_catalog();
  REQUIRE(cat.size() == 12);
  const char* expected[] = {"hardy",  "hardy-finite", "ws-weighted", "thm31",
                            "thm32",  "thm32-statement", "thm34",    "thm35",
                            "thm35-pow", "thm36",     "thm37",       "thm38"};
  for (std::size_t i = 0; i < cat.size(); ++i) REQUIRE(cat[i].id == expected[i]);

  auto find = [&](const std::string& id) -> const EntryDescriptor& {
    for (const auto& d : cat)
      if (d.id == id) return d;
    FAIL("missing entry");
    return cat.front();
  };
  REQUIRE(find("thm32").note.find("constant from proof; statement differs") != std::string::npos);
  REQUIRE(find("thm34").note.find("phi(x)*psi(x) denominator per proof") != std::string::npos);
  REQUIRE(find("thm32").direction == ">=");
  REQUIRE(find("thm38").direction == ">=");
  REQUIRE(find("thm34").slots.size() == 4);
  REQUIRE(list_catalog().size() == cat.size());
}

TEST_CASE("instantiate_task certifies hypotheses and rejects violations", "[catalog]") {
  Params hardy2 = make_params(2);
  std::map<Slot, FunctionSpec> ok{{Slot::f, FunctionSpec(parse("exp(-x)"), Interval::positive_axis())}};
  VerificationTask t = instantiate_task("hardy", hardy2, ok);
  REQUIRE(t.context.slots.at(Slot::f).find_certificate("non-negative") != nullptr);
  REQUIRE(t.tails_classified);
  REQUIRE(t.lhs_tail.kind == TailKind::integrable);
  REQUIRE(t.rhs_tail.kind == TailKind::integrable);

  // Missing slot.
  REQUIRE_THROWS_AS(instantiate_task("hardy", hardy2, {}), BindingError);
  try {
    instantiate_task("hardy", hardy2, {});
  } catch (const BindingError& e) {
    REQUIRE(std::string(e.what()).find("missing slot f") != std::string::npos);
  }

  // Constraint violation comes before any slot work.
  REQUIRE_THROWS_AS(instantiate_task("thm31", make_params(2, 1.5, 1), ok), ConstraintError);

  // Refuted hypothesis names slot and property.
  std::map<Slot, FunctionSpec> neg{{Slot::f, FunctionSpec(parse("x - 2"), Interval::positive_axis())}};
  try {
    instantiate_task("hardy", hardy2, neg);
    FAIL("expected BindingError");
  } catch (const BindingError& e) {
    std::string msg = e.what();
    REQUIRE(msg.find("slot f") != std::string::npos);
    REQUIRE(msg.find("non-negative") != std::string::npos);
    REQUIRE(msg.find("witness") != std::string::npos);
  }
}

TEST_CASE("identity is certified convex and submultiplicative for thm34 slots", "[catalog]") {
  Params p = make_params(3);
  std::map<Slot, FunctionSpec> b{
      {Slot::f, FunctionSpec(parse("min(x,1)"), Interval::positive_axis())},
      {Slot::g, FunctionSpec(parse("min(x,1)"), Interval::positive_axis())},
      {Slot::phi, FunctionSpec(parse("x"), Interval::positive_axis())},
      {Slot::psi, FunctionSpec(parse("x"), Interval::positive_axis())}};
  VerificationTask t = instantiate_task("thm34", p, b);
  const FunctionSpec& phi = t.context.slots.at(Slot::phi);
  REQUIRE(phi.find_certificate("convex")->passed());
  REQUIRE(phi.find_certificate("submultiplicative")->passed());
}

TEST_CASE("both-sides-divergent tasks are constructible and flagged vacuous", "[catalog]") {
  Params p;  // thm35 on (0, inf)
  p.interval = Interval::positive_axis();
  std::map<Slot, FunctionSpec> b{
      {Slot::f, FunctionSpec(parse("min(x,1)"), Interval::positive_axis())},
      {Slot::g, FunctionSpec(parse("1/(1+x)"), Interval::positive_axis())},
      {Slot::phi, FunctionSpec(parse("x"), Interval::positive_axis())}};
  VerificationTask t = instantiate_task("thm35", p, b);
  REQUIRE(t.vacuous_both_divergent);
  REQUIRE(t.construction_note.find("vacuous") != std::string::npos);
}

TEST_CASE("statement-form probe is restricted to thm34", "[catalog]") {
  Params hardy2 = make_params(2);
  std::map<Slot, FunctionSpec> ok{{Slot::f, FunctionSpec(parse("exp(-x)"), Interval::positive_axis())}};
  REQUIRE_THROWS_AS(instantiate_task("hardy", hardy2, ok, QuadOptions{}, 512, true),
                    ConstraintError);
}

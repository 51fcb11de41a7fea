#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardycheck/parser.hpp"
#include "hardycheck/verifier.hpp"

using namespace hardycheck;

namespace {

FunctionSpec fs(const char* text) {
  return FunctionSpec(parse(text), Interval::positive_axis(), {}, text);
}

Verdict run(const std::string& id, Params P, std::map<Slot, FunctionSpec> b,
            bool statement_form = false) {
  VerificationTask t = instantiate_task(id, P, b, QuadOptions{}, 512, statement_form);
  return verify(t);
}

}  // namespace

TEST_CASE("hardy with f = exp(-x) gives lhs 2 ln 2, rhs 2, holds", "[verifier]") {
  Params P;
  P.p = 2;
  Verdict v = run("hardy", P, {{Slot::f, fs("exp(-x)")}});
  REQUIRE(v.outcome == Outcome::holds);
  REQUIRE(v.lhs.value == Catch::Approx(2.0 * std::log(2.0)).margin(1e-6));
  REQUIRE(v.rhs == Catch::Approx(2.0).margin(1e-8));
  REQUIRE(v.constant == Catch::Approx(4.0));
  REQUIRE(v.ratio == Catch::Approx(std::log(2.0)).margin(1e-5));
}

TEST_CASE("thm34 proof form on the min(x,1) example: lhs 5/6, rhs 1", "[verifier]") {
  Params P;
  P.p = 3;
  std::map<Slot, FunctionSpec> b{{Slot::f, fs("min(x,1)")},
                                 {Slot::g, fs("min(x,1)")},
                                 {Slot::phi, fs("x")},
                                 {Slot::psi, fs("x")}};
  Verdict v = run("thm34", P, b);
  REQUIRE(v.outcome == Outcome::holds);
  REQUIRE(v.lhs.value == Catch::Approx(5.0 / 6.0).margin(1e-6));
  REQUIRE(v.rhs == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("thm34 statement form diverges on the same bindings", "[verifier]") {
  Params P;
  P.p = 3;
  std::map<Slot, FunctionSpec> b{{Slot::f, fs("min(x,1)")},
                                 {Slot::g, fs("min(x,1)")},
                                 {Slot::phi, fs("x")},
                                 {Slot::psi, fs("x")}};
  Verdict v = run("thm34", P, b, /*statement_form=*/true);
  REQUIRE(v.outcome == Outcome::vacuous);
  REQUIRE(v.lhs.status == QuadStatus::divergent_suspected);
  REQUIRE(v.rhs_integral.status == QuadStatus::converged);
  REQUIRE(v.diagnostic.find("DISCREPANCY") != std::string::npos);
}

TEST_CASE("thm36 with identity phi holds with equality", "[verifier]") {
  Params P;
  P.p = 3;
  P.q = 1;
  Verdict v = run("thm36", P, {{Slot::f, fs("min(x^2,1)")}, {Slot::phi, fs("x")}});
  REQUIRE(v.outcome == Outcome::holds);
  REQUIRE(v.lhs.value == Catch::Approx(1.0).margin(1e-7));
  REQUIRE(v.rhs == Catch::Approx(1.0).margin(1e-7));
  REQUIRE(v.ratio == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("thm37 with constant functions holds with equality", "[verifier]") {
  Params P;
  P.interval = Interval(1, 2);
  std::map<Slot, FunctionSpec> b{{Slot::f, fs("1")}, {Slot::g, fs("1")}, {Slot::phi, fs("x")}};
  Verdict v = run("thm37", P, b);
  REQUIRE(v.outcome == Outcome::holds);
  REQUIRE(v.lhs.value == Catch::Approx(1.0).margin(1e-8));
  REQUIRE(v.rhs == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("thm38 reverses the comparison for nonincreasing phi", "[verifier]") {
  Params P;
  P.interval = Interval(1, 2);
  std::map<Slot, FunctionSpec> b{{Slot::f, fs("x")}, {Slot::g, fs("x")},
                                 {Slot::phi, fs("1/(1+x)")}};
  Verdict v = run("thm38", P, b);
  REQUIRE(v.outcome == Outcome::holds);
  // F G / x^2 = x^2/4 <= x^2 = f g pointwise, and phi is nonincreasing.
  REQUIRE(v.lhs.value >= v.rhs);
}

TEST_CASE("scaling f leaves the ratio unchanged (homogeneity)", "[verifier]") {
  struct Case {
    const char* id;
    Params P;
  };
  Params hardyP;
  hardyP.p = 2.5;
  Params hfP;
  hfP.p = 2.0;
  hfP.interval = Interval(1, 4);
  Params t31;
  t31.p = 2.0;
  t31.a = 0.5;
  t31.q = 1.3;
  Params t32;
  t32.p = 0.5;
  t32.a = 2.0;
  t32.q = 1.0;

  auto scaled = [](const char* base, double c) {
    return FunctionSpec(Expr::product({Expr::constant(c), parse(base)}),
                        Interval::positive_axis());
  };

  for (double c : {3.0, 0.25}) {
    Verdict a = run("hardy", hardyP, {{Slot::f, fs("exp(-x)")}});
    Verdict b = run("hardy", hardyP, {{Slot::f, scaled("exp(-x)", c)}});
    REQUIRE(b.ratio == Catch::Approx(a.ratio).epsilon(1e-6));

    Verdict c1 = run("hardy-finite", hfP, {{Slot::f, fs("trunc(1,0.5,3)")}});
    Verdict c2 = run("hardy-finite", hfP, {{Slot::f, scaled("trunc(1,0.5,3)", c)}});
    REQUIRE(c2.ratio == Catch::Approx(c1.ratio).epsilon(1e-6));

    Verdict d1 = run("thm31", t31, {{Slot::f, fs("trunc(x^(-0.25),1,50)")}, {Slot::g, fs("2*x")}});
    Verdict d2 = run("thm31", t31,
                     {{Slot::f, scaled("trunc(x^(-0.25),1,50)", c)}, {Slot::g, fs("2*x")}});
    REQUIRE(d2.ratio == Catch::Approx(d1.ratio).epsilon(1e-6));

    Verdict e1 = run("thm32", t32, {{Slot::f, fs("trunc(1,1,2)")}, {Slot::g, fs("2*x")}});
    Verdict e2 = run("thm32", t32, {{Slot::f, scaled("trunc(1,1,2)", c)}, {Slot::g, fs("2*x")}});
    REQUIRE(e2.ratio == Catch::Approx(e1.ratio).epsilon(1e-6));
  }
}

TEST_CASE("thm31 at a=1/p, q=p/2, g=2x agrees with hardy", "[verifier]") {
  QuadOptions tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-10;
  for (const char* f : {"exp(-x)", "trunc(x^(-0.5),1,100)", "trunc(1,0.5,8)"}) {
    for (double p : {1.5, 2.0, 3.0}) {
      Params hp;
      hp.p = p;
      Params tp;
      tp.p = p;
      tp.a = 1.0 / p;
      tp.q = p / 2.0;
      VerificationTask th = instantiate_task("hardy", hp, {{Slot::f, fs(f)}}, tight);
      VerificationTask tt =
          instantiate_task("thm31", tp, {{Slot::f, fs(f)}, {Slot::g, fs("2*x")}}, tight);
      Verdict vh = verify(th);
      Verdict vt = verify(tt);
      INFO(f << " p=" << p);
      REQUIRE(vt.lhs.value == Catch::Approx(vh.lhs.value).epsilon(1e-8));
      REQUIRE(vt.rhs == Catch::Approx(vh.rhs).epsilon(1e-8));
      REQUIRE(vt.ratio == Catch::Approx(vh.ratio).epsilon(1e-8));
    }
  }
}

TEST_CASE("outcome rule: holds needs strict clearance, fails needs 10x", "[verifier]") {
  REQUIRE(compare_leq(1.0, 2.0, 0.1) == Outcome::holds);
  REQUIRE(compare_leq(2.0, 1.0, 1.0) == Outcome::inconclusive);   // boundary, not strict
  REQUIRE(compare_leq(2.05, 2.0, 0.1) == Outcome::holds);         // inside widened bars
  REQUIRE(compare_leq(2.5, 2.0, 0.1) == Outcome::inconclusive);   // violation < 10x errs
  REQUIRE(compare_leq(3.5, 2.0, 0.1) == Outcome::fails);          // violation > 10x errs
  // Direction sanity: >= is exactly the swapped <= rule.
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    double lhs = rng.uniform(0.0, 3.0), rhs = rng.uniform(0.0, 3.0);
    double err = rng.uniform(0.0, 0.5);
    REQUIRE(compare_geq(lhs, rhs, err) == compare_leq(rhs, lhs, err));
  }
}

TEST_CASE("thm32 proof form holds where the statement form fails", "[verifier]") {
  Params P;
  P.p = 0.5;
  P.a = 2.0;
  P.q = 1.5;
  std::map<Slot, FunctionSpec> b{{Slot::f, fs("trunc(1,1,2)")}, {Slot::g, fs("2*x")}};
  Verdict proof = run("thm32", P, b);
  REQUIRE(proof.outcome == Outcome::holds);
  REQUIRE(proof.ratio > 1.0);

  Verdict stmt = run("thm32-statement", P, b);
  REQUIRE(stmt.outcome == Outcome::fails);
  REQUIRE(stmt.ratio < 1.0);
  // lhs = int_1^2 sqrt(x-1) x^-3 dx + 1/8 = pi/16 + 1/8; rhs_int = (1 - 2^-1.5)/1.5.
  REQUIRE(proof.lhs.value ==
          Catch::Approx(M_PI / 16.0 + 0.125).epsilon(1e-8));  // u-substitution closed form
  REQUIRE(proof.rhs_integral.value == Catch::Approx((1.0 - std::pow(2.0, -1.5)) / 1.5).margin(1e-8));
  REQUIRE(stmt.constant == Catch::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("batch_verify aggregates and records construction errors", "[verifier]") {
  Params hardy2;
  hardy2.p = 2;
  TaskRequest a{"t1", "hardy", hardy2, {{Slot::f, fs("exp(-x)")}}, QuadOptions{}, false, 512};
  TaskRequest b{"t2", "hardy", hardy2, {{Slot::f, fs("trunc(1,1,4)")}}, QuadOptions{}, false, 512};
  Params hf;
  hf.p = 2;
  hf.interval = Interval(1, 3);
  TaskRequest c{"t3", "hardy-finite", hf, {{Slot::f, fs("trunc(1,1,3)")}}, QuadOptions{}, false, 512};
  SuiteReport r3 = batch_verify({a, b, c});
  REQUIRE(r3.count("holds") == 3);
  REQUIRE(r3.status == "ok");

  Params bad;
  bad.p = 2;
  bad.a = 1.5;
  bad.q = 1.0;
  TaskRequest broken{"t4", "thm31", bad, {{Slot::f, fs("exp(-x)")}, {Slot::g, fs("2*x")}},
                     QuadOptions{}, false, 512};
  SuiteReport r4 = batch_verify({a, broken});
  REQUIRE(r4.count("holds") == 1);
  REQUIRE(r4.count("construction-error") == 1);
  REQUIRE_FALSE(r4.items[1].construction_error.empty());

  SuiteReport empty = batch_verify({});
  REQUIRE(empty.items.empty());
  REQUIRE(empty.status == "inconclusive-empty");
}

TEST_CASE("falsify on thm31 finds no violation", "[verifier]") {
  FalsifyResult r = falsify("thm31", {}, 40, 9);
  REQUIRE(r.completed == 40);
  REQUIRE(r.outcome_counts.count("fails") == 0);
  REQUIRE(std::isfinite(r.worst_ratio));
  REQUIRE(r.worst_ratio < 1.0);
  REQUIRE(r.worst.has_value());
}

TEST_CASE("falsify is deterministic in the seed", "[verifier]") {
  FalsifyResult a = falsify("hardy", {}, 25, 1234);
  FalsifyResult b = falsify("hardy", {}, 25, 1234);
  REQUIRE(a.worst_ratio == b.worst_ratio);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    REQUIRE(a.log[i].outcome == b.log[i].outcome);
    if (std::isfinite(a.log[i].ratio)) REQUIRE(a.log[i].ratio == b.log[i].ratio);
  }
  REQUIRE(a.worst->bindings == b.worst->bindings);
}

TEST_CASE("falsify worst witness re-runs to the same verdict", "[verifier]") {
  FalsifyResult r = falsify("hardy", {}, 25, 77);
  REQUIRE(r.worst.has_value());
  std::map<Slot, FunctionSpec> b{
      {Slot::f, FunctionSpec(parse(r.worst->bindings.at("f")), Interval::positive_axis())}};
  Verdict again = run("hardy", r.worst->params, b);
  REQUIRE(again.ratio == Catch::Approx(r.worst->verdict.ratio).epsilon(1e-12));
}

TEST_CASE("falsify on the thm32 statement form completes and serializes a witness",
          "[verifier]") {
  FalsifyResult r = falsify("thm32-statement", {}, 40, 1);
  REQUIRE(r.completed == 40);
  REQUIRE(r.worst.has_value());
  REQUIRE_FALSE(r.worst->bindings.empty());
  long total = 0;
  for (const auto& [k, v] : r.outcome_counts) total += v;
  REQUIRE(total == r.completed);
}

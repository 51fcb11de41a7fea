#include <catch2/catch_amalgamated.hpp>

#include "hardycheck/sampler.hpp"

using namespace hardycheck;

TEST_CASE("sampling is deterministic in the seed", "[sampler]") {
  for (Family fam : {Family::nonneg_nondecreasing, Family::positive_nondecreasing,
                     Family::positive_ratio_nonincreasing,
                     Family::convex_submultiplicative_zero_at_zero, Family::positive_nonincreasing,
                     Family::trunc_constant, Family::trunc_power}) {
    FunctionSpec a = sample_admissible(fam, 42);
    FunctionSpec b = sample_admissible(fam, 42);
    INFO(to_string(fam));
    REQUIRE(a.expr.str() == b.expr.str());
  }
}

TEST_CASE("sampled specs re-pass all their declared property checks", "[sampler]") {
  for (Family fam : {Family::nonneg_nondecreasing, Family::positive_nondecreasing,
                     Family::positive_ratio_nonincreasing,
                     Family::convex_submultiplicative_zero_at_zero,
                     Family::positive_nonincreasing}) {
    for (std::uint64_t seed : {1ull, 7ull, 42ull, 99ull, 1234ull, 5555ull}) {
      FunctionSpec s = sample_admissible(fam, seed);
      INFO(to_string(fam) << " seed " << seed << ": " << s.expr.str());
      REQUIRE(s.declared_props.size() == family_properties(fam).size());
      for (Property p : family_properties(fam)) {
        Certificate c = check_property(s, p);
        REQUIRE(c.status == CertStatus::verified_numeric);
      }
    }
  }
}

TEST_CASE("family members have the advertised shapes", "[sampler]") {
  FunctionSpec mono = sample_admissible(Family::nonneg_nondecreasing, 42);
  REQUIRE(mono.find_certificate("monotone-nondecreasing") != nullptr);
  REQUIRE(mono.find_certificate("monotone-nondecreasing")->passed());

  FunctionSpec ratio = sample_admissible(Family::positive_ratio_nonincreasing, 7);
  REQUIRE(ratio.find_certificate("ratio-x-over-g-nonincreasing")->passed());

  FunctionSpec phi = sample_admissible(Family::convex_submultiplicative_zero_at_zero, 1);
  REQUIRE(phi.expr.kind() == NodeKind::power);
  REQUIRE(phi.expr.exponent() >= 1.0);
  REQUIRE(phi.expr.exponent() <= 4.0);

  FunctionSpec tp = sample_admissible(Family::trunc_power, 3);
  REQUIRE(tp.expr.kind() == NodeKind::truncate);
}

TEST_CASE("bounded sampling options exclude unbounded growth", "[sampler]") {
  SampleOptions so;
  so.bounded_only = true;
  so.vanish_at_zero = true;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    FunctionSpec s = sample_admissible(Family::nonneg_nondecreasing, seed, so);
    double v6 = s.expr(1e6);
    double v8 = s.expr(1e8);
    INFO(s.expr.str());
    REQUIRE(v8 <= v6 * 1.001 + 1e-9);  // saturating members stop growing
    REQUIRE(s.expr(1e-12) <= 1e-9);    // and vanish at zero
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardycheck/explorer.hpp"
#include "hardycheck/parser.hpp"

using namespace hardycheck;

TEST_CASE("sweep closed form: spec expression equals the simplified form", "[explorer]") {
  for (double T : {1.5, 10.0, 1e3, 1e6}) {
    double spec_form = sweep_oracle_lhs_p2(T);
    double simplified = 4.0 * (std::log(T) + 2.0 / std::sqrt(T) - 2.0);
    REQUIRE(spec_form == Catch::Approx(simplified).epsilon(1e-12));
  }
}

TEST_CASE("sharpness sweep matches the p=2 oracle and increases in T", "[explorer]") {
  auto grid = log_grid_points(10.0, 1e6, 6);
  SweepResult r = sharpness_sweep(2.0, grid);
  REQUIRE(r.points.size() == 6);
  REQUIRE(r.oracle_checked);
  REQUIRE(r.max_oracle_rel_err < 1e-4);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    INFO("T=" << r.points[i].T);
    REQUIRE(r.points[i].ratio ==
            Catch::Approx(r.points[i].oracle_ratio).epsilon(1e-4));
    if (i > 0) REQUIRE(r.points[i].ratio > r.points[i - 1].ratio);
  }
  REQUIRE(r.points.back().ratio >= 0.85);
  // Equivalently lhs / int f^2 >= 3.4 at T = 1e6.
  REQUIRE(4.0 * r.points.back().ratio >= 3.4);
  // (1 - ratio) ln T = 2 - 2/sqrt(T), so the fitted c lies below 2 and
  // approaches 2 when the grid only contains large T.
  REQUIRE(r.fitted_asymptote_c > 1.3);
  REQUIRE(r.fitted_asymptote_c < 2.0);
  SweepResult far = sharpness_sweep(2.0, log_grid_points(1e4, 1e6, 3));
  REQUIRE(far.fitted_asymptote_c == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("sweep ratio vanishes as T approaches 1", "[explorer]") {
  SweepResult r = sharpness_sweep(2.0, {1.0001});
  REQUIRE(r.points.front().ratio < 0.01);
  REQUIRE(r.points.front().ratio > 0.0);
}

TEST_CASE("sweep grid validation", "[explorer]") {
  REQUIRE_THROWS_AS(sharpness_sweep(2.0, {0.5, 2.0}), ConstraintError);
  REQUIRE_THROWS_AS(sharpness_sweep(2.0, {10.0, 5.0}), ConstraintError);
  REQUIRE_THROWS_AS(sharpness_sweep(0.9, {10.0}), ConstraintError);
}

TEST_CASE("optimizer finds the extremal exponent for hardy at p=2", "[explorer][slow]") {
  OptimizerOptions oo;
  oo.multistart = 4;
  oo.max_evals_per_start = 90;
  OptimizationTrace tr =
      maximize_ratio("hardy", Params{.p = 2.0}, param_family("trunc-power"), {}, oo, 2024);
  REQUIRE(tr.best_ratio >= 0.85);
  REQUIRE(tr.best_params[0] == Catch::Approx(-0.5).margin(0.05));
  REQUIRE(tr.warnings.empty());
  // Best ratio equals the max over iterates.
  double best = -kInf;
  for (double r : tr.iterate_ratios) best = std::max(best, r);
  REQUIRE(tr.best_ratio == best);
}

TEST_CASE("optimizer stays below 1 and beats the sweep on its own family",
          "[explorer][slow]") {
  auto grid = log_grid_points(10.0, 1e5, 5);
  SweepResult sweep = sharpness_sweep(1.5, grid);
  double sweep_max = 0.0;
  for (const auto& pt : sweep.points) sweep_max = std::max(sweep_max, pt.ratio);

  OptimizerOptions oo;
  oo.multistart = 3;
  oo.max_evals_per_start = 80;
  OptimizationTrace tr =
      maximize_ratio("hardy", Params{.p = 1.5}, param_family("trunc-power"), {}, oo, 7);
  REQUIRE(tr.best_ratio < 1.0);
  REQUIRE(tr.best_ratio >= sweep_max);
}

TEST_CASE("homogeneity makes the constant family trace flat", "[explorer]") {
  Params P;
  P.p = 2.0;
  P.interval = Interval(1.0, 2.0);
  OptimizerOptions oo;
  oo.multistart = 2;
  oo.max_evals_per_start = 25;
  OptimizationTrace tr =
      maximize_ratio("hardy-finite", P, param_family("constant"), {}, oo, 5);
  double lo = kInf, hi = -kInf;
  for (double r : tr.iterate_ratios) {
    if (!std::isfinite(r)) continue;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  REQUIRE(hi - lo < 1e-6);
  REQUIRE(tr.termination == "simplex-converged");
}

TEST_CASE("optimizer requires a <= entry and certifiable starts", "[explorer]") {
  Params P;
  P.p = 0.5;
  P.a = 2.0;
  P.q = 1.0;
  REQUIRE_THROWS_AS(
      maximize_ratio("thm32", P, param_family("trunc-power"), {}, OptimizerOptions{}, 1),
      ConstraintError);
  REQUIRE_THROWS_AS(param_family("no-such-family"), ConstraintError);
}

TEST_CASE("optimizer is deterministic in the seed", "[explorer]") {
  OptimizerOptions oo;
  oo.multistart = 2;
  oo.max_evals_per_start = 30;
  OptimizationTrace a =
      maximize_ratio("hardy", Params{.p = 2.0}, param_family("trunc-power"), {}, oo, 99);
  OptimizationTrace b =
      maximize_ratio("hardy", Params{.p = 2.0}, param_family("trunc-power"), {}, oo, 99);
  REQUIRE(a.best_ratio == b.best_ratio);
  REQUIRE(a.evaluations == b.evaluations);
  REQUIRE(a.best_params == b.best_params);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hardycheck/quadrature.hpp"

using namespace hardycheck;

namespace {

struct OracleCase {
  const char* name;
  std::function<double(double)> f;
  Interval iv;
  double exact;
};

// Independent check for the 2 ln 2 integral: high-resolution trapezoid sweep.
// The integrand extends continuously to 0 with limit 1 and decays like 1/x^2,
// so a wide truncated trapezoid plus an analytic tail bound is enough.
double trapezoid_two_log_two() {
  auto f = [](double x) {
    if (x < 1e-8) return 1.0 - x;  // series: 1 - x + 7x^2/12 - ...
    double u = 1.0 - std::exp(-x);
    return u * u / (x * x);
  };
  const double a = 0.0, b = 80.0;
  const std::size_t n = 4'000'000;
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  // tail beyond b: (1-e^-x)^2/x^2 in [ (1-e^-b)^2/x^2, 1/x^2 ], integral ~ 1/b
  return sum * h + 1.0 / b;
}

}  // namespace

TEST_CASE("closed-form oracle corpus reproduced to 1e-8 relative", "[quadrature]") {
  const double two_log_two = 2.0 * std::log(2.0);
  std::vector<OracleCase> cases = {
      {"x^2 on (0,1)", [](double x) { return x * x; }, Interval(0, 1), 1.0 / 3.0},
      {"x^3 on (0,2)", [](double x) { return x * x * x; }, Interval(0, 2), 4.0},
      {"exp(-x) on (0,inf)", [](double x) { return std::exp(-x); }, Interval::positive_axis(), 1.0},
      {"x*exp(-x) on (0,inf)", [](double x) { return x * std::exp(-x); }, Interval::positive_axis(), 1.0},
      {"exp(-2x) on (0,inf)", [](double x) { return std::exp(-2.0 * x); }, Interval::positive_axis(), 0.5},
      {"(1-exp(-x))^2/x^2 on (0,inf)",
       [](double x) {
         double u = 1.0 - std::exp(-x);
         return u * u / (x * x);
       },
       Interval::positive_axis(), two_log_two},
      {"x^-1/2 on (0,1) (endpoint singularity)", [](double x) { return 1.0 / std::sqrt(x); },
       Interval(0, 1), 2.0},
      {"log(x) on (0,1)", [](double x) { return std::log(x); }, Interval(0, 1), -1.0},
      {"x^-2 on (1,inf)", [](double x) { return 1.0 / (x * x); }, Interval(1, kInf), 1.0},
      {"1/(1+x)^2 on (0,inf)", [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); },
       Interval::positive_axis(), 1.0},
      {"truncated Hardy integrand f^2, f=x^-1/2 on [1,T]",
       [](double x) { return (x >= 1.0 && x <= 1e4) ? 1.0 / x : 0.0; }, Interval::positive_axis(),
       std::log(1e4)},
      {"piecewise min(x,1) on (0,3)", [](double x) { return std::min(x, 1.0); }, Interval(0, 3),
       2.5}};

  QuadOptions opts;
  for (const auto& c : cases) {
    INFO(c.name);
    std::vector<double> cuts;
    if (std::string(c.name).find("truncated") != std::string::npos) cuts = {1.0, 1e4};
    if (std::string(c.name).find("min(x,1)") != std::string::npos) cuts = {1.0};
    IntegralEstimate est = integrate(c.f, c.iv, opts, cuts);
    REQUIRE(est.status == QuadStatus::converged);
    REQUIRE(est.value == Catch::Approx(c.exact).epsilon(1e-8));
    REQUIRE(est.err_bound <= std::max(opts.abs_tol, opts.rel_tol * std::abs(est.value)));
    REQUIRE(est.evals <= opts.max_evals);
  }
}

TEST_CASE("2 ln 2 integral cross-checked by independent trapezoid sweep", "[quadrature][slow]") {
  double trap = trapezoid_two_log_two();
  REQUIRE(trap == Catch::Approx(2.0 * std::log(2.0)).margin(2e-2));
  auto f = [](double x) {
    double u = 1.0 - std::exp(-x);
    return u * u / (x * x);
  };
  IntegralEstimate est = integrate(f, Interval::positive_axis());
  REQUIRE(est.value == Catch::Approx(trap).margin(2e-2));
  REQUIRE(est.value == Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("harmonic tail flagged divergent-suspected", "[quadrature]") {
  auto f = [](double x) { return 1.0 / x; };
  IntegralEstimate est = integrate(f, Interval(1, kInf));
  REQUIRE(est.status == QuadStatus::divergent_suspected);
  REQUIRE_FALSE(est.diagnostic.empty());
}

TEST_CASE("non-finite integrand value yields inconclusive with diagnostic", "[quadrature]") {
  auto f = [](double x) { return 1.0 / (x - 0.5); };  // pole inside (0,1)
  IntegralEstimate est = integrate(f, Interval(0, 1));
  REQUIRE(est.status != QuadStatus::converged);

  auto g = [](double x) { return x < 0.5 ? 1.0 : std::numeric_limits<double>::quiet_NaN(); };
  IntegralEstimate eg = integrate(g, Interval(0, 1));
  REQUIRE(eg.status == QuadStatus::inconclusive);
  REQUIRE(eg.diagnostic.find("non-finite") != std::string::npos);
}

TEST_CASE("budget exhaustion yields inconclusive", "[quadrature]") {
  QuadOptions opts;
  opts.max_evals = 60;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-14;
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  IntegralEstimate est = integrate(f, Interval(0, 1), opts);
  REQUIRE(est.status == QuadStatus::inconclusive);
  REQUIRE(est.evals <= opts.max_evals);
}

TEST_CASE("classify_tail on powers and exponentials", "[quadrature]") {
  auto inv_sq = [](double x) { return 1.0 / (x * x); };
  TailClassification a = classify_tail(inv_sq, 1.0);
  REQUIRE(a.kind == TailKind::integrable);
  REQUIRE(a.exponent == Catch::Approx(-2.0).margin(0.1));

  auto inv = [](double x) { return 1.0 / x; };
  TailClassification b = classify_tail(inv, 1.0);
  REQUIRE(b.kind == TailKind::divergent);
  REQUIRE(b.exponent == Catch::Approx(-1.0).margin(0.1));

  auto decay = [](double x) { return std::exp(-x); };
  TailClassification c = classify_tail(decay, 1.0);
  REQUIRE(c.kind == TailKind::integrable);
  REQUIRE(c.super_polynomial);

  auto grow = [](double x) { return x; };
  TailClassification d = classify_tail(grow, 1.0);
  REQUIRE(d.kind == TailKind::divergent);

  auto osc = [](double x) { return std::sin(x); };
  TailClassification e = classify_tail(osc, 1.0);
  REQUIRE(e.kind == TailKind::inconclusive);

  auto zero_tail = [](double x) { return x < 3.0 ? 1.0 : 0.0; };
  TailClassification z = classify_tail(zero_tail, 1.0);
  REQUIRE(z.kind == TailKind::integrable);
  REQUIRE(z.super_polynomial);
}

TEST_CASE("additivity over interior split points", "[quadrature]") {
  auto f = [](double x) { return std::exp(-x) * (1.0 + std::cos(3.0 * x)); };
  for (double mid : {0.3, 1.0, 2.5, 7.0}) {
    IntegralEstimate whole = integrate(f, Interval(0.1, 9.0));
    IntegralEstimate left = integrate(f, Interval(0.1, mid));
    IntegralEstimate right = integrate(f, Interval(mid, 9.0));
    REQUIRE(whole.converged());
    REQUIRE(std::abs(whole.value - (left.value + right.value)) <=
            whole.err_bound + left.err_bound + right.err_bound + 1e-12);
  }
}

TEST_CASE("linearity on converged results", "[quadrature]") {
  auto f = [](double x) { return std::exp(-x); };
  auto g = [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); };
  const double alpha = 2.75, beta = -0.5;
  auto combo = [&](double x) { return alpha * f(x) + beta * g(x); };
  IntegralEstimate ef = integrate(f, Interval::positive_axis());
  IntegralEstimate eg = integrate(g, Interval::positive_axis());
  IntegralEstimate ec = integrate(combo, Interval::positive_axis());
  REQUIRE(ec.value == Catch::Approx(alpha * ef.value + beta * eg.value).margin(1e-8));
}

TEST_CASE("monotonicity of converged values", "[quadrature]") {
  auto f = [](double x) { return std::exp(-x) + 0.1; };
  auto g = [](double x) { return std::exp(-x); };
  IntegralEstimate ef = integrate(f, Interval(0, 5));
  IntegralEstimate eg = integrate(g, Interval(0, 5));
  REQUIRE(ef.value >= eg.value - ef.err_bound - eg.err_bound);
}

TEST_CASE("options are validated", "[quadrature]") {
  QuadOptions bad;
  bad.abs_tol = 0.0;
  auto f = [](double x) { return x; };
  REQUIRE_THROWS_AS(integrate(f, Interval(0, 1), bad), ConstraintError);
  QuadOptions bad2;
  bad2.max_evals = -5;
  REQUIRE_THROWS_AS(integrate(f, Interval(0, 1), bad2), ConstraintError);
  REQUIRE_THROWS_AS(Interval(2.0, 1.0), ConstraintError);
  REQUIRE_THROWS_AS(Interval(-1.0, 1.0), ConstraintError);
}

TEST_CASE("determinism: identical inputs give identical estimates", "[quadrature]") {
  auto f = [](double x) { return std::sqrt(x) * std::exp(-0.7 * x); };
  IntegralEstimate a = integrate(f, Interval::positive_axis());
  IntegralEstimate b = integrate(f, Interval::positive_axis());
  REQUIRE(a.value == b.value);
  REQUIRE(a.err_bound == b.err_bound);
  REQUIRE(a.evals == b.evals);
}

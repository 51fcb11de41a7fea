#pragma once

/// Numeric certification of the structural properties that the inequality
/// hypotheses require: checks run on finite log-spaced grids, so a passing
/// status is "verified-numeric", never a proof. A refutation always carries
/// a witness at which re-evaluating the defining inequality fails again.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cumulative.hpp"
#include "errors.hpp"
#include "function_spec.hpp"
#include "rng.hpp"

namespace hardycheck {

enum class Property {
  non_negative,
  monotone_nondecreasing,
  monotone_nonincreasing,
  convex,
  submultiplicative,
  ratio_x_over_g_nonincreasing,
  zero_at_zero
};

inline const char* to_string(Property p) {
  switch (p) {
    case Property::non_negative: return "non-negative";
    case Property::monotone_nondecreasing: return "monotone-nondecreasing";
    case Property::monotone_nonincreasing: return "monotone-nonincreasing";
    case Property::convex: return "convex";
    case Property::submultiplicative: return "submultiplicative";
    case Property::ratio_x_over_g_nonincreasing: return "ratio-x-over-g-nonincreasing";
    case Property::zero_at_zero: return "zero-at-zero";
  }
  return "?";
}

inline std::optional<Property> property_from_string(const std::string& s) {
  for (Property p : {Property::non_negative, Property::monotone_nondecreasing,
                     Property::monotone_nonincreasing, Property::convex,
                     Property::submultiplicative, Property::ratio_x_over_g_nonincreasing,
                     Property::zero_at_zero}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

namespace hyp_detail {

inline constexpr double kRelTol = 1e-12;

inline double tol(double scale) { return kRelTol * std::max(1.0, scale); }

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                         static_cast<double>(std::max(1, n - 1))));
  return g;
}

/// Grid range actually used for one-variable checks on this domain.
inline std::pair<double, double> effective_range(const Interval& domain) {
  double hi = std::isinf(domain.hi) ? 1e6 : domain.hi;
  double lo = domain.lo > 0.0 ? domain.lo : std::min(1e-6, hi * 1e-7);
  return {lo, hi};
}

struct Violation {
  double amount = -kInf;  // defining-inequality excess beyond tolerance
  Witness witness;
};

}  // namespace hyp_detail

/// Amount by which the defining inequality of `prop` fails at the witness,
/// minus the comparison tolerance. Positive means the property is violated
/// there; used both by the grid check and by witness re-checks. Throws
/// EvalError if the function cannot be evaluated at the witness.
inline double property_violation_at(const FunctionSpec& spec, Property prop, const Witness& w) {
  const Expr& f = spec.expr;
  switch (prop) {
    case Property::non_negative: {
      double v = f(w.x);
      return -v - hyp_detail::tol(std::abs(v));
    }
    case Property::monotone_nondecreasing: {
      double a = f(w.x), b = f(*w.y);
      return (a - b) - hyp_detail::tol(std::max(std::abs(a), std::abs(b)));
    }
    case Property::monotone_nonincreasing: {
      double a = f(w.x), b = f(*w.y);
      return (b - a) - hyp_detail::tol(std::max(std::abs(a), std::abs(b)));
    }
    case Property::convex: {
      double x = w.x;
      double h = std::max(1e-5, 1e-5 * x);
      double fm = f(x - h), f0 = f(x), fp = f(x + h);
      double second = fm - 2.0 * f0 + fp;
      double scale = std::max({std::abs(fm), std::abs(f0), std::abs(fp)});
      return -second - hyp_detail::tol(scale);
    }
    case Property::submultiplicative: {
      double pxy = f(w.x * *w.y);
      double px = f(w.x), py = f(*w.y);
      return (pxy - px * py) - hyp_detail::tol(std::abs(px * py));
    }
    case Property::ratio_x_over_g_nonincreasing: {
      double ra = w.x / f(w.x), rb = *w.y / f(*w.y);
      if (!std::isfinite(ra) || !std::isfinite(rb))
        throw EvalError("ratio", w.x, "x/g(x) not finite");
      return (rb - ra) - hyp_detail::tol(std::max(std::abs(ra), std::abs(rb)));
    }
    case Property::zero_at_zero: {
      const double x0 = 1e-9;
      double v = f(x0);
      double ref = std::abs(f(1.0));
      return v - x0 * std::max(1.0, ref) - hyp_detail::tol(0.0);
    }
  }
  return -kInf;
}

/// Certify `prop` for spec on a log-spaced grid (default 512 points; pair
/// properties use a capped deterministic subsample of the grid square).
inline Certificate check_property(const FunctionSpec& spec, Property prop, int grid_size = 512) {
  namespace hd = hyp_detail;
  Certificate cert;
  cert.property = to_string(prop);

  auto conclude = [&](const hd::Violation& worst, long failures, const std::string& grid_desc) {
    cert.grid = grid_desc;
    if (worst.amount > 0.0) {
      cert.status = CertStatus::refuted;
      cert.witness = worst.witness;
      cert.detail = "violation " + format_double(worst.amount) + " beyond tolerance";
    } else if (failures > 0) {
      cert.status = CertStatus::inconclusive;
      cert.detail = std::to_string(failures) + " grid evaluation failures";
    } else {
      cert.status = CertStatus::verified_numeric;
    }
  };

  auto scan = [&](const std::vector<Witness>& points, const std::string& grid_desc) {
    hd::Violation worst;
    long failures = 0;
    for (const auto& w : points) {
      try {
        double v = property_violation_at(spec, prop, w);
        if (v > worst.amount) {
          worst.amount = v;
          worst.witness = w;
        }
      } catch (const EvalError&) {
        ++failures;
      }
    }
    conclude(worst, failures, grid_desc);
  };

  switch (prop) {
    case Property::non_negative: {
      auto [lo, hi] = hd::effective_range(spec.domain);
      auto g = hd::log_grid(lo, hi, grid_size);
      std::vector<Witness> pts;
      for (double x : g) pts.push_back({x, std::nullopt});
      scan(pts, "log-spaced " + std::to_string(grid_size) + " points on [" +
                    format_double(lo) + ", " + format_double(hi) + "]");
      break;
    }
    case Property::monotone_nondecreasing:
    case Property::monotone_nonincreasing:
    case Property::ratio_x_over_g_nonincreasing: {
      auto [lo, hi] = hd::effective_range(spec.domain);
      auto g = hd::log_grid(lo, hi, grid_size);
      std::vector<Witness> pts;
      for (std::size_t i = 0; i + 1 < g.size(); ++i) pts.push_back({g[i], g[i + 1]});
      scan(pts, "log-spaced " + std::to_string(grid_size) + " points on [" +
                    format_double(lo) + ", " + format_double(hi) + "]");
      break;
    }
    case Property::convex: {
      auto [lo, hi] = hd::effective_range(spec.domain);
      auto g = hd::log_grid(lo, hi, grid_size);
      std::vector<Witness> pts;
      for (double x : g) {
        double h = std::max(1e-5, 1e-5 * x);
        if (x - h > spec.domain.lo && x + h < spec.domain.hi) pts.push_back({x, std::nullopt});
      }
      scan(pts, "log-spaced second differences on [" + format_double(lo) + ", " +
                    format_double(hi) + "] (" + std::to_string(pts.size()) + " usable)");
      break;
    }
    case Property::submultiplicative: {
      // Pairs drawn log-uniformly from [1e-3, 1e3]^2; violations live away
      // from small arguments, so the diagonal is always included.
      auto g = hd::log_grid(1e-3, 1e3, grid_size);
      std::vector<Witness> pts;
      for (double x : g) pts.push_back({x, x});
      const std::size_t cap = 8192;
      const std::size_t n = g.size();
      for (std::size_t k = 0; k < cap; ++k) {
        std::uint64_t h = splitmix64(k + 12345);
        std::size_t i = static_cast<std::size_t>(h % n);
        std::size_t j = static_cast<std::size_t>((h >> 32) % n);
        pts.push_back({g[i], g[j]});
      }
      scan(pts, std::to_string(grid_size) + "^2 log-uniform pairs on [1e-03, 1e+03]^2, " +
                    std::to_string(pts.size()) + " sampled");
      break;
    }
    case Property::zero_at_zero: {
      scan({Witness{1e-9, std::nullopt}}, "limit probe at x = 1e-09");
      break;
    }
  }
  return cert;
}

/// Re-evaluate a refutation at its stored witness. True when the violation
/// reproduces (fails by more than the comparison tolerance).
inline bool witness_reproduces(const FunctionSpec& spec, Property prop, const Certificate& cert) {
  if (!cert.witness) return false;
  try {
    return property_violation_at(spec, prop, *cert.witness) > 0.0;
  } catch (const EvalError&) {
    return false;
  }
}

/// Run checks for each named property and attach the certificates.
/// Returns true when all of them pass.
inline bool certify(FunctionSpec& spec, const std::vector<Property>& props, int grid_size = 512) {
  bool all = true;
  spec.certificates.clear();
  spec.declared_props.clear();
  for (Property p : props) {
    Certificate c = check_property(spec, p, grid_size);
    all = all && c.passed();
    spec.declared_props.push_back(to_string(p));
    spec.certificates.push_back(std::move(c));
  }
  return all;
}

// ---------------------------------------------------------------------------
// Ratio lemmas
// ---------------------------------------------------------------------------

enum class RatioLemma { phi, cumulative_g };

inline const char* to_string(RatioLemma w) {
  return w == RatioLemma::phi ? "lemma-phi" : "lemma-G";
}

namespace hyp_detail {

enum class Direction { nondecreasing, nonincreasing, both, neither };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::nondecreasing: return "non-decreasing";
    case Direction::nonincreasing: return "non-increasing";
    case Direction::both: return "constant";
    case Direction::neither: return "not monotone";
  }
  return "?";
}

template <class F>
Direction direction_of(F&& values, const std::vector<double>& grid) {
  bool can_incr = true, can_decr = true;
  std::vector<double> v;
  v.reserve(grid.size());
  for (double x : grid) v.push_back(values(x));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    double t = tol(std::max(std::abs(v[i]), std::abs(v[i + 1])));
    if (v[i + 1] < v[i] - t) can_incr = false;
    if (v[i + 1] > v[i] + t) can_decr = false;
  }
  if (can_incr && can_decr) return Direction::both;
  if (can_incr) return Direction::nondecreasing;
  if (can_decr) return Direction::nonincreasing;
  return Direction::neither;
}

template <class F>
std::optional<Witness> monotonicity_witness(F&& values, const std::vector<double>& grid,
                                            Direction dir) {
  double worst = 0.0;
  std::optional<Witness> w;
  std::vector<double> v;
  v.reserve(grid.size());
  for (double x : grid) v.push_back(values(x));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    double t = tol(std::max(std::abs(v[i]), std::abs(v[i + 1])));
    double gap = dir == Direction::nonincreasing ? v[i + 1] - v[i] : v[i] - v[i + 1];
    if (gap - t > worst) {
      worst = gap - t;
      w = Witness{grid[i], grid[i + 1]};
    }
  }
  return w;
}

}  // namespace hyp_detail

/// Check the ratio lemmas as standalone propositions on (0, 1e3]:
///  - lemma-phi: submultiplicative phi with phi(0)=0 and monotone phi'
///    has phi(x)/x monotone in the same direction.
///  - lemma-G:   positive g with monotone g(x)/x has G(x)/x^2 monotone in
///    the same direction, G the cumulative integral of g.
/// Premise failures throw PremiseError; a refuted conclusion would mean an
/// implementation bug or a failure of the lemma itself, and is surfaced
/// with a LOUD detail string.
inline Certificate verify_ratio_lemma(RatioLemma which, const FunctionSpec& input,
                                      int grid_size = 512) {
  namespace hd = hyp_detail;
  using hd::Direction;
  Certificate cert;
  cert.property = to_string(which);
  auto grid = hd::log_grid(1e-6, 1e3, grid_size);
  cert.grid = "log-spaced " + std::to_string(grid_size) + " points on (0, 1e+03]";

  try {
    if (which == RatioLemma::phi) {
      Certificate sub = check_property(input, Property::submultiplicative, grid_size);
      Certificate zz = check_property(input, Property::zero_at_zero, grid_size);
      if (!sub.passed() || !zz.passed())
        throw PremiseError(std::string("premises not satisfied: phi must be submultiplicative "
                                       "with phi(0)=0 (") +
                           (sub.passed() ? "zero-at-zero" : "submultiplicative") + " failed)");
      // Central-difference phi' with a round-off-aware comparison noise:
      // the difference quotient carries ~ eps |phi| / h of error, which can
      // dwarf the 1e-12 tolerance when phi' is (near-)constant.
      auto dgrid = hd::log_grid(1e-4, 1e3, grid_size);
      std::vector<double> deriv(dgrid.size()), noise(dgrid.size());
      const double eps = std::numeric_limits<double>::epsilon();
      for (std::size_t i = 0; i < dgrid.size(); ++i) {
        double x = dgrid[i];
        double h = 1e-6 * x;
        double fp = input.expr(x + h), fm = input.expr(x - h);
        deriv[i] = (fp - fm) / (2.0 * h);
        noise[i] = 4.0 * eps * (std::abs(fp) + std::abs(fm)) / (2.0 * h) +
                   hd::tol(std::abs(deriv[i]));
      }
      bool can_incr = true, can_decr = true;
      for (std::size_t i = 0; i + 1 < dgrid.size(); ++i) {
        double slack = noise[i] + noise[i + 1];
        if (deriv[i + 1] < deriv[i] - slack) can_incr = false;
        if (deriv[i + 1] > deriv[i] + slack) can_decr = false;
      }
      Direction ddir = can_incr && can_decr
                           ? Direction::both
                           : (can_incr ? Direction::nondecreasing
                                       : (can_decr ? Direction::nonincreasing
                                                   : Direction::neither));
      if (ddir == Direction::neither)
        throw PremiseError("premises not satisfied: phi' is not monotone on the grid");

      auto ratio = [&](double x) { return input.expr(x) / x; };
      Direction want = ddir;
      Direction got = hd::direction_of(ratio, grid);
      bool ok = got == Direction::both || want == Direction::both || got == want;
      if (ok) {
        cert.status = CertStatus::verified_numeric;
        cert.detail = std::string("phi'/ratio direction: ") + hd::to_string(ddir);
      } else {
        cert.status = CertStatus::refuted;
        cert.witness = hd::monotonicity_witness(
            ratio, grid, want == Direction::nonincreasing ? Direction::nonincreasing
                                                          : Direction::nondecreasing);
        cert.detail = std::string("LEMMA REFUTED: phi(x)/x expected ") + hd::to_string(want) +
                      ", found " + hd::to_string(got) +
                      " (implementation bug or lemma failure)";
      }
    } else {
      auto gfun = [&](double x) { return input.expr(x); };
      for (double x : grid) {
        if (!(gfun(x) > 0.0))
          throw PremiseError("premises not satisfied: g must be positive on the grid");
      }
      auto gratio = [&](double x) { return input.expr(x) / x; };
      Direction gdir = hd::direction_of(gratio, grid);
      if (gdir == Direction::neither)
        throw PremiseError("premises not satisfied: g(x)/x is not monotone on the grid");

      Cumulative G(input.expr, input.domain);
      auto Gratio = [&](double x) { return G(x) / (x * x); };
      Direction got = hd::direction_of(Gratio, grid);
      bool ok = got == Direction::both || gdir == Direction::both || got == gdir;
      if (ok) {
        cert.status = CertStatus::verified_numeric;
        cert.detail = std::string("g/x and G/x^2 direction: ") + hd::to_string(gdir);
      } else {
        cert.status = CertStatus::refuted;
        cert.witness = hd::monotonicity_witness(
            Gratio, grid, gdir == Direction::nonincreasing ? Direction::nonincreasing
                                                           : Direction::nondecreasing);
        cert.detail = std::string("LEMMA REFUTED: G(x)/x^2 expected ") + hd::to_string(gdir) +
                      ", found " + hd::to_string(got) +
                      " (implementation bug or lemma failure)";
      }
    }
  } catch (const EvalError& e) {
    cert.status = CertStatus::inconclusive;
    cert.detail = std::string("evaluation failed: ") + e.what();
  }
  return cert;
}

}  // namespace hardycheck

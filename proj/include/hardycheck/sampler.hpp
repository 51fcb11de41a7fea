#pragma once

/// Seeded samplers for the admissible-function families used by the
/// randomized suites and the falsifier. Families are structured
/// combinations of a small basis so that property certificates are cheap
/// and violations attributable; every returned spec re-passes its declared
/// property checks (rejection-resampled a bounded number of times).

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "function_spec.hpp"
#include "hypotheses.hpp"
#include "rng.hpp"

namespace hardycheck {

enum class Family {
  nonneg_nondecreasing,
  positive_nondecreasing,
  positive_ratio_nonincreasing,
  convex_submultiplicative_zero_at_zero,
  positive_nonincreasing,
  // Falsification families: admissible for entries that only need f >= 0.
  trunc_constant,
  trunc_power
};

inline const char* to_string(Family f) {
  switch (f) {
    case Family::nonneg_nondecreasing: return "nonneg-nondecreasing";
    case Family::positive_nondecreasing: return "positive-nondecreasing";
    case Family::positive_ratio_nonincreasing: return "positive-ratio-nonincreasing";
    case Family::convex_submultiplicative_zero_at_zero:
      return "convex-submultiplicative-zero-at-zero";
    case Family::positive_nonincreasing: return "positive-nonincreasing";
    case Family::trunc_constant: return "trunc-constant";
    case Family::trunc_power: return "trunc-power";
  }
  return "?";
}

inline std::optional<Family> family_from_string(const std::string& s) {
  for (Family f : {Family::nonneg_nondecreasing, Family::positive_nondecreasing,
                   Family::positive_ratio_nonincreasing,
                   Family::convex_submultiplicative_zero_at_zero, Family::positive_nonincreasing,
                   Family::trunc_constant, Family::trunc_power}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

struct SampleOptions {
  bool bounded_only = false;   // exclude unbounded basis members (x^beta terms)
  bool vanish_at_zero = false; // exclude constant offsets
  double beta_max = 2.0;
  double power_min = 0.0;      // power-range override for the power-law families
  double power_max = 0.0;      // (0 means family default)
  int grid_size = 512;
  int max_retries = 64;
};

namespace sampler_detail {

inline Expr round_const(double v) {
  // Short decimal constants keep rendered expressions readable.
  return Expr::constant(std::round(v * 1024.0) / 1024.0);
}

inline Expr scaled(double c, Expr e) { return Expr::product({round_const(c), std::move(e)}); }

inline Expr nondecreasing_member(Rng& rng, const SampleOptions& so) {
  int terms = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<Expr> parts;
  if (!so.vanish_at_zero && rng.uniform() < 0.3)
    parts.push_back(round_const(rng.uniform(0.1, 1.0)));
  for (int t = 0; t < terms; ++t) {
    double coef = rng.uniform(0.25, 2.0);
    int kind = static_cast<int>(rng.uniform_int(0, so.bounded_only ? 1 : 2));
    switch (kind) {
      case 0: {  // min(x, c)
        double c = rng.log_uniform(0.2, 5.0);
        parts.push_back(scaled(coef, Expr::minimum(Expr::variable(), round_const(c))));
        break;
      }
      case 1: {  // 1 - e^(-lambda x)
        double lam = rng.log_uniform(0.2, 5.0);
        Expr decay = Expr::exponential(Expr::product({round_const(-lam), Expr::variable()}));
        parts.push_back(scaled(coef, Expr::sum({Expr::constant(1.0), Expr::negate(decay)})));
        break;
      }
      default: {  // x^beta
        double beta = rng.uniform(0.25, so.beta_max);
        parts.push_back(scaled(coef, Expr::power(Expr::variable(),
                                                 std::round(beta * 64.0) / 64.0)));
        break;
      }
    }
  }
  return Expr::sum(std::move(parts));
}

inline Expr nonincreasing_member(Rng& rng) {
  int terms = static_cast<int>(rng.uniform_int(1, 2));
  std::vector<Expr> parts;
  if (rng.uniform() < 0.4) parts.push_back(round_const(rng.uniform(0.1, 1.0)));
  for (int t = 0; t < terms; ++t) {
    double coef = rng.uniform(0.3, 2.0);
    switch (rng.uniform_int(0, 2)) {
      case 0: {  // c e^(-lambda x)
        double lam = rng.log_uniform(0.2, 4.0);
        parts.push_back(scaled(
            coef, Expr::exponential(Expr::product({round_const(-lam), Expr::variable()}))));
        break;
      }
      case 1: {  // c / (s + x)
        double s = rng.log_uniform(0.3, 3.0);
        parts.push_back(scaled(
            coef, Expr::power(Expr::sum({round_const(s), Expr::variable()}), -1.0)));
        break;
      }
      default: {  // x^(-gamma), gamma < 1 keeps the cumulative finite
        double gamma = rng.uniform(0.1, 0.85);
        parts.push_back(scaled(coef, Expr::power(Expr::variable(),
                                                 -std::round(gamma * 64.0) / 64.0)));
        break;
      }
    }
  }
  return Expr::sum(std::move(parts));
}

}  // namespace sampler_detail

inline std::vector<Property> family_properties(Family family) {
  switch (family) {
    case Family::nonneg_nondecreasing:
    case Family::positive_nondecreasing:
      return {Property::non_negative, Property::monotone_nondecreasing};
    case Family::positive_ratio_nonincreasing:
      return {Property::non_negative, Property::ratio_x_over_g_nonincreasing};
    case Family::convex_submultiplicative_zero_at_zero:
      return {Property::non_negative, Property::monotone_nondecreasing, Property::convex,
              Property::submultiplicative, Property::zero_at_zero};
    case Family::positive_nonincreasing:
      return {Property::non_negative, Property::monotone_nonincreasing};
    case Family::trunc_constant:
    case Family::trunc_power:
      return {Property::non_negative};
  }
  return {};
}

/// Draw one member of the family, certify its declared properties, and
/// return the spec. Deterministic in the seed. Throws SampleError after
/// max_retries failed certifications.
inline FunctionSpec sample_admissible(Family family, std::uint64_t seed,
                                      const SampleOptions& so = {}) {
  namespace sd = sampler_detail;
  for (int attempt = 0; attempt < so.max_retries; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    Expr e = Expr::constant(0.0);
    switch (family) {
      case Family::nonneg_nondecreasing: {
        SampleOptions local = so;
        local.vanish_at_zero = true;
        e = sd::nondecreasing_member(rng, local);
        break;
      }
      case Family::positive_nondecreasing: {
        std::vector<Expr> parts{sd::round_const(rng.uniform(0.1, 1.0))};
        SampleOptions local = so;
        local.vanish_at_zero = true;
        parts.push_back(sd::nondecreasing_member(rng, local));
        if (so.vanish_at_zero) {
          e = parts[1];  // positivity on (0,inf) holds without the offset
        } else {
          e = Expr::sum(std::move(parts));
        }
        break;
      }
      case Family::positive_ratio_nonincreasing: {
        double c = rng.uniform(0.5, 3.0);
        double lo = so.power_min > 0.0 ? so.power_min : 1.0;
        double hi = so.power_max > 0.0 ? so.power_max : 2.0;
        double gamma = std::round(rng.uniform(lo, hi) * 64.0) / 64.0;
        e = sd::scaled(c, Expr::power(Expr::variable(), std::max(gamma, lo)));
        break;
      }
      case Family::convex_submultiplicative_zero_at_zero: {
        double lo = so.power_min > 0.0 ? so.power_min : 1.0;
        double hi = so.power_max > 0.0 ? so.power_max : 4.0;
        double p = std::max(std::round(rng.uniform(lo, hi) * 64.0) / 64.0, 1.0);
        e = Expr::power(Expr::variable(), p);
        break;
      }
      case Family::positive_nonincreasing:
        e = sd::nonincreasing_member(rng);
        break;
      case Family::trunc_constant: {
        double c = rng.log_uniform(0.25, 4.0);
        double lo = rng.log_uniform(0.1, 10.0);
        double w = rng.log_uniform(0.1, 100.0);
        e = Expr::truncate(sd::round_const(c), std::round(lo * 1024.0) / 1024.0,
                           std::round((lo + w) * 1024.0) / 1024.0);
        break;
      }
      case Family::trunc_power: {
        double alpha = rng.uniform(-0.9, -0.1);
        double T = rng.log_uniform(10.0, 1e6);
        e = Expr::truncate(Expr::power(Expr::variable(), std::round(alpha * 256.0) / 256.0), 1.0,
                           std::round(T));
        break;
      }
    }
    FunctionSpec spec(std::move(e), Interval::positive_axis(), {}, to_string(family));
    if (certify(spec, family_properties(family), so.grid_size)) return spec;
  }
  throw SampleError(std::string("sample_admissible: no certified sample for family ") +
                    to_string(family) + " after bounded retries");
}

}  // namespace hardycheck

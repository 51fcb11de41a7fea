#pragma once

/// Sharpness exploration: derivative-free maximization of the verification
/// ratio over parameterized function families, and the classical truncated
/// power sweep that demonstrates sharpness of (p/(p-1))^p.
///
/// The optimizer is a plain Nelder-Mead simplex (reflection, expansion,
/// contraction, shrink) on box-normalized coordinates with deterministic
/// low-discrepancy multistart. Every candidate is hypothesis-certified
/// before its ratio is evaluated; uncertifiable candidates score -inf.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rng.hpp"
#include "verifier.hpp"

namespace hardycheck {

/// A parameterized function family with box bounds for the optimizer.
struct ParamFamily {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<std::pair<double, double>> box;
  std::vector<bool> log_scale;
  std::function<FunctionSpec(const std::vector<double>&)> make;
};

/// Built-in optimizer families, by name.
inline ParamFamily param_family(const std::string& name) {
  ParamFamily f;
  f.name = name;
  if (name == "trunc-power") {
    f.param_names = {"alpha", "T"};
    f.box = {{-0.9, -0.1}, {10.0, 1e6}};
    f.log_scale = {false, true};  // ratio depends on T through log T
    f.make = [](const std::vector<double>& th) {
      return FunctionSpec(Expr::truncate(Expr::power(Expr::variable(), th[0]), 1.0, th[1]),
                          Interval::positive_axis(), {}, "trunc-power");
    };
  } else if (name == "trunc-constant") {
    f.param_names = {"c", "lo", "width"};
    f.box = {{0.1, 10.0}, {0.1, 10.0}, {0.1, 100.0}};
    f.log_scale = {true, true, true};
    f.make = [](const std::vector<double>& th) {
      return FunctionSpec(Expr::truncate(Expr::constant(th[0]), th[1], th[1] + th[2]),
                          Interval::positive_axis(), {}, "trunc-constant");
    };
  } else if (name == "constant") {
    f.param_names = {"c"};
    f.box = {{0.1, 10.0}};
    f.log_scale = {true};
    f.make = [](const std::vector<double>& th) {
      return FunctionSpec(Expr::constant(th[0]), Interval::positive_axis(), {}, "constant");
    };
  } else if (name == "power") {
    f.param_names = {"beta"};
    f.box = {{0.1, 2.0}};
    f.log_scale = {false};
    f.make = [](const std::vector<double>& th) {
      return FunctionSpec(Expr::power(Expr::variable(), th[0]), Interval::positive_axis(), {},
                          "power");
    };
  } else if (name == "exp-saturate") {
    f.param_names = {"lambda"};
    f.box = {{0.05, 20.0}};
    f.log_scale = {true};
    f.make = [](const std::vector<double>& th) {
      Expr decay = Expr::exponential(Expr::product({Expr::constant(-th[0]), Expr::variable()}));
      return FunctionSpec(Expr::sum({Expr::constant(1.0), Expr::negate(decay)}),
                          Interval::positive_axis(), {}, "exp-saturate");
    };
  } else {
    throw ConstraintError("unknown optimizer family '" + name + "'");
  }
  return f;
}

struct OptimizerOptions {
  int multistart = 4;
  long max_evals_per_start = 120;
  double simplex_tol = 1e-3;  // simplex diameter in normalized coordinates
  double ratio_tol = 1e-7;    // score spread
  int grid_size = 512;
};

struct OptimizationTrace {
  std::vector<std::vector<double>> iterate_params;
  std::vector<double> iterate_ratios;  // -inf marks uncertifiable candidates
  std::vector<double> best_params;
  double best_ratio = -kInf;
  long evaluations = 0;
  std::string termination;
  std::vector<std::string> warnings;
};

namespace explorer_detail {

inline double from_unit(double z, double lo, double hi, bool log_scale) {
  z = std::clamp(z, 0.0, 1.0);
  if (log_scale) return lo * std::pow(hi / lo, z);
  return lo + (hi - lo) * z;
}

}  // namespace explorer_detail

/// Maximize the verification ratio of a <=-direction entry over one family
/// bound to slot f; remaining slots come from fixed_bindings. Deterministic
/// in the seed.
inline OptimizationTrace maximize_ratio(const std::string& entry_id, const Params& params,
                                        const ParamFamily& family,
                                        const std::map<Slot, FunctionSpec>& fixed_bindings,
                                        const OptimizerOptions& opts, std::uint64_t seed,
                                        const QuadOptions& quad = {}) {
  const InequalityEntry& entry = entry_by_id(entry_id);
  if (entry.direction != Direction::leq)
    throw ConstraintError("maximize_ratio requires a <=-direction entry");
  entry.check_params(params);
  const std::size_t dim = family.box.size();
  if (dim == 0) throw ConstraintError("family parameter box is empty");

  OptimizationTrace trace;

  auto theta_of = [&](const std::vector<double>& z) {
    std::vector<double> th(dim);
    for (std::size_t j = 0; j < dim; ++j)
      th[j] = explorer_detail::from_unit(z[j], family.box[j].first, family.box[j].second,
                                         family.log_scale[j]);
    return th;
  };

  auto objective = [&](const std::vector<double>& z) -> double {
    std::vector<double> th = theta_of(z);
    double score = -kInf;
    try {
      std::map<Slot, FunctionSpec> bindings = fixed_bindings;
      bindings[Slot::f] = family.make(th);
      VerificationTask task = instantiate_task(entry_id, params, bindings, quad, opts.grid_size);
      Verdict v = verify(task);
      if (std::isfinite(v.ratio)) {
        score = v.ratio;
        double widened =
            1.0 + (v.lhs.err_bound + std::abs(v.constant) * v.rhs_integral.err_bound) /
                      std::max(v.rhs, 1e-300);
        if (v.ratio > widened) {
          trace.warnings.push_back(
              "RATIO ABOVE 1 BEYOND ERROR BOUNDS at " + family.name + "(" +
              [&] {
                std::string s;
                for (double t : th) s += (s.empty() ? "" : ", ") + format_double(t);
                return s;
              }() +
              "): ratio=" + format_double(v.ratio) + "; theorem violation or engine bug");
        }
      }
    } catch (const std::exception&) {
      score = -kInf;  // uncertifiable or unconstructible candidate
    }
    ++trace.evaluations;
    trace.iterate_params.push_back(std::move(th));
    trace.iterate_ratios.push_back(score);
    if (score > trace.best_ratio) {
      trace.best_ratio = score;
      trace.best_params = trace.iterate_params.back();
    }
    return score;
  };

  KroneckerSequence starts(seed, dim);
  std::string termination = "max-evals";
  for (int s = 0; s < opts.multistart; ++s) {
    long start_evals = trace.evaluations;
    std::vector<std::vector<double>> simplex;
    std::vector<double> scores;
    std::vector<double> z0 = starts.point(static_cast<std::size_t>(s));
    simplex.push_back(z0);
    scores.push_back(objective(z0));
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<double> z = z0;
      z[j] = z[j] + 0.12 <= 1.0 ? z[j] + 0.12 : z[j] - 0.12;
      simplex.push_back(z);
      scores.push_back(objective(z));
    }

    auto order = [&] {
      std::vector<std::size_t> idx(simplex.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
      std::vector<std::vector<double>> sx;
      std::vector<double> sc;
      for (std::size_t i : idx) {
        sx.push_back(simplex[i]);
        sc.push_back(scores[i]);
      }
      simplex = std::move(sx);
      scores = std::move(sc);
    };

    while (trace.evaluations - start_evals < opts.max_evals_per_start) {
      order();
      double diameter = 0.0;
      for (std::size_t i = 1; i < simplex.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
          diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[0][j]));
      bool flat = std::isfinite(scores.front()) && std::isfinite(scores.back()) &&
                  scores.front() - scores.back() < opts.ratio_tol;
      if (diameter < opts.simplex_tol || flat) {
        termination = "simplex-converged";
        break;
      }

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
      for (double& c : centroid) c /= static_cast<double>(dim);

      auto blend = [&](double t) {
        std::vector<double> z(dim);
        for (std::size_t j = 0; j < dim; ++j)
          z[j] = std::clamp(centroid[j] + t * (centroid[j] - simplex.back()[j]), 0.0, 1.0);
        return z;
      };

      std::vector<double> zr = blend(1.0);
      double fr = objective(zr);
      if (fr > scores.front()) {
        std::vector<double> ze = blend(2.0);
        double fe = objective(ze);
        if (fe > fr) {
          simplex.back() = ze;
          scores.back() = fe;
        } else {
          simplex.back() = zr;
          scores.back() = fr;
        }
      } else if (fr > scores[scores.size() - 2]) {
        simplex.back() = zr;
        scores.back() = fr;
      } else {
        std::vector<double> zc = blend(-0.5);
        double fc = objective(zc);
        if (fc > scores.back()) {
          simplex.back() = zc;
          scores.back() = fc;
        } else {
          for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (std::size_t j = 0; j < dim; ++j)
              simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            scores[i] = objective(simplex[i]);
          }
        }
      }
    }
    termination = trace.evaluations - start_evals >= opts.max_evals_per_start ? "max-evals"
                                                                              : termination;
  }

  if (!std::isfinite(trace.best_ratio))
    throw SampleError("maximize_ratio: all starts uncertifiable");
  trace.termination = termination;
  return trace;
}

// ---------------------------------------------------------------------------
// Truncated-power sharpness sweep
// ---------------------------------------------------------------------------

struct SweepPoint {
  double T = 0.0;
  double ratio = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double oracle_ratio = std::numeric_limits<double>::quiet_NaN();  // p = 2 only
};

struct SweepResult {
  double p = 0.0;
  std::vector<SweepPoint> points;
  double fitted_asymptote_c = 0.0;  // model ratio(T) = 1 - c / ln T
  bool oracle_checked = false;
  double max_oracle_rel_err = 0.0;
  std::vector<std::string> warnings;
};

/// The extremal family member f_T = trunc(x^(-1/p), 1, T).
inline FunctionSpec extremal_family_member(double p, double T) {
  return FunctionSpec(Expr::truncate(Expr::power(Expr::variable(), -1.0 / p), 1.0, T),
                      Interval::positive_axis(), {}, "extremal trunc(x^(-1/p),1,T)");
}

/// Closed forms for p = 2, implemented independently of the quadrature path:
///   lhs(T) = 4 [ ln T - 4 (1 - T^-1/2) + (1 - 1/T) + (sqrt(T)-1)^2 / T ]
///   rhs(T) = 4 ln T
inline double sweep_oracle_lhs_p2(double T) {
  return 4.0 * (std::log(T) - 4.0 * (1.0 - 1.0 / std::sqrt(T)) + (1.0 - 1.0 / T) +
                (std::sqrt(T) - 1.0) * (std::sqrt(T) - 1.0) / T);
}

inline double sweep_oracle_rhs_p2(double T) { return 4.0 * std::log(T); }

/// Evaluate ratio(T) over the grid through the full verification path and,
/// for p = 2, compare against the closed-form oracle at run time.
inline SweepResult sharpness_sweep(double p, const std::vector<double>& t_grid,
                                   const QuadOptions& quad = {}) {
  if (!(p > 1.0)) throw ConstraintError("sharpness_sweep: needs p > 1");
  if (t_grid.empty()) throw ConstraintError("sharpness_sweep: empty T grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 1.0)) throw ConstraintError("sharpness_sweep: T grid must lie in (1, inf)");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw ConstraintError("sharpness_sweep: T grid must be strictly increasing");
  }

  SweepResult result;
  result.p = p;
  result.oracle_checked = p == 2.0;
  Params P;
  P.p = p;
  for (double T : t_grid) {
    VerificationTask task =
        instantiate_task("hardy", P, {{Slot::f, extremal_family_member(p, T)}}, quad);
    Verdict v = verify(task);
    SweepPoint pt;
    pt.T = T;
    pt.lhs = v.lhs.value;
    pt.rhs = v.rhs;
    pt.ratio = v.ratio;
    if (result.oracle_checked) {
      pt.oracle_ratio = sweep_oracle_lhs_p2(T) / sweep_oracle_rhs_p2(T);
      double rel = std::abs(pt.ratio - pt.oracle_ratio) / std::abs(pt.oracle_ratio);
      result.max_oracle_rel_err = std::max(result.max_oracle_rel_err, rel);
      if (rel > 1e-4)
        result.warnings.push_back("quadrature ratio deviates from the closed-form oracle at T=" +
                                  format_double(T) + " (rel " + format_double(rel) + ")");
    }
    if (!std::isfinite(pt.ratio))
      result.warnings.push_back("non-finite ratio at T=" + format_double(T) + ": " + v.diagnostic);
    result.points.push_back(pt);
  }

  double num = 0.0, den = 0.0;
  for (const auto& pt : result.points) {
    double w = 1.0 / std::log(pt.T);
    num += (1.0 - pt.ratio) * w;
    den += w * w;
  }
  result.fitted_asymptote_c = den > 0.0 ? num / den : 0.0;
  return result;
}

/// Log-spaced grid helper for sweep CLIs and tests.
inline std::vector<double> log_grid_points(double t_min, double t_max, int points) {
  if (points < 1) throw ConstraintError("log_grid_points: need at least one point");
  if (points == 1) return {t_max};
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(i) / (points - 1)));
  return g;
}

}  // namespace hardycheck

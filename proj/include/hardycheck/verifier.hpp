#pragma once

/// Evaluate both sides of a VerificationTask and issue a verdict.
///
/// Outcome rules, with E = lhs.err_bound + |constant| * rhs_integral.err_bound:
///   direction <= :  holds  iff lhs < rhs + E            (strict, after widening)
///                   fails  iff lhs > rhs + 10 E         (safety factor 10)
///                   else inconclusive
/// The >= rule is literally the <= rule with the two sides swapped, so
/// negating the comparison reproduces it exactly. Divergent sides give a
/// vacuous outcome; the diagnostic says whether the divergence trivializes
/// the direction or contradicts it (a discrepancy signal, never silently
/// reported as holds/fails).

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "rng.hpp"
#include "sampler.hpp"

namespace hardycheck {

enum class Outcome { holds, fails, inconclusive, vacuous };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    case Outcome::inconclusive: return "inconclusive";
    case Outcome::vacuous: return "vacuous";
  }
  return "?";
}

struct Verdict {
  IntegralEstimate lhs;
  IntegralEstimate rhs_integral;
  double constant = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double slack = std::numeric_limits<double>::quiet_NaN();
  Outcome outcome = Outcome::inconclusive;
  std::string diagnostic;
};

/// The <=-direction rule on widened error bars; the >= rule is the same
/// call with the operand roles swapped.
inline Outcome compare_leq(double lhs, double rhs, double err_sum) {
  if (lhs < rhs + err_sum) return Outcome::holds;
  if (lhs > rhs + 10.0 * err_sum) return Outcome::fails;
  return Outcome::inconclusive;
}

inline Outcome compare_geq(double lhs, double rhs, double err_sum) {
  return compare_leq(rhs, lhs, err_sum);
}

inline Verdict verify(const VerificationTask& task) {
  Verdict v;
  v.constant = task.entry->constant(task.params);
  if (!std::isfinite(v.constant)) {
    v.outcome = Outcome::inconclusive;
    v.diagnostic = "constant is not finite at these parameters";
    return v;
  }

  const TailClassification* lt = task.tails_classified ? &task.lhs_tail : nullptr;
  const TailClassification* rt = task.tails_classified ? &task.rhs_tail : nullptr;
  v.lhs = integrate(task.lhs.fn, task.lhs.domain, task.opts, task.lhs.breakpoints, lt);
  v.rhs_integral = integrate(task.rhs.fn, task.rhs.domain, task.opts, task.rhs.breakpoints, rt);

  const Direction dir = task.entry->direction;
  const bool lhs_div = v.lhs.status == QuadStatus::divergent_suspected;
  const bool rhs_div = v.rhs_integral.status == QuadStatus::divergent_suspected;

  if (lhs_div || rhs_div) {
    v.outcome = Outcome::vacuous;
    if (lhs_div && rhs_div) {
      v.diagnostic = "both sides divergent-suspected";
    } else if ((dir == Direction::leq && rhs_div) || (dir == Direction::geq && lhs_div)) {
      v.diagnostic = std::string(lhs_div ? "lhs" : "rhs integral") +
                     " divergent-suspected: the inequality is trivially satisfied";
    } else {
      v.diagnostic = std::string(lhs_div ? "lhs" : "rhs integral") +
                     " divergent-suspected while the other side converges: the claimed "
                     "direction is violated in the limit (DISCREPANCY)";
    }
    return v;
  }
  if (v.lhs.status == QuadStatus::inconclusive ||
      v.rhs_integral.status == QuadStatus::inconclusive) {
    v.outcome = Outcome::inconclusive;
    v.diagnostic = v.lhs.status == QuadStatus::inconclusive
                       ? "lhs quadrature inconclusive: " + v.lhs.diagnostic
                       : "rhs quadrature inconclusive: " + v.rhs_integral.diagnostic;
    return v;
  }

  v.rhs = v.constant * v.rhs_integral.value;
  const double err_sum = v.lhs.err_bound + std::abs(v.constant) * v.rhs_integral.err_bound;
  v.outcome = dir == Direction::leq ? compare_leq(v.lhs.value, v.rhs, err_sum)
                                    : compare_geq(v.lhs.value, v.rhs, err_sum);
  if (v.outcome == Outcome::inconclusive)
    v.diagnostic = "violation within widened error bounds; not claimed as fails";
  v.slack = dir == Direction::leq ? v.rhs - v.lhs.value : v.lhs.value - v.rhs;
  if (v.rhs > 0.0) v.ratio = v.lhs.value / v.rhs;
  if (task.vacuous_both_divergent && v.outcome != Outcome::vacuous) {
    v.diagnostic += (v.diagnostic.empty() ? "" : "; ") + task.construction_note;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Batch verification
// ---------------------------------------------------------------------------

struct TaskRequest {
  std::string label;
  std::string entry_id;
  Params params;
  std::map<Slot, FunctionSpec> bindings;
  QuadOptions opts;
  bool statement_form = false;
  int grid_size = 512;
};

struct SuiteItemResult {
  std::string label;
  std::string entry_id;
  Params params;
  std::map<std::string, std::string> bindings;  // slot name -> rendered expression
  std::vector<std::pair<std::string, Certificate>> certificates;  // slot name, certificate
  std::optional<Verdict> verdict;
  std::string construction_error;
};

struct SuiteReport {
  std::vector<SuiteItemResult> items;
  std::map<std::string, long> counts;
  std::string status;  // "ok" or "inconclusive-empty"

  long count(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Run every request, recording construction failures instead of throwing.
/// The aggregate is a pure fold over per-item results, so it is independent
/// of evaluation order.
inline SuiteReport batch_verify(const std::vector<TaskRequest>& requests) {
  SuiteReport report;
  for (const auto& rq : requests) {
    SuiteItemResult item;
    item.label = rq.label;
    item.entry_id = rq.entry_id;
    item.params = rq.params;
    for (const auto& [slot, spec] : rq.bindings) item.bindings[to_string(slot)] = spec.expr.str();
    try {
      VerificationTask task = instantiate_task(rq.entry_id, rq.params, rq.bindings, rq.opts,
                                               rq.grid_size, rq.statement_form);
      for (const auto& [slot, spec] : task.context.slots)
        for (const auto& cert : spec.certificates)
          item.certificates.emplace_back(to_string(slot), cert);
      item.verdict = verify(task);
      report.counts[to_string(item.verdict->outcome)]++;
    } catch (const std::exception& e) {
      item.construction_error = e.what();
      report.counts["construction-error"]++;
    }
    report.items.push_back(std::move(item));
  }
  report.status = report.items.empty() ? "inconclusive-empty" : "ok";
  return report;
}

// ---------------------------------------------------------------------------
// Randomized falsification search
// ---------------------------------------------------------------------------

struct FalsifyTrialRecord {
  long index = 0;
  std::string outcome;
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

struct FalsifyWitness {
  long trial = 0;
  Params params;
  std::map<std::string, std::string> bindings;
  Verdict verdict;
};

struct FalsifyResult {
  std::string entry_id;
  std::uint64_t seed = 0;
  long trials = 0;
  long completed = 0;
  long rejected = 0;
  std::map<std::string, long> outcome_counts;
  double worst_ratio = std::numeric_limits<double>::quiet_NaN();
  std::optional<FalsifyWitness> worst;
  std::vector<FalsifyTrialRecord> log;
  bool statement_form = false;
};

namespace falsify_detail {

struct EntrySampling {
  std::map<Slot, Family> families;
  std::map<Slot, SampleOptions> options;
  std::function<Params(Rng&)> params;
};

/// Per-entry default slot families and parameter ranges. Ranges are chosen
/// so that most draws give convergent integrals (truncated or saturating f,
/// head/tail exponents inside the integrable window); draws outside still
/// verify, they just come back vacuous.
inline EntrySampling default_sampling(const InequalityEntry& e) {
  EntrySampling s;
  SampleOptions bounded;
  bounded.bounded_only = true;
  bounded.vanish_at_zero = true;
  const std::string& id = e.id;

  if (id == "hardy") {
    s.families[Slot::f] = Family::trunc_power;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(1.3, 3.5);
      return P;
    };
  } else if (id == "hardy-finite") {
    s.families[Slot::f] = Family::trunc_constant;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(1.3, 3.5);
      double lo = r.log_uniform(0.2, 2.0);
      P.interval = Interval(lo, lo * (1.5 + r.uniform(0.0, 18.5)));
      return P;
    };
  } else if (id == "ws-weighted") {
    s.families[Slot::f] = Family::nonneg_nondecreasing;
    s.options[Slot::f] = bounded;
    s.families[Slot::g] = Family::positive_ratio_nonincreasing;
    // gamma in [1.5, 2] with p above 1.2/(gamma-1) keeps both integrands
    // convergent for bounded nondecreasing f; p >= 2.45 covers every gamma.
    s.options[Slot::g].power_min = 1.5;
    s.options[Slot::g].power_max = 2.0;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(2.45, 3.8);
      P.a = r.uniform(0.1, 0.9);
      return P;
    };
  } else if (id == "thm31") {
    s.families[Slot::f] = Family::trunc_power;
    s.families[Slot::g] = Family::positive_ratio_nonincreasing;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(1.2, 2.5);
      P.a = r.uniform(0.1, 0.9);
      double bound = (P.p - P.a * (P.p - 1.0)) / 2.0;
      P.q = std::max(bound + r.uniform(0.25, 2.5), 0.75 + r.uniform(0.0, 1.5));
      return P;
    };
  } else if (id == "thm32" || id == "thm32-statement") {
    s.families[Slot::f] = Family::trunc_constant;
    s.families[Slot::g] = Family::positive_ratio_nonincreasing;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(0.15, 0.85);
      P.a = r.uniform(0.2, 3.0);
      double bound = (P.p + P.a * (P.p - 1.0)) / 2.0;
      P.q = std::max(bound + 0.05, 0.6) + r.uniform(0.0, 1.5);
      return P;
    };
  } else if (id == "thm34") {
    s.families[Slot::f] = Family::nonneg_nondecreasing;
    s.families[Slot::g] = Family::nonneg_nondecreasing;
    s.options[Slot::f] = bounded;
    s.options[Slot::g] = bounded;
    s.families[Slot::phi] = Family::convex_submultiplicative_zero_at_zero;
    s.families[Slot::psi] = Family::convex_submultiplicative_zero_at_zero;
    // phi, psi powers capped at 2.5: with p in (2.3, s1+s2+1.7) both ends of
    // the LHS integral stay integrable and no power tower overflows.
    s.options[Slot::phi].power_max = 2.5;
    s.options[Slot::psi].power_max = 2.5;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(2.3, 3.6);
      return P;
    };
  } else if (id == "thm35" || id == "thm35-pow") {
    s.families[Slot::f] = Family::nonneg_nondecreasing;
    s.options[Slot::f] = bounded;
    s.families[Slot::g] = Family::positive_nonincreasing;
    if (id == "thm35") s.families[Slot::phi] = Family::nonneg_nondecreasing;
    s.params = [id](Rng& r) {
      Params P;
      if (id == "thm35-pow") P.p = r.uniform(1.0, 3.0);
      P.interval = Interval(0.0, r.log_uniform(1.0, 50.0));
      return P;
    };
  } else if (id == "thm36") {
    s.families[Slot::f] = Family::nonneg_nondecreasing;
    s.options[Slot::f] = bounded;
    s.families[Slot::phi] = Family::convex_submultiplicative_zero_at_zero;
    s.params = [](Rng& r) {
      Params P;
      P.p = r.uniform(2.3, 2.9);
      P.q = static_cast<double>(r.uniform_int(0, 3));
      return P;
    };
  } else if (id == "thm37" || id == "thm38") {
    s.families[Slot::f] = Family::positive_nondecreasing;
    s.families[Slot::g] = Family::positive_nondecreasing;
    s.families[Slot::phi] =
        id == "thm37" ? Family::nonneg_nondecreasing : Family::positive_nonincreasing;
    s.params = [](Rng& r) {
      Params P;
      double lo = r.log_uniform(0.3, 3.0);
      P.interval = Interval(lo, lo + r.uniform(0.5, 20.0));
      return P;
    };
  } else {
    throw ConstraintError("no sampling defaults for entry '" + id + "'");
  }
  return s;
}

}  // namespace falsify_detail

/// Randomized search for hypothesis-certified counterexamples: draws
/// parameters and slot functions, verifies, and tracks the worst ratio
/// (max for <=, min for >=). Deterministic in the seed; the worst trial's
/// bindings are serialized so it can be re-run.
inline FalsifyResult falsify(const std::string& entry_id,
                             const std::map<Slot, Family>& slot_families, long trials,
                             std::uint64_t seed, const QuadOptions& opts = {},
                             bool statement_form = false, int grid_size = 512) {
  if (trials <= 0) throw ConstraintError("falsify: trials must be > 0");
  const InequalityEntry& entry = entry_by_id(entry_id);
  falsify_detail::EntrySampling sampling = falsify_detail::default_sampling(entry);
  for (const auto& [slot, fam] : slot_families) sampling.families[slot] = fam;

  FalsifyResult result;
  result.entry_id = entry_id;
  result.seed = seed;
  result.trials = trials;
  result.statement_form = statement_form;

  const bool want_max = entry.direction == Direction::leq;
  constexpr int kMaxAttemptsPerTrial = 40;

  for (long t = 0; t < trials; ++t) {
    std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    bool done = false;
    for (int attempt = 0; attempt < kMaxAttemptsPerTrial && !done; ++attempt) {
      std::uint64_t attempt_seed = derive_seed(trial_seed, 1000 + attempt);
      Rng prng(attempt_seed);
      Params params = sampling.params(prng);
      std::map<Slot, FunctionSpec> bindings;
      try {
        int slot_idx = 0;
        for (const auto& req : entry.slots) {
          Family fam = sampling.families.at(req.slot);
          SampleOptions so;
          auto oit = sampling.options.find(req.slot);
          if (oit != sampling.options.end()) so = oit->second;
          so.grid_size = grid_size;
          bindings[req.slot] =
              sample_admissible(fam, derive_seed(attempt_seed, 7 + slot_idx), so);
          ++slot_idx;
        }
        VerificationTask task =
            instantiate_task(entry_id, params, bindings, opts, grid_size, statement_form);
        Verdict verdict = verify(task);

        FalsifyTrialRecord rec;
        rec.index = t;
        rec.outcome = to_string(verdict.outcome);
        rec.ratio = verdict.ratio;
        result.log.push_back(rec);
        result.outcome_counts[rec.outcome]++;
        ++result.completed;

        const bool has_ratio = std::isfinite(verdict.ratio);
        const bool better =
            has_ratio && (!std::isfinite(result.worst_ratio) ||
                          (want_max ? verdict.ratio > result.worst_ratio
                                    : verdict.ratio < result.worst_ratio));
        if (better) {
          result.worst_ratio = verdict.ratio;
          FalsifyWitness w;
          w.trial = t;
          w.params = params;
          for (const auto& [slot, spec] : bindings) w.bindings[to_string(slot)] = spec.expr.str();
          w.verdict = verdict;
          result.worst = std::move(w);
        }
        done = true;
      } catch (const BindingError&) {
        ++result.rejected;
      } catch (const SampleError&) {
        ++result.rejected;
      } catch (const ConstraintError&) {
        ++result.rejected;
      }
    }
  }
  if (result.completed == 0)
    throw SampleError("falsify: zero admissible samples after bounded rejection");
  return result;
}

}  // namespace hardycheck

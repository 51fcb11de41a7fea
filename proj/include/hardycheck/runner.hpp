#pragma once

/// Executes experiment runs (shared by the CLI subcommands and `suite`).
/// Exit-code contract: 0 when every verdict holds (or a sweep/optimize run
/// completed), 1 when at least one verdict fails, 2 when at least one is
/// inconclusive or vacuous and none fails, 3 on usage/config errors.

#include <iostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "explorer.hpp"
#include "report.hpp"
#include "sampler.hpp"
#include "verifier.hpp"

namespace hardycheck {

struct RunResult {
  int severity = 0;  // 0 holds, 1 fails, 2 inconclusive/vacuous, 3 error
  std::vector<std::string> lines;
};

namespace runner_detail {

inline int severity_of(Outcome o) {
  switch (o) {
    case Outcome::holds: return 0;
    case Outcome::fails: return 1;
    case Outcome::inconclusive:
    case Outcome::vacuous: return 2;
  }
  return 2;
}

inline std::string infer_format(const RunConfig& run) {
  if (run.format != "auto") return run.format;
  auto ends_with = [&](const char* suffix) {
    std::string s = run.out;
    std::string suf = suffix;
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(".csv")) return "csv";
  if (ends_with(".svg")) return "svg";
  return "json";
}

inline std::map<Slot, FunctionSpec> parse_slots(const std::map<std::string, std::string>& slots) {
  std::map<Slot, FunctionSpec> out;
  for (const auto& [name, text] : slots) {
    auto slot = slot_from_string(name);
    if (!slot) throw ConfigError("unknown slot '" + name + "'");
    out.emplace(*slot, FunctionSpec(parse(text), Interval::positive_axis(), {}, text));
  }
  return out;
}

inline std::string verdict_line(const std::string& entry, const Verdict& v) {
  std::string s = entry + ": lhs ~= " + format_double(v.lhs.value);
  if (std::isfinite(v.lhs.err_bound)) s += " +- " + format_double(v.lhs.err_bound);
  s += ", rhs = " + (std::isfinite(v.rhs) ? format_double(v.rhs) : std::string("n/a")) +
       " (constant " + format_double(v.constant) + " x " +
       format_double(v.rhs_integral.value) + ")";
  if (std::isfinite(v.ratio)) s += ", ratio = " + format_double(v.ratio);
  std::string outcome = to_string(v.outcome);
  for (char& c : outcome) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  s += ", " + outcome;
  if (!v.diagnostic.empty()) s += "  [" + v.diagnostic + "]";
  return s;
}

}  // namespace runner_detail

inline RunResult execute_run(const RunConfig& run, const QuadOptions& default_quad) {
  namespace rd = runner_detail;
  RunResult res;
  const QuadOptions quad = run.quad ? *run.quad : default_quad;
  const std::string format = rd::infer_format(run);

  if (run.kind == "verify") {
    TaskRequest rq;
    rq.label = run.entry;
    rq.entry_id = run.entry;
    rq.params = run.params;
    rq.bindings = rd::parse_slots(run.slots);
    rq.opts = quad;
    rq.statement_form = run.statement_form;
    rq.grid_size = run.grid;
    SuiteReport rep = batch_verify({rq});
    const SuiteItemResult& item = rep.items.front();
    if (!item.verdict) {
      res.severity = 3;
      res.lines.push_back("error: " + item.construction_error);
      return res;
    }
    res.severity = rd::severity_of(item.verdict->outcome);
    res.lines.push_back(rd::verdict_line(run.entry, *item.verdict));
    if (!run.out.empty()) {
      if (format == "json") {
        Json j = to_json(item, &entry_by_id(run.entry));
        j["schema_version"] = kReportSchemaVersion;
        j["kind"] = run.statement_form ? "verify-statement-form" : "verify";
        write_text_report(dump_json(j), run.out);
      } else if (format == "csv") {
        write_text_report(to_csv(rep), run.out);
      } else {
        throw ConfigError("format '" + format + "' is not available for verify reports");
      }
    }
    return res;
  }

  if (run.kind == "falsify") {
    std::map<Slot, Family> fams;
    for (const auto& [name, fam] : run.families)
      fams[*slot_from_string(name)] = *family_from_string(fam);
    FalsifyResult fr = falsify(run.entry, fams, run.trials, run.seed, quad, run.statement_form,
                               run.grid);
    std::string counts;
    for (const auto& [k, v] : fr.outcome_counts)
      counts += (counts.empty() ? "" : ", ") + k + ": " + std::to_string(v);
    res.lines.push_back("falsify " + run.entry + (run.statement_form ? " (statement form)" : "") +
                        ": " + std::to_string(fr.completed) + "/" + std::to_string(fr.trials) +
                        " trials, worst ratio " +
                        (std::isfinite(fr.worst_ratio) ? format_double(fr.worst_ratio) : "n/a") +
                        " {" + counts + "}");
    if (fr.worst) {
      std::string w = "  worst witness: trial " + std::to_string(fr.worst->trial);
      for (const auto& [slot, text] : fr.worst->bindings) w += ", " + slot + " = " + text;
      res.lines.push_back(w);
    }
    long fails = fr.outcome_counts.count("fails") ? fr.outcome_counts.at("fails") : 0;
    long incvac = (fr.outcome_counts.count("inconclusive") ? fr.outcome_counts.at("inconclusive") : 0) +
                  (fr.outcome_counts.count("vacuous") ? fr.outcome_counts.at("vacuous") : 0);
    res.severity = fails > 0 ? 1 : (incvac > 0 ? 2 : 0);
    if (!run.out.empty()) {
      if (format == "json")
        write_text_report(dump_json(to_json(fr)), run.out);
      else if (format == "csv")
        write_text_report(to_csv(fr), run.out);
      else
        throw ConfigError("format '" + format + "' is not available for falsify reports");
    }
    return res;
  }

  if (run.kind == "sharpness") {
    double p = std::isfinite(run.params.p) ? run.params.p : 2.0;
    SweepResult sr = sharpness_sweep(p, log_grid_points(run.t_min, run.t_max, run.points), quad);
    res.lines.push_back("sharpness p=" + format_double(p) + ": ratio(" +
                        format_double(sr.points.front().T) + ") = " +
                        format_double(sr.points.front().ratio) + " ... ratio(" +
                        format_double(sr.points.back().T) + ") = " +
                        format_double(sr.points.back().ratio) + ", fitted 1 - c/ln T with c = " +
                        format_double(sr.fitted_asymptote_c));
    for (const auto& w : sr.warnings) res.lines.push_back("  WARNING: " + w);
    res.severity = 0;
    if (!run.out.empty()) {
      if (format == "json")
        write_text_report(dump_json(to_json(sr)), run.out);
      else if (format == "csv")
        write_text_report(to_csv(sr), run.out);
      else
        write_text_report(to_svg(sr), run.out);
    }
    return res;
  }

  if (run.kind == "optimize") {
    ParamFamily fam = param_family(run.family);
    if (!run.box.empty()) {
      if (run.box.size() != fam.box.size())
        throw ConfigError("box override must have " + std::to_string(fam.box.size()) +
                          " [lo, hi] pairs for family " + fam.name);
      fam.box = run.box;
    }
    OptimizerOptions oo;
    oo.multistart = run.starts;
    oo.max_evals_per_start = run.opt_max_evals;
    oo.grid_size = run.grid;
    OptimizationTrace tr = maximize_ratio(run.entry, run.params, fam,
                                          rd::parse_slots(run.slots), oo, run.seed, quad);
    std::string best;
    for (std::size_t j = 0; j < tr.best_params.size(); ++j)
      best += (j ? ", " : "") + fam.param_names[j] + " = " + format_double(tr.best_params[j]);
    res.lines.push_back("optimize " + run.entry + " over " + fam.name + ": best ratio " +
                        format_double(tr.best_ratio) + " at (" + best + ") after " +
                        std::to_string(tr.evaluations) + " evaluations (" + tr.termination + ")");
    for (const auto& w : tr.warnings) res.lines.push_back("  WARNING: " + w);
    res.severity = 0;
    if (!run.out.empty()) {
      if (format == "json")
        write_text_report(dump_json(to_json(tr, run.entry, fam)), run.out);
      else if (format == "csv")
        write_text_report(to_csv(tr), run.out);
      else
        write_text_report(to_svg(tr), run.out);
    }
    return res;
  }

  if (run.kind == "lemmas") {
    if (run.which != "lemma-phi" && run.which != "lemma-G" && run.which != "both")
      throw ConfigError("lemmas 'which' must be lemma-phi, lemma-G or both");
    struct Row {
      std::string which;
      std::string expr;
      Certificate cert;
    };
    std::vector<Row> rows;
    long refuted = 0, inconclusive = 0;
    auto run_one = [&](RatioLemma lemma, std::uint64_t sample_seed) {
      Family family;
      if (lemma == RatioLemma::phi) {
        family = Family::convex_submultiplicative_zero_at_zero;
      } else {
        family = sample_seed % 2 == 0 ? Family::positive_ratio_nonincreasing
                                      : Family::positive_nonincreasing;
      }
      FunctionSpec spec = sample_admissible(family, derive_seed(run.seed, sample_seed));
      Row row;
      row.which = to_string(lemma);
      row.expr = spec.expr.str();
      try {
        row.cert = verify_ratio_lemma(lemma, spec, run.grid);
      } catch (const PremiseError& e) {
        row.cert.property = to_string(lemma);
        row.cert.status = CertStatus::inconclusive;
        row.cert.detail = e.what();
      }
      if (row.cert.status == CertStatus::refuted) ++refuted;
      if (row.cert.status == CertStatus::inconclusive) ++inconclusive;
      rows.push_back(std::move(row));
    };
    for (long i = 0; i < run.count; ++i) {
      if (run.which == "lemma-phi" || run.which == "both")
        run_one(RatioLemma::phi, static_cast<std::uint64_t>(2 * i));
      if (run.which == "lemma-G" || run.which == "both")
        run_one(RatioLemma::cumulative_g, static_cast<std::uint64_t>(2 * i + 1));
    }
    res.lines.push_back("lemmas (" + run.which + "): " + std::to_string(rows.size()) +
                        " sampled checks, " + std::to_string(refuted) + " refuted, " +
                        std::to_string(inconclusive) + " inconclusive");
    for (const auto& row : rows) {
      if (row.cert.status == CertStatus::refuted)
        res.lines.push_back("  REFUTED " + row.which + " on " + row.expr + ": " +
                            row.cert.detail);
    }
    res.severity = refuted > 0 ? 1 : (inconclusive > 0 ? 2 : 0);
    if (!run.out.empty()) {
      if (format == "json") {
        Json arr = Json::array();
        for (const auto& row : rows) {
          Json j = to_json(row.cert);
          j["which"] = row.which;
          j["input"] = row.expr;
          arr.push_back(std::move(j));
        }
        Json doc{{"schema_version", kReportSchemaVersion},
                 {"kind", "lemmas"},
                 {"which", run.which},
                 {"seed", run.seed},
                 {"count", run.count},
                 {"grid", run.grid},
                 {"refuted", refuted},
                 {"inconclusive", inconclusive},
                 {"checks", arr}};
        write_text_report(dump_json(doc), run.out);
      } else if (format == "csv") {
        std::string csv = "which,input,status,detail\n";
        for (const auto& row : rows)
          csv += row.which + ",\"" + row.expr + "\"," + to_string(row.cert.status) + ",\"" +
                 row.cert.detail + "\"\n";
        write_text_report(csv, run.out);
      } else {
        throw ConfigError("format '" + format + "' is not available for lemma reports");
      }
    }
    return res;
  }

  throw ConfigError("unknown run kind '" + run.kind + "'");
}

/// Execute all runs in config order. Output ordering follows the config.
inline int execute(const ExperimentConfig& cfg, std::ostream& os) {
  bool any_fails = false, any_incvac = false;
  for (const auto& run : cfg.runs) {
    RunResult r = execute_run(run, cfg.default_quad);
    for (const auto& line : r.lines) os << line << "\n";
    if (r.severity == 3) return 3;
    if (r.severity == 1) any_fails = true;
    if (r.severity == 2) any_incvac = true;
  }
  if (cfg.runs.empty()) {
    os << "empty run list (inconclusive-empty)\n";
    return 2;
  }
  return any_fails ? 1 : (any_incvac ? 2 : 0);
}

}  // namespace hardycheck

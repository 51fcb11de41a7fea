#pragma once

/// Experiment configuration: a JSON document mirroring the runs the CLI can
/// perform. Parsing is strict: unknown keys are errors, not warnings, and
/// every slot expression is parsed up front.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "parser.hpp"
#include "quadrature.hpp"
#include "report.hpp"

namespace hardycheck {

struct RunConfig {
  std::string kind;  // verify | falsify | sharpness | optimize | lemmas
  std::string entry;
  Params params;
  std::map<std::string, std::string> slots;     // slot -> expression text
  std::map<std::string, std::string> families;  // slot -> family name (falsify)
  bool statement_form = false;
  long trials = 100;
  bool has_seed = false;
  std::uint64_t seed = 0;
  int grid = 512;
  // sharpness
  double t_min = 10.0;
  double t_max = 1e6;
  int points = 6;
  // optimize
  std::string family;
  std::vector<std::pair<double, double>> box;  // optional box override
  int starts = 4;
  long opt_max_evals = 120;
  // lemmas
  std::string which = "both";
  long count = 50;
  // output
  std::optional<QuadOptions> quad;
  std::string out;
  std::string format = "auto";
};

struct ExperimentConfig {
  QuadOptions default_quad;
  std::vector<RunConfig> runs;
};

namespace config_detail {

inline void check_keys(const Json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end())
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

inline double num_field(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return obj[key].get<double>();
}

inline QuadOptions parse_quad(const Json& q, const QuadOptions& base, const std::string& where) {
  check_keys(q, {"abs_tol", "rel_tol", "max_evals", "tail_split"}, where);
  QuadOptions o = base;
  o.abs_tol = num_field(q, "abs_tol", o.abs_tol);
  o.rel_tol = num_field(q, "rel_tol", o.rel_tol);
  if (q.contains("max_evals")) o.max_evals = q["max_evals"].get<long>();
  o.tail_split = num_field(q, "tail_split", o.tail_split);
  o.validate();
  return o;
}

inline Params parse_params(const Json& p, const std::string& where) {
  check_keys(p, {"p", "q", "a", "lo", "hi"}, where);
  Params out;
  out.p = num_field(p, "p", out.p);
  out.q = num_field(p, "q", out.q);
  out.a = num_field(p, "a", out.a);
  double lo = num_field(p, "lo", 0.0);
  double hi = p.contains("hi") && !p["hi"].is_null() ? num_field(p, "hi", kInf) : kInf;
  out.interval = Interval(lo, hi);
  return out;
}

inline const std::set<std::string>& allowed_run_keys(const std::string& kind) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"verify",
       {"kind", "entry", "params", "slots", "statement_form", "grid", "quad", "out", "format"}},
      {"falsify",
       {"kind", "entry", "trials", "seed", "families", "statement_form", "grid", "quad", "out",
        "format"}},
      {"sharpness", {"kind", "params", "t_min", "t_max", "points", "quad", "out", "format"}},
      {"optimize",
       {"kind", "entry", "params", "family", "slots", "seed", "starts", "max_evals", "box",
        "grid", "quad", "out", "format"}},
      {"lemmas", {"kind", "which", "count", "seed", "grid", "quad", "out", "format"}}};
  auto it = table.find(kind);
  if (it == table.end()) throw ConfigError("unknown run kind '" + kind + "'");
  return it->second;
}

}  // namespace config_detail

inline ExperimentConfig parse_config(const Json& doc) {
  namespace cd = config_detail;
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  cd::check_keys(doc, {"schema_version", "quad", "runs"}, "config");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kReportSchemaVersion)
    throw ConfigError("config schema_version must be " + std::to_string(kReportSchemaVersion));

  ExperimentConfig cfg;
  if (doc.contains("quad")) cfg.default_quad = cd::parse_quad(doc["quad"], QuadOptions{}, "quad");
  if (!doc.contains("runs") || !doc["runs"].is_array())
    throw ConfigError("config needs a 'runs' array");

  int idx = 0;
  for (const auto& r : doc["runs"]) {
    const std::string where = "run " + std::to_string(idx);
    if (!r.is_object() || !r.contains("kind"))
      throw ConfigError(where + " must be an object with a 'kind'");
    RunConfig run;
    run.kind = r["kind"].get<std::string>();
    cd::check_keys(r, cd::allowed_run_keys(run.kind), where + " (" + run.kind + ")");

    if (r.contains("entry")) run.entry = r["entry"].get<std::string>();
    if (r.contains("params")) run.params = cd::parse_params(r["params"], where + ".params");
    if (r.contains("slots")) {
      for (auto it = r["slots"].begin(); it != r["slots"].end(); ++it) {
        if (!slot_from_string(it.key()))
          throw ConfigError("unknown slot '" + it.key() + "' in " + where);
        std::string text = it.value().get<std::string>();
        try {
          parse(text);
        } catch (const ParseError& e) {
          throw ConfigError(where + ".slots." + it.key() + ": " + e.what());
        }
        run.slots[it.key()] = text;
      }
    }
    if (r.contains("families")) {
      for (auto it = r["families"].begin(); it != r["families"].end(); ++it) {
        if (!slot_from_string(it.key()))
          throw ConfigError("unknown slot '" + it.key() + "' in " + where);
        if (!family_from_string(it.value().get<std::string>()))
          throw ConfigError(where + ".families." + it.key() + ": unknown family '" +
                            it.value().get<std::string>() + "'");
        run.families[it.key()] = it.value().get<std::string>();
      }
    }
    if (r.contains("statement_form")) run.statement_form = r["statement_form"].get<bool>();
    if (r.contains("trials")) run.trials = r["trials"].get<long>();
    if (r.contains("seed")) {
      run.seed = r["seed"].get<std::uint64_t>();
      run.has_seed = true;
    }
    if (r.contains("grid")) run.grid = r["grid"].get<int>();
    run.t_min = cd::num_field(r, "t_min", run.t_min);
    run.t_max = cd::num_field(r, "t_max", run.t_max);
    if (r.contains("points")) run.points = r["points"].get<int>();
    if (r.contains("family")) run.family = r["family"].get<std::string>();
    if (r.contains("box")) {
      for (const auto& pair : r["box"]) {
        if (!pair.is_array() || pair.size() != 2)
          throw ConfigError(where + ".box entries must be [lo, hi] pairs");
        run.box.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
    }
    if (r.contains("starts")) run.starts = r["starts"].get<int>();
    if (r.contains("max_evals")) run.opt_max_evals = r["max_evals"].get<long>();
    if (r.contains("which")) run.which = r["which"].get<std::string>();
    if (r.contains("count")) run.count = r["count"].get<long>();
    if (r.contains("quad")) run.quad = cd::parse_quad(r["quad"], cfg.default_quad, where + ".quad");
    if (r.contains("out")) run.out = r["out"].get<std::string>();
    if (r.contains("format")) run.format = r["format"].get<std::string>();

    const std::set<std::string> seeded = {"falsify", "optimize", "lemmas"};
    if (seeded.count(run.kind) && !run.has_seed)
      throw ConfigError(where + " (" + run.kind + "): 'seed' is required");
    cfg.runs.push_back(std::move(run));
    ++idx;
  }
  return cfg;
}

inline Json dump_config(const ExperimentConfig& cfg) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["quad"] = Json{{"abs_tol", cfg.default_quad.abs_tol},
                     {"rel_tol", cfg.default_quad.rel_tol},
                     {"max_evals", cfg.default_quad.max_evals},
                     {"tail_split", cfg.default_quad.tail_split}};
  Json runs = Json::array();
  for (const auto& run : cfg.runs) {
    Json r;
    r["kind"] = run.kind;
    if (!run.entry.empty()) r["entry"] = run.entry;
    if (run.kind == "verify" || run.kind == "optimize" || run.kind == "sharpness") {
      Json p = Json::object();
      if (std::isfinite(run.params.p)) p["p"] = run.params.p;
      if (std::isfinite(run.params.q)) p["q"] = run.params.q;
      if (std::isfinite(run.params.a)) p["a"] = run.params.a;
      if (run.params.interval.lo != 0.0) p["lo"] = run.params.interval.lo;
      if (!run.params.interval.unbounded()) p["hi"] = run.params.interval.hi;
      if (!p.empty()) r["params"] = p;
    }
    if (!run.slots.empty()) {
      Json s = Json::object();
      for (const auto& [k, v] : run.slots) s[k] = v;
      r["slots"] = s;
    }
    if (!run.families.empty()) {
      Json s = Json::object();
      for (const auto& [k, v] : run.families) s[k] = v;
      r["families"] = s;
    }
    if (run.statement_form) r["statement_form"] = true;
    if (run.kind == "falsify") {
      r["trials"] = run.trials;
      r["seed"] = run.seed;
    }
    if (run.kind == "verify" || run.kind == "falsify" || run.kind == "optimize" ||
        run.kind == "lemmas")
      r["grid"] = run.grid;
    if (run.kind == "sharpness") {
      r["t_min"] = run.t_min;
      r["t_max"] = run.t_max;
      r["points"] = run.points;
    }
    if (run.kind == "optimize") {
      r["family"] = run.family;
      if (!run.box.empty()) {
        Json b = Json::array();
        for (auto [lo, hi] : run.box) b.push_back(Json::array({lo, hi}));
        r["box"] = b;
      }
      r["seed"] = run.seed;
      r["starts"] = run.starts;
      r["max_evals"] = run.opt_max_evals;
    }
    if (run.kind == "lemmas") {
      r["which"] = run.which;
      r["count"] = run.count;
      r["seed"] = run.seed;
    }
    if (run.quad) {
      r["quad"] = Json{{"abs_tol", run.quad->abs_tol},
                       {"rel_tol", run.quad->rel_tol},
                       {"max_evals", run.quad->max_evals},
                       {"tail_split", run.quad->tail_split}};
    }
    if (!run.out.empty()) r["out"] = run.out;
    if (run.format != "auto") r["format"] = run.format;
    runs.push_back(std::move(r));
  }
  doc["runs"] = runs;
  return doc;
}

}  // namespace hardycheck

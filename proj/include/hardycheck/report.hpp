#pragma once

/// Report serialization. JSON is the primary machine-readable format
/// (schema_version field, stable key order, non-finite numbers serialized
/// as null by the JSON library); CSV covers tabular outputs; SVG renders
/// sweep and trace line charts. Reports carry no timestamps or host state,
/// so a seeded re-run produces byte-identical files.

#include <fstream>
#include <string>

#include <json.hpp>

#include "explorer.hpp"
#include "hypotheses.hpp"
#include "verifier.hpp"

namespace hardycheck {

inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

inline Json to_json(const Params& p, const InequalityEntry* entry = nullptr) {
  Json j = Json::object();
  auto put = [&](const char* k, double v) {
    if (std::isfinite(v)) j[k] = v;
  };
  if (entry == nullptr || entry->uses_p) put("p", p.p);
  if (entry == nullptr || entry->uses_q) put("q", p.q);
  if (entry == nullptr || entry->uses_a) put("a", p.a);
  if (entry == nullptr || entry->uses_interval) {
    put("lo", p.interval.lo);
    j["hi"] = p.interval.unbounded() ? Json() : Json(p.interval.hi);
  }
  return j;
}

inline Json to_json(const IntegralEstimate& e) {
  return Json{{"value", e.value},
              {"err_bound", std::isfinite(e.err_bound) ? Json(e.err_bound) : Json()},
              {"status", to_string(e.status)},
              {"evals", e.evals},
              {"diagnostic", e.diagnostic}};
}

inline Json to_json(const Certificate& c) {
  Json j{{"property", c.property},
         {"status", to_string(c.status)},
         {"grid", c.grid},
         {"detail", c.detail}};
  if (c.witness) {
    Json w{{"x", c.witness->x}};
    if (c.witness->y) w["y"] = *c.witness->y;
    j["witness"] = w;
  } else {
    j["witness"] = Json();
  }
  return j;
}

inline Json to_json(const Verdict& v) {
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(); };
  return Json{{"lhs", v.lhs.value},
              {"lhs_err", std::isfinite(v.lhs.err_bound) ? Json(v.lhs.err_bound) : Json()},
              {"lhs_status", to_string(v.lhs.status)},
              {"rhs_integral", v.rhs_integral.value},
              {"rhs_integral_err",
               std::isfinite(v.rhs_integral.err_bound) ? Json(v.rhs_integral.err_bound) : Json()},
              {"rhs_integral_status", to_string(v.rhs_integral.status)},
              {"constant", num(v.constant)},
              {"rhs", num(v.rhs)},
              {"ratio", num(v.ratio)},
              {"slack", num(v.slack)},
              {"outcome", to_string(v.outcome)},
              {"diagnostic", v.diagnostic}};
}

inline Json certificates_json(const VerificationTask& task) {
  Json arr = Json::array();
  for (const auto& [slot, spec] : task.context.slots) {
    for (const auto& cert : spec.certificates) {
      Json j = to_json(cert);
      j["slot"] = to_string(slot);
      arr.push_back(std::move(j));
    }
  }
  return arr;
}

inline Json to_json(const SuiteItemResult& item, const InequalityEntry* entry) {
  Json j{{"label", item.label}, {"entry", item.entry_id}, {"params", to_json(item.params, entry)}};
  Json slots = Json::object();
  for (const auto& [k, v] : item.bindings) slots[k] = v;
  j["slots"] = slots;
  if (item.verdict) {
    j["verdict"] = to_json(*item.verdict);
    Json certs = Json::array();
    for (const auto& [slot, cert] : item.certificates) {
      Json c = to_json(cert);
      c["slot"] = slot;
      certs.push_back(std::move(c));
    }
    j["certificates"] = certs;
  } else {
    j["construction_error"] = item.construction_error;
  }
  return j;
}

inline Json to_json(const SuiteReport& report) {
  Json runs = Json::array();
  for (const auto& item : report.items) {
    const InequalityEntry* entry = nullptr;
    try {
      entry = &entry_by_id(item.entry_id);
    } catch (const ConstraintError&) {
    }
    runs.push_back(to_json(item, entry));
  }
  Json counts = Json::object();
  for (const auto& [k, v] : report.counts) counts[k] = v;
  return Json{{"schema_version", kReportSchemaVersion},
              {"kind", "suite"},
              {"status", report.status},
              {"counts", counts},
              {"results", runs}};
}

inline Json to_json(const FalsifyResult& r) {
  Json counts = Json::object();
  for (const auto& [k, v] : r.outcome_counts) counts[k] = v;
  Json j{{"schema_version", kReportSchemaVersion},
         {"kind", "falsify"},
         {"entry", r.entry_id},
         {"statement_form", r.statement_form},
         {"seed", r.seed},
         {"trials", r.trials},
         {"completed", r.completed},
         {"rejected", r.rejected},
         {"outcome_counts", counts},
         {"worst_ratio", std::isfinite(r.worst_ratio) ? Json(r.worst_ratio) : Json()}};
  if (r.worst) {
    const InequalityEntry* entry = nullptr;
    try {
      entry = &entry_by_id(r.entry_id);
    } catch (const ConstraintError&) {
    }
    Json slots = Json::object();
    for (const auto& [k, v] : r.worst->bindings) slots[k] = v;
    j["worst"] = Json{{"trial", r.worst->trial},
                      {"params", to_json(r.worst->params, entry)},
                      {"slots", slots},
                      {"verdict", to_json(r.worst->verdict)}};
  } else {
    j["worst"] = Json();
  }
  Json log = Json::array();
  for (const auto& rec : r.log)
    log.push_back(Json{{"trial", rec.index},
                       {"outcome", rec.outcome},
                       {"ratio", std::isfinite(rec.ratio) ? Json(rec.ratio) : Json()}});
  j["trials_log"] = log;
  return j;
}

inline Json to_json(const SweepResult& r) {
  Json pts = Json::array();
  for (const auto& pt : r.points) {
    Json j{{"T", pt.T}, {"ratio", pt.ratio}, {"lhs", pt.lhs}, {"rhs", pt.rhs}};
    if (r.oracle_checked) j["oracle_ratio"] = pt.oracle_ratio;
    pts.push_back(std::move(j));
  }
  Json j{{"schema_version", kReportSchemaVersion},
         {"kind", "sharpness-sweep"},
         {"p", r.p},
         {"points", pts},
         {"fitted_asymptote_c", r.fitted_asymptote_c},
         {"oracle_checked", r.oracle_checked},
         {"max_oracle_rel_err", r.max_oracle_rel_err},
         {"warnings", r.warnings}};
  return j;
}

inline Json to_json(const OptimizationTrace& t, const std::string& entry_id,
                    const ParamFamily& family) {
  Json iters = Json::array();
  for (std::size_t i = 0; i < t.iterate_params.size(); ++i) {
    Json th = Json::array();
    for (double v : t.iterate_params[i]) th.push_back(v);
    iters.push_back(Json{
        {"theta", th},
        {"ratio", std::isfinite(t.iterate_ratios[i]) ? Json(t.iterate_ratios[i]) : Json()}});
  }
  Json best = Json::array();
  for (double v : t.best_params) best.push_back(v);
  return Json{{"schema_version", kReportSchemaVersion},
              {"kind", "optimize-trace"},
              {"entry", entry_id},
              {"family", family.name},
              {"param_names", family.param_names},
              {"best_params", best},
              {"best_ratio", t.best_ratio},
              {"evaluations", t.evaluations},
              {"termination", t.termination},
              {"warnings", t.warnings},
              {"iterates", iters}};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string to_csv(const SweepResult& r) {
  std::string out = "T,ratio\n";
  for (const auto& pt : r.points) out += format_double(pt.T) + "," + format_double(pt.ratio) + "\n";
  return out;
}

inline std::string to_csv(const SuiteReport& r) {
  std::string out = "label,entry,outcome,lhs,rhs,ratio,error\n";
  for (const auto& item : r.items) {
    out += item.label + "," + item.entry_id + ",";
    if (item.verdict) {
      out += std::string(to_string(item.verdict->outcome)) + "," +
             format_double(item.verdict->lhs.value) + "," + format_double(item.verdict->rhs) +
             "," +
             (std::isfinite(item.verdict->ratio) ? format_double(item.verdict->ratio) : "") +
             ",";
    } else {
      out += "construction-error,,,,\"" + item.construction_error + "\"";
    }
    out += "\n";
  }
  return out;
}

inline std::string to_csv(const FalsifyResult& r) {
  std::string out = "trial,outcome,ratio\n";
  for (const auto& rec : r.log)
    out += std::to_string(rec.index) + "," + rec.outcome + "," +
           (std::isfinite(rec.ratio) ? format_double(rec.ratio) : "") + "\n";
  return out;
}

inline std::string to_csv(const OptimizationTrace& t) {
  std::string out = "evaluation,ratio,best_so_far\n";
  double best = -kInf;
  for (std::size_t i = 0; i < t.iterate_ratios.size(); ++i) {
    best = std::max(best, t.iterate_ratios[i]);
    out += std::to_string(i) + "," +
           (std::isfinite(t.iterate_ratios[i]) ? format_double(t.iterate_ratios[i]) : "") + "," +
           (std::isfinite(best) ? format_double(best) : "") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG line charts (sweeps and traces)
// ---------------------------------------------------------------------------

namespace report_detail {

inline std::string svg_line_chart(const std::vector<double>& xs, const std::vector<double>& ys,
                                  const std::string& title, const std::string& xlabel,
                                  const std::string& ylabel) {
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  if (!(xmax > xmin)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
       "viewBox=\"0 0 640 480\">\n";
  s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + title + "</text>\n";
  s += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(H - mb) + "\" x2=\"" +
       format_double(W - mr) + "\" y2=\"" + format_double(H - mb) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
       format_double(ml) + "\" y2=\"" + format_double(H - mb) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    s += "<text x=\"" + format_double(X(fx)) + "\" y=\"" + format_double(H - mb + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + format_double(fx) + "</text>\n";
    s += "<text x=\"" + format_double(ml - 8) + "\" y=\"" + format_double(Y(fy) + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + format_double(fy) + "</text>\n";
  }
  s += "<text x=\"320\" y=\"470\" text-anchor=\"middle\" font-size=\"13\">" + xlabel +
       "</text>\n";
  s += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-size=\"13\" "
       "transform=\"rotate(-90 16 240)\">" +
       ylabel + "</text>\n";
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    s += format_double(X(xs[i])) + "," + format_double(Y(ys[i])) + " ";
  }
  s += "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    s += "<circle cx=\"" + format_double(X(xs[i])) + "\" cy=\"" + format_double(Y(ys[i])) +
         "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace report_detail

inline std::string to_svg(const SweepResult& r) {
  std::vector<double> xs, ys;
  for (const auto& pt : r.points) {
    xs.push_back(std::log10(pt.T));
    ys.push_back(pt.ratio);
  }
  return report_detail::svg_line_chart(xs, ys, "sharpness sweep, p = " + format_double(r.p),
                                       "log10 T", "ratio");
}

inline std::string to_svg(const OptimizationTrace& t) {
  std::vector<double> xs, ys;
  double best = -kInf;
  for (std::size_t i = 0; i < t.iterate_ratios.size(); ++i) {
    best = std::max(best, t.iterate_ratios[i]);
    if (!std::isfinite(best)) continue;
    xs.push_back(static_cast<double>(i));
    ys.push_back(best);
  }
  return report_detail::svg_line_chart(xs, ys, "optimizer trace", "evaluation",
                                       "best ratio so far");
}

/// Write `content` to path (or stdout when path is "-"). Throws ConfigError
/// on an unwritable path.
inline void write_text_report(const std::string& content, const std::string& path) {
  if (path == "-") {
    fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path '" + path + "'");
  out << content;
  if (!out.good()) throw ConfigError("failed writing output path '" + path + "'");
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hardycheck

// hardycheck: verify, stress-test and explore the sharpness of a family of
// Hardy-type integral inequalities from the command line.
//
// Exit codes: 0 all verdicts hold (or sweep/optimize completed),
//             1 at least one verdict fails,
//             2 at least one inconclusive/vacuous verdict and none fails,
//             3 usage or configuration error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hardycheck/runner.hpp"

namespace {

using namespace hardycheck;

struct CommonFlags {
  QuadOptions quad;
  std::string out;
  std::string format = "auto";
  std::string dump_config_path;
  int grid = 512;
};

void add_quad_flags(CLI::App* sub, CommonFlags& cf) {
  sub->add_option("--abs-tol", cf.quad.abs_tol, "absolute quadrature tolerance")
      ->envname("HARDYCHECK_ABS_TOL")
      ->capture_default_str();
  sub->add_option("--rel-tol", cf.quad.rel_tol, "relative quadrature tolerance")
      ->envname("HARDYCHECK_REL_TOL")
      ->capture_default_str();
  sub->add_option("--quad-max-evals", cf.quad.max_evals,
                  "integrand evaluation budget per integral")
      ->capture_default_str();
  sub->add_option("--tail-split", cf.quad.tail_split,
                  "bounded/tail split point for integrals over (lo, inf)")
      ->capture_default_str();
}

void add_output_flags(CLI::App* sub, CommonFlags& cf) {
  sub->add_option("--out", cf.out, "write a machine-readable report to this path");
  sub->add_option("--format", cf.format, "report format: json, csv, svg (sweeps/traces), auto")
      ->check(CLI::IsMember({"auto", "json", "csv", "svg"}));
  sub->add_option("--dump-config", cf.dump_config_path,
                  "also write this invocation as a suite config file");
}

int run_and_dump(const RunConfig& run, const CommonFlags& cf) {
  ExperimentConfig cfg;
  cfg.default_quad = cf.quad;
  cfg.runs.push_back(run);
  if (!cf.dump_config_path.empty())
    write_text_report(dump_json(dump_config(cfg)), cf.dump_config_path);
  return execute(cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hardycheck;
  CLI::App app{
      "hardycheck: numerical verification, falsification search and sharpness exploration "
      "for a catalog of Hardy-type integral inequalities"};
  app.require_subcommand(1);

  // ------------------------------------------------------------------ list
  CLI::App* list_cmd = app.add_subcommand("list", "list the inequality catalog");

  // ---------------------------------------------------------------- verify
  CLI::App* verify_cmd = app.add_subcommand("verify", "verify one inequality instance");
  CommonFlags vf;
  std::string v_entry;
  double v_p = 0, v_q = 0, v_a = 0, v_lo = 0, v_hi = 0;
  std::map<std::string, std::string> v_slots;
  bool v_statement = false;
  verify_cmd->add_option("--ineq", v_entry, "inequality id (see `list`)")->required();
  verify_cmd->add_option("--p", v_p, "exponent p");
  verify_cmd->add_option("--q", v_q, "exponent q");
  verify_cmd->add_option("--a", v_a, "exponent a");
  verify_cmd->add_option("--lo", v_lo, "interval lower endpoint");
  verify_cmd->add_option("--hi", v_hi, "interval upper endpoint");
  verify_cmd->add_option("--f", v_slots["f"], "expression for slot f");
  verify_cmd->add_option("--g", v_slots["g"], "expression for slot g");
  verify_cmd->add_option("--phi", v_slots["phi"], "expression for slot phi");
  verify_cmd->add_option("--psi", v_slots["psi"], "expression for slot psi");
  verify_cmd->add_flag("--statement-form", v_statement,
                       "probe the stated form of thm34 (no phi(x)psi(x) denominator)");
  verify_cmd->add_option("--grid", vf.grid, "hypothesis certification grid size")
      ->capture_default_str();
  add_quad_flags(verify_cmd, vf);
  add_output_flags(verify_cmd, vf);

  // ----------------------------------------------------------------- suite
  CLI::App* suite_cmd = app.add_subcommand("suite", "run a configured suite of runs");
  std::string suite_config;
  suite_cmd->add_option("--config", suite_config, "experiment config file (JSON)")->required();

  // --------------------------------------------------------------- falsify
  CLI::App* falsify_cmd =
      app.add_subcommand("falsify", "randomized search for certified counterexamples");
  CommonFlags ff;
  std::string f_entry;
  long f_trials = 100;
  std::uint64_t f_seed = 0;
  std::map<std::string, std::string> f_families;
  bool f_statement = false;
  falsify_cmd->add_option("--ineq", f_entry, "inequality id")->required();
  falsify_cmd->add_option("--trials", f_trials, "number of trials")->capture_default_str();
  falsify_cmd->add_option("--seed", f_seed, "random seed (runs are bit-reproducible)")
      ->required();
  falsify_cmd->add_option("--family-f", f_families["f"], "sampling family for slot f");
  falsify_cmd->add_option("--family-g", f_families["g"], "sampling family for slot g");
  falsify_cmd->add_option("--family-phi", f_families["phi"], "sampling family for slot phi");
  falsify_cmd->add_option("--family-psi", f_families["psi"], "sampling family for slot psi");
  falsify_cmd->add_flag("--statement-form", f_statement, "probe thm34's stated form");
  falsify_cmd->add_option("--grid", ff.grid, "hypothesis certification grid size")
      ->capture_default_str();
  add_quad_flags(falsify_cmd, ff);
  add_output_flags(falsify_cmd, ff);

  // ------------------------------------------------------------- sharpness
  CLI::App* sharp_cmd = app.add_subcommand(
      "sharpness", "sweep the truncated-power extremal family toward the sharp constant");
  CommonFlags sf;
  double s_p = 2.0, s_tmin = 10.0, s_tmax = 1e6;
  int s_points = 6;
  sharp_cmd->add_option("--p", s_p, "Hardy exponent p > 1")->capture_default_str();
  sharp_cmd->add_option("--tmin", s_tmin, "smallest truncation T")->capture_default_str();
  sharp_cmd->add_option("--tmax", s_tmax, "largest truncation T")->capture_default_str();
  sharp_cmd->add_option("--points", s_points, "number of log-spaced grid points")
      ->capture_default_str();
  add_quad_flags(sharp_cmd, sf);
  add_output_flags(sharp_cmd, sf);

  // -------------------------------------------------------------- optimize
  CLI::App* opt_cmd = app.add_subcommand(
      "optimize", "maximize the verification ratio over a parameterized family");
  CommonFlags of;
  std::string o_entry, o_family = "trunc-power";
  double o_p = 0, o_q = 0, o_a = 0, o_lo = 0, o_hi = 0;
  std::map<std::string, std::string> o_slots;
  std::uint64_t o_seed = 0;
  int o_starts = 4;
  long o_max_evals = 120;
  std::vector<double> o_box;
  opt_cmd->add_option("--ineq", o_entry, "inequality id (direction <= only)")->required();
  opt_cmd->add_option("--family", o_family, "optimizer family: trunc-power, trunc-constant, "
                                            "constant, power, exp-saturate")
      ->capture_default_str();
  opt_cmd->add_option("--p", o_p, "exponent p");
  opt_cmd->add_option("--q", o_q, "exponent q");
  opt_cmd->add_option("--a", o_a, "exponent a");
  opt_cmd->add_option("--lo", o_lo, "interval lower endpoint");
  opt_cmd->add_option("--hi", o_hi, "interval upper endpoint");
  opt_cmd->add_option("--g", o_slots["g"], "fixed expression for slot g");
  opt_cmd->add_option("--phi", o_slots["phi"], "fixed expression for slot phi");
  opt_cmd->add_option("--psi", o_slots["psi"], "fixed expression for slot psi");
  opt_cmd->add_option("--seed", o_seed, "random seed for the multistart")->required();
  opt_cmd->add_option("--starts", o_starts, "number of multistart points")->capture_default_str();
  opt_cmd->add_option("--max-evals", o_max_evals, "candidate evaluations per start")
      ->capture_default_str();
  opt_cmd->add_option("--box", o_box, "box override: lo hi per family parameter, flattened");
  opt_cmd->add_option("--grid", of.grid, "hypothesis certification grid size")
      ->capture_default_str();
  add_quad_flags(opt_cmd, of);
  add_output_flags(opt_cmd, of);

  // ---------------------------------------------------------------- lemmas
  CLI::App* lemmas_cmd =
      app.add_subcommand("lemmas", "check the two ratio lemmas on sampled inputs");
  CommonFlags lf;
  std::string l_which = "both";
  long l_count = 50;
  std::uint64_t l_seed = 0;
  lemmas_cmd->add_option("--which", l_which, "lemma-phi, lemma-G or both")
      ->check(CLI::IsMember({"lemma-phi", "lemma-G", "both"}))
      ->capture_default_str();
  lemmas_cmd->add_option("--count", l_count, "samples per lemma")->capture_default_str();
  lemmas_cmd->add_option("--seed", l_seed, "random seed")->required();
  lemmas_cmd->add_option("--grid", lf.grid, "lemma check grid size")->capture_default_str();
  add_quad_flags(lemmas_cmd, lf);
  add_output_flags(lemmas_cmd, lf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& d : list_catalog()) {
        std::cout << d.id << "  [" << d.direction << "]  slots:";
        for (const auto& s : d.slots) std::cout << " " << s;
        std::cout << "  constraints: " << d.constraints;
        if (!d.note.empty()) std::cout << "  note: " << d.note;
        std::cout << "\n";
      }
      return 0;
    }

    auto fill_params = [](CLI::App* sub, double p, double q, double a, double lo, double hi) {
      Params P;
      if (sub->count("--p")) P.p = p;
      if (sub->count("--q")) P.q = q;
      if (sub->count("--a")) P.a = a;
      double ilo = sub->count("--lo") ? lo : 0.0;
      double ihi = sub->count("--hi") ? hi : kInf;
      P.interval = Interval(ilo, ihi);
      return P;
    };
    auto fill_slots = [](const std::map<std::string, std::string>& raw) {
      std::map<std::string, std::string> out;
      for (const auto& [k, v] : raw)
        if (!v.empty()) out[k] = v;
      return out;
    };

    if (verify_cmd->parsed()) {
      RunConfig run;
      run.kind = "verify";
      run.entry = v_entry;
      run.params = fill_params(verify_cmd, v_p, v_q, v_a, v_lo, v_hi);
      run.slots = fill_slots(v_slots);
      run.statement_form = v_statement;
      run.grid = vf.grid;
      run.out = vf.out;
      run.format = vf.format;
      for (const auto& [slot, text] : run.slots) parse(text);  // surface syntax errors early
      return run_and_dump(run, vf);
    }

    if (suite_cmd->parsed()) {
      std::ifstream in(suite_config);
      if (!in) throw ConfigError("cannot open config file '" + suite_config + "'");
      Json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      ExperimentConfig cfg = parse_config(doc);
      return execute(cfg, std::cout);
    }

    if (falsify_cmd->parsed()) {
      RunConfig run;
      run.kind = "falsify";
      run.entry = f_entry;
      run.trials = f_trials;
      run.seed = f_seed;
      run.has_seed = true;
      run.statement_form = f_statement;
      run.grid = ff.grid;
      run.out = ff.out;
      run.format = ff.format;
      for (const auto& [slot, fam] : fill_slots(f_families)) {
        if (!family_from_string(fam)) throw ConfigError("unknown family '" + fam + "'");
        run.families[slot] = fam;
      }
      return run_and_dump(run, ff);
    }

    if (sharp_cmd->parsed()) {
      RunConfig run;
      run.kind = "sharpness";
      run.params.p = s_p;
      run.t_min = s_tmin;
      run.t_max = s_tmax;
      run.points = s_points;
      run.out = sf.out;
      run.format = sf.format;
      return run_and_dump(run, sf);
    }

    if (opt_cmd->parsed()) {
      RunConfig run;
      run.kind = "optimize";
      run.entry = o_entry;
      run.family = o_family;
      run.params = fill_params(opt_cmd, o_p, o_q, o_a, o_lo, o_hi);
      run.slots = fill_slots(o_slots);
      run.seed = o_seed;
      run.has_seed = true;
      run.starts = o_starts;
      run.opt_max_evals = o_max_evals;
      run.grid = of.grid;
      run.out = of.out;
      run.format = of.format;
      if (!o_box.empty()) {
        if (o_box.size() % 2 != 0) throw ConfigError("--box needs lo hi pairs");
        for (std::size_t i = 0; i + 1 < o_box.size(); i += 2)
          run.box.emplace_back(o_box[i], o_box[i + 1]);
      }
      return run_and_dump(run, of);
    }

    if (lemmas_cmd->parsed()) {
      RunConfig run;
      run.kind = "lemmas";
      run.which = l_which;
      run.count = l_count;
      run.seed = l_seed;
      run.has_seed = true;
      run.grid = lf.grid;
      run.out = lf.out;
      run.format = lf.format;
      return run_and_dump(run, lf);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

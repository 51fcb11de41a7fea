#pragma once

/// The inequality catalog: each entry carries its direction, required
/// function slots with per-slot hypotheses, parameter constraints, the
/// multiplicative constant, and builders for the two integrands. The
/// twelve entry ids are the stable public names used by the CLI and the
/// report schema.
///
/// Two entries deliberately encode known statement/proof discrepancies:
///   - thm32 uses the constant from the proof's final bound (positive under
///     the stated constraint and consistent with the worked special case);
///     thm32-statement keeps the stated form purely as a falsification
///     target (its "constant" can be non-positive inside the admissible
///     region).
///   - thm34 keeps the proof's left-hand side, which divides by
///     phi(x)*psi(x); the stated form (no denominator) is available as a
///     separate probe because it diverges for f = g = min(x,1), p = 3.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cumulative.hpp"
#include "errors.hpp"
#include "function_spec.hpp"
#include "hypotheses.hpp"
#include "interval.hpp"
#include "quadrature.hpp"

namespace hardycheck {

/// Inequality parameters. `a` is the exponent parameter of thm31/thm32;
/// interval endpoints live in `interval` (hardy-finite, thm35, thm37/38)
/// and are distinct from `a` to avoid the symbol collision.
struct Params {
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double a = std::numeric_limits<double>::quiet_NaN();
  Interval interval = Interval::positive_axis();
};

enum class Slot { f, g, phi, psi };

inline const char* to_string(Slot s) {
  switch (s) {
    case Slot::f: return "f";
    case Slot::g: return "g";
    case Slot::phi: return "phi";
    case Slot::psi: return "psi";
  }
  return "?";
}

inline std::optional<Slot> slot_from_string(const std::string& s) {
  for (Slot x : {Slot::f, Slot::g, Slot::phi, Slot::psi})
    if (s == to_string(x)) return x;
  return std::nullopt;
}

enum class Direction { leq, geq };

inline const char* to_string(Direction d) { return d == Direction::leq ? "<=" : ">="; }

struct SlotRequirement {
  Slot slot;
  std::vector<Property> properties;
};

struct Integrand {
  std::function<double(double)> fn;
  Interval domain;
  std::vector<double> breakpoints;
};

/// Everything the integrand builders need: parameters, bound slots, and the
/// cumulatives of f and g.
struct TaskContext {
  Params params;
  std::map<Slot, FunctionSpec> slots;
  std::shared_ptr<const Cumulative> F, G;

  const Expr& slot_expr(Slot s) const { return slots.at(s).expr; }
  double apply(Slot s, double u) const { return slots.at(s).expr(u); }
};

struct InequalityEntry {
  std::string id;
  Direction direction;
  std::vector<SlotRequirement> slots;
  std::string constraints;  // human-readable constraint list
  std::string note;         // discrepancy flags and encoding remarks
  bool uses_q = false;
  bool uses_a = false;
  bool uses_p = true;
  bool uses_interval = false;

  std::function<void(const Params&)> check_params;
  std::function<double(const Params&)> constant;
  std::function<Integrand(const TaskContext&)> lhs;
  std::function<Integrand(const TaskContext&)> rhs;
  // Statement-form probe (thm34 only): the stated LHS without the
  // phi(x)*psi(x) denominator.
  std::function<Integrand(const TaskContext&)> lhs_statement_form;

  bool needs_G() const {
    return id == "thm31" || id == "thm32" || id == "thm32-statement" || id == "thm34" ||
           id == "thm35" || id == "thm35-pow" || id == "thm37" || id == "thm38";
  }
};

namespace catalog_detail {

[[noreturn]] inline void violated(const std::string& what, const std::string& got) {
  throw ConstraintError("constraint " + what + " violated (" + got + ")");
}

inline void need(bool ok, const std::string& what, const std::string& got) {
  if (!ok) violated(what, got);
}

inline std::string pstr(const char* name, double v) {
  return std::string(name) + "=" + format_double(v);
}

/// 0^p/0^q style corner: a zero numerator means no mass regardless of the
/// denominator, so the integrand is 0 there.
inline double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return num / den;
}

inline std::vector<double> merge_cuts(std::initializer_list<const std::vector<double>*> lists) {
  std::vector<double> out;
  for (const auto* l : lists) out.insert(out.end(), l->begin(), l->end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<double> expr_cuts(const Expr& e, double hi) {
  std::vector<double> out;
  cumulative_detail::collect_breakpoints(e, 1e-9, std::min(hi, 1e9), out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<InequalityEntry> build_catalog() {
  std::vector<InequalityEntry> cat;

  // ----------------------------------------------------------------- hardy
  {
    InequalityEntry e;
    e.id = "hardy";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative}}};
    e.constraints = "p > 1";
    e.note = "classical sharp constant (p/(p-1))^p";
    e.check_params = [](const Params& P) {
      need(P.p > 1.0, "p>1", pstr("p", P.p));
    };
    e.constant = [](const Params& P) { return std::pow(P.p / (P.p - 1.0), P.p); };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      double p = c.params.p;
      return Integrand{[F, p](double x) { return std::pow((*F)(x) / x, p); },
                       Interval::positive_axis(), F->breakpoints()};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      double p = c.params.p;
      return Integrand{[f, p](double x) { return std::pow(f.expr(x), p); },
                       Interval::positive_axis(), expr_cuts(f.expr, 1e9)};
    };
    cat.push_back(std::move(e));
  }

  // ----------------------------------------------------------- hardy-finite
  {
    InequalityEntry e;
    e.id = "hardy-finite";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative}}};
    e.constraints = "p > 1; 0 < lo < hi < inf";
    e.note = "F stays the cumulative from 0; mass below the window can defeat the bound";
    e.uses_interval = true;
    e.check_params = [](const Params& P) {
      need(P.p > 1.0, "p>1", pstr("p", P.p));
      need(P.interval.lo > 0.0, "0<lo", pstr("lo", P.interval.lo));
      need(std::isfinite(P.interval.hi), "hi<inf", pstr("hi", P.interval.hi));
    };
    e.constant = [](const Params& P) { return std::pow(P.p / (P.p - 1.0), P.p); };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      double p = c.params.p;
      return Integrand{[F, p](double x) { return std::pow((*F)(x) / x, p); }, c.params.interval,
                       F->breakpoints()};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      double p = c.params.p;
      return Integrand{[f, p](double x) { return std::pow(f.expr(x), p); }, c.params.interval,
                       expr_cuts(f.expr, c.params.interval.hi)};
    };
    cat.push_back(std::move(e));
  }

  // ------------------------------------------------------------ ws-weighted
  {
    InequalityEntry e;
    e.id = "ws-weighted";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative, Property::monotone_nondecreasing}},
               {Slot::g, {Property::non_negative, Property::ratio_x_over_g_nonincreasing}}};
    e.constraints = "p > 1; 0 < a < 1";
    e.note = "constant encoded as 1/(a(p-1)(1-a)^(p-1)); the printed (1-p) form is negative for "
             "p>1";
    e.uses_a = true;
    e.check_params = [](const Params& P) {
      need(P.p > 1.0, "p>1", pstr("p", P.p));
      need(P.a > 0.0 && P.a < 1.0, "0<a<1", pstr("a", P.a));
    };
    e.constant = [](const Params& P) {
      return 1.0 / (P.a * (P.p - 1.0) * std::pow(1.0 - P.a, P.p - 1.0));
    };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      FunctionSpec g = c.slots.at(Slot::g);
      double p = c.params.p;
      std::vector<double> gcuts = expr_cuts(g.expr, 1e9);
      return Integrand{
          [F, g, p](double x) { return std::pow(safe_ratio((*F)(x), g.expr(x)), p); },
          Interval::positive_axis(),
          merge_cuts({&F->breakpoints(), &gcuts})};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      FunctionSpec g = c.slots.at(Slot::g);
      double p = c.params.p;
      std::vector<double> fcuts = expr_cuts(f.expr, 1e9);
      std::vector<double> gcuts = expr_cuts(g.expr, 1e9);
      return Integrand{
          [f, g, p](double x) { return std::pow(safe_ratio(x * f.expr(x), g.expr(x)), p); },
          Interval::positive_axis(), merge_cuts({&fcuts, &gcuts})};
    };
    cat.push_back(std::move(e));
  }

  // ----------------------------------------------------------------- thm31
  {
    InequalityEntry e;
    e.id = "thm31";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative}},
               {Slot::g, {Property::non_negative, Property::ratio_x_over_g_nonincreasing}}};
    e.constraints = "p > 1; 0 < a < 1; q > (p - a(p-1))/2";
    e.note = "reduces to hardy for a=1/p, q=p/2, g=2x";
    e.uses_a = true;
    e.uses_q = true;
    e.check_params = [](const Params& P) {
      need(P.p > 1.0, "p>1", pstr("p", P.p));
      need(P.a > 0.0 && P.a < 1.0, "0<a<1", pstr("a", P.a));
      double bound = (P.p - P.a * (P.p - 1.0)) / 2.0;
      need(P.q > bound, "q>(p-a(p-1))/2", pstr("q", P.q) + ", bound=" + format_double(bound));
    };
    e.constant = [](const Params& P) {
      double denom = ((P.a - 1.0) * (P.p - 1.0) + 2.0 * P.q - 1.0) *
                     std::pow(1.0 - P.a, P.p - 1.0);
      return 1.0 / denom;
    };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      double p = c.params.p, q = c.params.q;
      return Integrand{
          [F, G, p, q](double x) {
            return safe_ratio(std::pow((*F)(x), p), std::pow((*G)(x), q));
          },
          Interval::positive_axis(), merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      auto G = c.G;
      double p = c.params.p, q = c.params.q;
      std::vector<double> fcuts = expr_cuts(f.expr, 1e9);
      return Integrand{
          [f, G, p, q](double t) {
            return safe_ratio(std::pow(t * f.expr(t), p), std::pow((*G)(t), q));
          },
          Interval::positive_axis(),
          merge_cuts({&G->breakpoints(), &fcuts})};
    };
    cat.push_back(std::move(e));
  }

  // ------------------------------------------------- thm32 and its statement
  auto make_thm32 = [](bool statement_form) {
    InequalityEntry e;
    e.id = statement_form ? "thm32-statement" : "thm32";
    e.direction = Direction::geq;
    e.slots = {{Slot::f, {Property::non_negative}},
               {Slot::g, {Property::non_negative, Property::ratio_x_over_g_nonincreasing}}};
    e.constraints = "0 < p < 1; a > 0; q > (p + a(p-1))/2";
    e.note = statement_form
                 ? "statement-form constant; retained as a falsification target (can be "
                   "non-positive inside the admissible region)"
                 : "constant from proof; statement differs";
    e.uses_a = true;
    e.uses_q = true;
    e.check_params = [](const Params& P) {
      need(P.p > 0.0 && P.p < 1.0, "0<p<1", pstr("p", P.p));
      need(P.a > 0.0, "a>0", pstr("a", P.a));
      double bound = (P.p + P.a * (P.p - 1.0)) / 2.0;
      need(P.q > bound, "q>(p+a(p-1))/2", pstr("q", P.q) + ", bound=" + format_double(bound));
    };
    if (statement_form) {
      e.constant = [](const Params& P) {
        double denom = ((P.a + 1.0) * (P.p - 1.0) + 2.0 * P.q - 1.0) *
                       std::pow(1.0 + P.a, P.p - 1.0);
        return 1.0 / denom;
      };
    } else {
      e.constant = [](const Params& P) {
        double denom = ((P.a + 1.0) * (1.0 - P.p) + 2.0 * P.q - 1.0) *
                       std::pow(1.0 + P.a, P.p - 1.0);
        return 1.0 / denom;
      };
    }
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      double p = c.params.p, q = c.params.q;
      return Integrand{
          [F, G, p, q](double x) {
            return safe_ratio(std::pow((*F)(x), p), std::pow((*G)(x), q));
          },
          Interval::positive_axis(), merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      auto G = c.G;
      double p = c.params.p, q = c.params.q;
      std::vector<double> fcuts = expr_cuts(f.expr, 1e9);
      return Integrand{
          [f, G, p, q](double t) {
            return safe_ratio(std::pow(t * f.expr(t), p), std::pow((*G)(t), q));
          },
          Interval::positive_axis(),
          merge_cuts({&G->breakpoints(), &fcuts})};
    };
    return e;
  };
  cat.push_back(make_thm32(false));
  cat.push_back(make_thm32(true));

  // ----------------------------------------------------------------- thm34
  {
    InequalityEntry e;
    e.id = "thm34";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative, Property::monotone_nondecreasing}},
               {Slot::g, {Property::non_negative, Property::monotone_nondecreasing}},
               {Slot::phi,
                {Property::non_negative, Property::monotone_nondecreasing, Property::convex,
                 Property::submultiplicative}},
               {Slot::psi,
                {Property::non_negative, Property::monotone_nondecreasing, Property::convex,
                 Property::submultiplicative}}};
    e.constraints = "p > 1";
    e.note = "LHS includes phi(x)*psi(x) denominator per proof";
    e.check_params = [](const Params& P) { need(P.p > 1.0, "p>1", pstr("p", P.p)); };
    e.constant = [](const Params& P) { return 1.0 / (P.p - 1.0); };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      FunctionSpec phi = c.slots.at(Slot::phi);
      FunctionSpec psi = c.slots.at(Slot::psi);
      double p = c.params.p;
      return Integrand{
          [F, G, phi, psi, p](double x) {
            double num = phi.expr((*F)(x)) * psi.expr((*G)(x)) * std::pow(x, 1.0 - p);
            return safe_ratio(num, phi.expr(x) * psi.expr(x));
          },
          Interval::positive_axis(), merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    e.lhs_statement_form = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      FunctionSpec phi = c.slots.at(Slot::phi);
      FunctionSpec psi = c.slots.at(Slot::psi);
      double p = c.params.p;
      return Integrand{
          [F, G, phi, psi, p](double x) {
            return phi.expr((*F)(x)) * psi.expr((*G)(x)) * std::pow(x, 1.0 - p);
          },
          Interval::positive_axis(), merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      FunctionSpec g = c.slots.at(Slot::g);
      FunctionSpec phi = c.slots.at(Slot::phi);
      FunctionSpec psi = c.slots.at(Slot::psi);
      double p = c.params.p;
      return Integrand{
          [f, g, phi, psi, p](double x) {
            return phi.expr(f.expr(x)) * psi.expr(g.expr(x)) * std::pow(x, 1.0 - p);
          },
          Interval::positive_axis(),
          merge_cuts({&c.F->breakpoints(), &c.G->breakpoints()})};
    };
    cat.push_back(std::move(e));
  }

  // ------------------------------------------------------- thm35 / thm35-pow
  {
    InequalityEntry e;
    e.id = "thm35";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative, Property::monotone_nondecreasing}},
               {Slot::g, {Property::non_negative, Property::monotone_nonincreasing}},
               {Slot::phi, {Property::non_negative, Property::monotone_nondecreasing}}};
    e.constraints = "interval (0, b) with 0 < b <= inf";
    e.note = "upper endpoint b may be infinite; tail classification applies";
    e.uses_p = false;
    e.uses_interval = true;
    e.check_params = [](const Params& P) {
      need(P.interval.lo == 0.0, "lo=0", pstr("lo", P.interval.lo));
    };
    e.constant = [](const Params&) { return 1.0; };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      FunctionSpec phi = c.slots.at(Slot::phi);
      return Integrand{
          [F, G, phi](double x) { return phi.expr(safe_ratio((*F)(x), (*G)(x))); },
          c.params.interval, merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      FunctionSpec g = c.slots.at(Slot::g);
      FunctionSpec phi = c.slots.at(Slot::phi);
      std::vector<double> fcuts = expr_cuts(f.expr, c.params.interval.hi);
      std::vector<double> gcuts = expr_cuts(g.expr, c.params.interval.hi);
      return Integrand{
          [f, g, phi](double x) { return phi.expr(safe_ratio(f.expr(x), g.expr(x))); },
          c.params.interval, merge_cuts({&fcuts, &gcuts})};
    };
    cat.push_back(std::move(e));

    InequalityEntry ep = e;
    ep.id = "thm35-pow";
    ep.slots = {{Slot::f, {Property::non_negative, Property::monotone_nondecreasing}},
                {Slot::g, {Property::non_negative, Property::monotone_nonincreasing}}};
    ep.constraints = "p >= 1; interval (0, b) with 0 < b <= inf";
    ep.note = "power special case phi(x) = x^p";
    ep.uses_p = true;
    ep.check_params = [](const Params& P) {
      need(P.p >= 1.0, "p>=1", pstr("p", P.p));
      need(P.interval.lo == 0.0, "lo=0", pstr("lo", P.interval.lo));
    };
    ep.lhs = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      double p = c.params.p;
      return Integrand{
          [F, G, p](double x) { return std::pow(safe_ratio((*F)(x), (*G)(x)), p); },
          c.params.interval, merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    ep.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      FunctionSpec g = c.slots.at(Slot::g);
      double p = c.params.p;
      std::vector<double> fcuts = expr_cuts(f.expr, c.params.interval.hi);
      std::vector<double> gcuts = expr_cuts(g.expr, c.params.interval.hi);
      return Integrand{
          [f, g, p](double x) { return std::pow(safe_ratio(f.expr(x), g.expr(x)), p); },
          c.params.interval, merge_cuts({&fcuts, &gcuts})};
    };
    cat.push_back(std::move(ep));
  }

  // ----------------------------------------------------------------- thm36
  {
    InequalityEntry e;
    e.id = "thm36";
    e.direction = Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative}},
               {Slot::phi,
                {Property::non_negative, Property::convex, Property::submultiplicative,
                 Property::zero_at_zero}}};
    e.constraints = "p > 1; q a non-negative integer";
    e.note = "q restricted to non-negative integers; f monotonicity not required";
    e.uses_q = true;
    e.check_params = [](const Params& P) {
      need(P.p > 1.0, "p>1", pstr("p", P.p));
      need(P.q >= 0.0 && P.q == std::floor(P.q), "q in {0,1,2,...}", pstr("q", P.q));
    };
    e.constant = [](const Params& P) { return 1.0 / (P.p - 1.0); };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      FunctionSpec phi = c.slots.at(Slot::phi);
      double p = c.params.p, q = c.params.q;
      return Integrand{
          [F, phi, p, q](double x) {
            double num = std::pow(x, 2.0 - p) * phi.expr(std::pow(x, q) * (*F)(x));
            return safe_ratio(num, std::pow(phi.expr(x), q + 2.0));
          },
          Interval::positive_axis(), F->breakpoints()};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      FunctionSpec phi = c.slots.at(Slot::phi);
      double p = c.params.p;
      return Integrand{
          [f, phi, p](double x) {
            double num = std::pow(x, 2.0 - p) * phi.expr(f.expr(x));
            return safe_ratio(num, phi.expr(x));
          },
          Interval::positive_axis(), expr_cuts(f.expr, 1e9)};
    };
    cat.push_back(std::move(e));
  }

  // ----------------------------------------------------------- thm37 / thm38
  auto make_chebyshev_entry = [](bool reversed) {
    InequalityEntry e;
    e.id = reversed ? "thm38" : "thm37";
    e.direction = reversed ? Direction::geq : Direction::leq;
    e.slots = {{Slot::f, {Property::non_negative, Property::monotone_nondecreasing}},
               {Slot::g, {Property::non_negative, Property::monotone_nondecreasing}},
               {Slot::phi,
                {Property::non_negative, reversed ? Property::monotone_nonincreasing
                                                  : Property::monotone_nondecreasing}}};
    e.constraints = "0 < lo < hi < inf";
    e.note = reversed ? "reverse of thm37 for non-increasing phi" : std::string{};
    e.uses_p = false;
    e.uses_interval = true;
    e.check_params = [](const Params& P) {
      need(P.interval.lo > 0.0, "0<lo", pstr("lo", P.interval.lo));
      need(std::isfinite(P.interval.hi), "hi<inf", pstr("hi", P.interval.hi));
    };
    e.constant = [](const Params&) { return 1.0; };
    e.lhs = [](const TaskContext& c) {
      auto F = c.F;
      auto G = c.G;
      FunctionSpec phi = c.slots.at(Slot::phi);
      return Integrand{
          [F, G, phi](double x) { return phi.expr((*F)(x) * (*G)(x) / (x * x)); },
          c.params.interval, merge_cuts({&F->breakpoints(), &G->breakpoints()})};
    };
    e.rhs = [](const TaskContext& c) {
      FunctionSpec f = c.slots.at(Slot::f);
      FunctionSpec g = c.slots.at(Slot::g);
      FunctionSpec phi = c.slots.at(Slot::phi);
      std::vector<double> fcuts = expr_cuts(f.expr, c.params.interval.hi);
      std::vector<double> gcuts = expr_cuts(g.expr, c.params.interval.hi);
      return Integrand{
          [f, g, phi](double x) { return phi.expr(f.expr(x) * g.expr(x)); }, c.params.interval,
          merge_cuts({&fcuts, &gcuts})};
    };
    return e;
  };
  cat.push_back(make_chebyshev_entry(false));
  cat.push_back(make_chebyshev_entry(true));

  return cat;
}

}  // namespace catalog_detail

inline const std::vector<InequalityEntry>& catalog() {
  static const std::vector<InequalityEntry> cat = catalog_detail::build_catalog();
  return cat;
}

inline const InequalityEntry& entry_by_id(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw ConstraintError("unknown inequality id '" + id + "'");
}

/// The entry's multiplicative constant at the given parameters.
/// Throws ConstraintError (naming the constraint) outside the admissible region.
inline double inequality_constant(const std::string& id, const Params& params) {
  const InequalityEntry& e = entry_by_id(id);
  e.check_params(params);
  return e.constant(params);
}

struct EntryDescriptor {
  std::string id;
  std::string direction;
  std::vector<std::string> slots;
  std::string constraints;
  std::string note;
};

/// Stable-order descriptors of all twelve entries.
inline std::vector<EntryDescriptor> list_catalog() {
  std::vector<EntryDescriptor> out;
  for (const auto& e : catalog()) {
    EntryDescriptor d;
    d.id = e.id;
    d.direction = to_string(e.direction);
    for (const auto& s : e.slots) d.slots.push_back(to_string(s.slot));
    d.constraints = e.constraints;
    d.note = e.note;
    out.push_back(std::move(d));
  }
  return out;
}

/// A fully bound inequality instance ready for verification.
struct VerificationTask {
  const InequalityEntry* entry = nullptr;
  Params params;
  QuadOptions opts;
  TaskContext context;
  Integrand lhs, rhs;
  bool statement_form = false;

  bool tails_classified = false;
  TailClassification lhs_tail, rhs_tail;
  bool vacuous_both_divergent = false;
  std::string construction_note;
};

/// Bind slots, certify every required hypothesis, build both integrands,
/// and (for tasks quantified over an unbounded domain) classify both tails.
/// Throws ConstraintError / BindingError / CumulativeError on any failure;
/// a both-sides-divergent task is still constructed, only flagged vacuous.
inline VerificationTask instantiate_task(const std::string& id, const Params& params,
                                         const std::map<Slot, FunctionSpec>& bindings,
                                         const QuadOptions& opts = {}, int grid_size = 512,
                                         bool statement_form = false) {
  const InequalityEntry& entry = entry_by_id(id);
  entry.check_params(params);
  opts.validate();
  if (statement_form && !entry.lhs_statement_form)
    throw ConstraintError("statement-form probe is only defined for thm34");

  VerificationTask task;
  task.entry = &entry;
  task.params = params;
  task.opts = opts;
  task.statement_form = statement_form;
  task.context.params = params;

  for (const auto& req : entry.slots) {
    auto it = bindings.find(req.slot);
    if (it == bindings.end())
      throw BindingError(std::string("missing slot ") + to_string(req.slot));
    FunctionSpec spec = it->second;
    for (Property p : req.properties) {
      const Certificate* pre = spec.find_certificate(to_string(p));
      if (pre != nullptr && pre->status == CertStatus::asserted) continue;
      Certificate c = check_property(spec, p, grid_size);
      if (c.status == CertStatus::refuted) {
        std::string w = c.witness ? (" at witness x=" + format_double(c.witness->x) +
                                     (c.witness->y ? ", y=" + format_double(*c.witness->y) : ""))
                                  : std::string{};
        throw BindingError(std::string("slot ") + to_string(req.slot) + ": property " +
                           to_string(p) + " refuted" + w);
      }
      if (c.status == CertStatus::inconclusive)
        throw BindingError(std::string("slot ") + to_string(req.slot) + ": property " +
                           to_string(p) + " inconclusive (" + c.detail + ")");
      spec.certificates.push_back(std::move(c));
    }
    task.context.slots.emplace(req.slot, std::move(spec));
  }

  try {
    task.context.F = std::make_shared<const Cumulative>(task.context.slots.at(Slot::f).expr,
                                                        Interval::positive_axis());
    if (entry.needs_G())
      task.context.G = std::make_shared<const Cumulative>(task.context.slots.at(Slot::g).expr,
                                                          Interval::positive_axis());
  } catch (const CumulativeError& err) {
    throw BindingError(std::string("cumulative construction failed: ") + err.what());
  }

  task.lhs = statement_form ? entry.lhs_statement_form(task.context) : entry.lhs(task.context);
  task.rhs = entry.rhs(task.context);

  if (task.lhs.domain.unbounded()) {
    task.lhs_tail =
        classify_tail(task.lhs.fn, tail_start(task.lhs.domain, opts, task.lhs.breakpoints));
    task.rhs_tail =
        classify_tail(task.rhs.fn, tail_start(task.rhs.domain, opts, task.rhs.breakpoints));
    task.tails_classified = true;
    if (task.lhs_tail.kind == TailKind::divergent && task.rhs_tail.kind == TailKind::divergent) {
      task.vacuous_both_divergent = true;
      task.construction_note = "both integrands classified divergent; task is vacuous";
    }
  }
  return task;
}

}  // namespace hardycheck

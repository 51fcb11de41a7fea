#pragma once

/// Linearization of expression trees into a small closed-form basis
///   c, c*x^a, c*e^(r*x), c*ln(x), c*(s+x)^a, c*ln(s+x)
/// with symbolic antiderivatives. Used by Cumulative to integrate exactly
/// whenever the (piecewise-resolved) node set allows; anything outside the
/// basis falls back to quadrature.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"

namespace hardycheck {

struct BasisTerm {
  enum class Kind {
    constant,       // c
    power,          // c * x^expo
    exponential,    // c * e^(rate x)
    logx,           // c * ln x
    shifted_power,  // c * (shift + x)^expo
    log_shifted,    // c * ln(shift + x)
    x_log_x,        // c * x ln x            (antiderivatives only)
    shifted_x_log   // c * (shift+x) ln(shift+x)
  };

  Kind kind = Kind::constant;
  double coef = 0.0;
  double expo = 0.0;
  double rate = 0.0;
  double shift = 0.0;
  std::string origin;  // node path that produced this term

  double value(double x) const {
    switch (kind) {
      case Kind::constant: return coef;
      case Kind::power: return coef * std::pow(x, expo);
      case Kind::exponential: return coef * std::exp(rate * x);
      case Kind::logx: return coef * std::log(x);
      case Kind::shifted_power: return coef * std::pow(shift + x, expo);
      case Kind::log_shifted: return coef * std::log(shift + x);
      case Kind::x_log_x: return coef * x * std::log(x);
      case Kind::shifted_x_log: return coef * (shift + x) * std::log(shift + x);
    }
    return 0.0;
  }

  static BasisTerm konst(double c, std::string org = {}) {
    BasisTerm t;
    t.kind = Kind::constant;
    t.coef = c;
    t.origin = std::move(org);
    return t;
  }
  static BasisTerm pow_t(double c, double e, std::string org = {}) {
    if (e == 0.0) return konst(c, std::move(org));
    BasisTerm t;
    t.kind = Kind::power;
    t.coef = c;
    t.expo = e;
    t.origin = std::move(org);
    return t;
  }
  static BasisTerm exp_t(double c, double r, std::string org = {}) {
    if (r == 0.0) return konst(c, std::move(org));
    BasisTerm t;
    t.kind = Kind::exponential;
    t.coef = c;
    t.rate = r;
    t.origin = std::move(org);
    return t;
  }
  static BasisTerm shifted(double c, double s, double e, std::string org = {}) {
    if (s == 0.0) return pow_t(c, e, std::move(org));
    BasisTerm t;
    t.kind = Kind::shifted_power;
    t.coef = c;
    t.shift = s;
    t.expo = e;
    t.origin = std::move(org);
    return t;
  }
};

using TermList = std::vector<BasisTerm>;

namespace basis_detail {

inline constexpr std::size_t kMaxTerms = 64;

inline std::optional<BasisTerm> multiply(const BasisTerm& a, const BasisTerm& b) {
  using K = BasisTerm::Kind;
  if (a.kind == K::constant) {
    BasisTerm r = b;
    r.coef *= a.coef;
    return r;
  }
  if (b.kind == K::constant) return multiply(b, a);
  if (a.kind == K::power && b.kind == K::power)
    return BasisTerm::pow_t(a.coef * b.coef, a.expo + b.expo, a.origin);
  if (a.kind == K::exponential && b.kind == K::exponential)
    return BasisTerm::exp_t(a.coef * b.coef, a.rate + b.rate, a.origin);
  if (a.kind == K::shifted_power && b.kind == K::shifted_power && a.shift == b.shift)
    return BasisTerm::shifted(a.coef * b.coef, a.shift, a.expo + b.expo, a.origin);
  return std::nullopt;
}

inline std::optional<TermList> multiply_lists(const TermList& a, const TermList& b) {
  TermList out;
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      auto p = multiply(ta, tb);
      if (!p) return std::nullopt;
      out.push_back(*p);
      if (out.size() > kMaxTerms) return std::nullopt;
    }
  }
  return out;
}

inline bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace basis_detail

/// Try to express e as a sum of basis terms. `path` seeds the origin labels.
inline std::optional<TermList> linearize(const Expr& e, const std::string& path = "root") {
  using K = BasisTerm::Kind;
  namespace bd = basis_detail;
  switch (e.kind()) {
    case NodeKind::constant:
      return TermList{BasisTerm::konst(e.constant_value(), path)};
    case NodeKind::variable:
      return TermList{BasisTerm::pow_t(1.0, 1.0, path)};
    case NodeKind::sum: {
      TermList out;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        auto sub = linearize(e.children()[i], path + ".sum[" + std::to_string(i) + "]");
        if (!sub) return std::nullopt;
        out.insert(out.end(), sub->begin(), sub->end());
        if (out.size() > bd::kMaxTerms) return std::nullopt;
      }
      return out;
    }
    case NodeKind::product: {
      TermList acc{BasisTerm::konst(1.0, path)};
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        auto sub = linearize(e.children()[i], path + ".product[" + std::to_string(i) + "]");
        if (!sub) return std::nullopt;
        auto next = bd::multiply_lists(acc, *sub);
        if (!next) return std::nullopt;
        acc = std::move(*next);
      }
      return acc;
    }
    case NodeKind::power: {
      const double a = e.exponent();
      auto sub = linearize(e.children()[0], path + ".power");
      if (!sub) return std::nullopt;
      if (sub->size() == 1) {
        const BasisTerm& t = sub->front();
        const bool coef_ok = t.coef > 0.0 || bd::is_integer(a);
        if (!coef_ok) return std::nullopt;
        const double c = std::pow(t.coef, a);
        switch (t.kind) {
          case K::constant: return TermList{BasisTerm::konst(c, path)};
          case K::power: return TermList{BasisTerm::pow_t(c, t.expo * a, path)};
          case K::exponential: return TermList{BasisTerm::exp_t(c, t.rate * a, path)};
          case K::shifted_power: return TermList{BasisTerm::shifted(c, t.shift, t.expo * a, path)};
          default: return std::nullopt;
        }
      }
      // (A + B x)^a with B > 0 and A/B >= 0 maps onto the shifted-power basis.
      if (sub->size() == 2) {
        const BasisTerm* kc = nullptr;
        const BasisTerm* px = nullptr;
        for (const auto& t : *sub) {
          if (t.kind == K::constant) kc = &t;
          if (t.kind == K::power && t.expo == 1.0) px = &t;
        }
        if (kc && px && px->coef > 0.0 && kc->coef / px->coef >= 0.0) {
          const double b = px->coef;
          return TermList{BasisTerm::shifted(std::pow(b, a), kc->coef / b, a, path)};
        }
      }
      // Small integer exponents expand multiplicatively.
      if (bd::is_integer(a) && a >= 2.0 && a <= 4.0) {
        TermList acc = *sub;
        for (int i = 1; i < static_cast<int>(a); ++i) {
          auto next = bd::multiply_lists(acc, *sub);
          if (!next) return std::nullopt;
          acc = std::move(*next);
        }
        return acc;
      }
      return std::nullopt;
    }
    case NodeKind::exponential: {
      auto sub = linearize(e.children()[0], path + ".exp");
      if (!sub) return std::nullopt;
      double a = 0.0, b = 0.0;
      for (const auto& t : *sub) {
        if (t.kind == K::constant) {
          a += t.coef;
        } else if (t.kind == K::power && t.expo == 1.0) {
          b += t.coef;
        } else {
          return std::nullopt;
        }
      }
      return TermList{BasisTerm::exp_t(std::exp(a), b, path)};
    }
    case NodeKind::logarithm: {
      auto sub = linearize(e.children()[0], path + ".log");
      if (!sub) return std::nullopt;
      if (sub->size() == 1) {
        const BasisTerm& t = sub->front();
        if (t.coef <= 0.0) return std::nullopt;
        if (t.kind == K::constant) return TermList{BasisTerm::konst(std::log(t.coef), path)};
        if (t.kind == K::power) {
          TermList out{BasisTerm::konst(std::log(t.coef), path)};
          BasisTerm lg;
          lg.kind = K::logx;
          lg.coef = t.expo;
          lg.origin = path;
          out.push_back(lg);
          return out;
        }
      }
      if (sub->size() == 2) {
        const BasisTerm* kc = nullptr;
        const BasisTerm* px = nullptr;
        for (const auto& t : *sub) {
          if (t.kind == K::constant) kc = &t;
          if (t.kind == K::power && t.expo == 1.0) px = &t;
        }
        if (kc && px && px->coef > 0.0 && kc->coef / px->coef > 0.0) {
          TermList out{BasisTerm::konst(std::log(px->coef), path)};
          BasisTerm lg;
          lg.kind = K::log_shifted;
          lg.coef = 1.0;
          lg.shift = kc->coef / px->coef;
          lg.origin = path;
          out.push_back(lg);
          return out;
        }
      }
      return std::nullopt;
    }
    case NodeKind::minimum:
    case NodeKind::maximum:
    case NodeKind::truncate:
      // Piecewise nodes must be resolved to a branch before linearization.
      return std::nullopt;
  }
  return std::nullopt;
}

/// Symbolic antiderivative of a single basis term.
inline std::optional<TermList> antiderivative(const BasisTerm& t) {
  using K = BasisTerm::Kind;
  switch (t.kind) {
    case K::constant:
      return TermList{BasisTerm::pow_t(t.coef, 1.0, t.origin)};
    case K::power:
      if (t.expo == -1.0) {
        BasisTerm lg;
        lg.kind = K::logx;
        lg.coef = t.coef;
        lg.origin = t.origin;
        return TermList{lg};
      }
      return TermList{BasisTerm::pow_t(t.coef / (t.expo + 1.0), t.expo + 1.0, t.origin)};
    case K::exponential:
      return TermList{BasisTerm::exp_t(t.coef / t.rate, t.rate, t.origin)};
    case K::logx: {
      BasisTerm xl;
      xl.kind = K::x_log_x;
      xl.coef = t.coef;
      xl.origin = t.origin;
      return TermList{xl, BasisTerm::pow_t(-t.coef, 1.0, t.origin)};
    }
    case K::shifted_power:
      if (t.expo == -1.0) {
        BasisTerm lg;
        lg.kind = K::log_shifted;
        lg.coef = t.coef;
        lg.shift = t.shift;
        lg.origin = t.origin;
        return TermList{lg};
      }
      return TermList{
          BasisTerm::shifted(t.coef / (t.expo + 1.0), t.shift, t.expo + 1.0, t.origin)};
    case K::log_shifted: {
      BasisTerm xl;
      xl.kind = K::shifted_x_log;
      xl.coef = t.coef;
      xl.shift = t.shift;
      xl.origin = t.origin;
      return TermList{xl, BasisTerm::pow_t(-t.coef, 1.0, t.origin)};
    }
    case K::x_log_x:
    case K::shifted_x_log:
      return std::nullopt;  // never appears in an integrand
  }
  return std::nullopt;
}

struct LimitAtZero {
  bool finite = true;
  double value = 0.0;
  std::string divergent_origin;
};

/// Limit of a term-list antiderivative as x -> 0+. Detects divergence of
/// the cumulative integral at the origin.
inline LimitAtZero limit_at_zero(const TermList& terms) {
  using K = BasisTerm::Kind;
  LimitAtZero lim;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    switch (t.kind) {
      case K::constant: lim.value += t.coef; break;
      case K::power:
        if (t.expo > 0.0) break;
        lim.finite = false;
        lim.divergent_origin = t.origin;
        return lim;
      case K::exponential: lim.value += t.coef; break;
      case K::logx:
        lim.finite = false;
        lim.divergent_origin = t.origin;
        return lim;
      case K::shifted_power: lim.value += t.coef * std::pow(t.shift, t.expo); break;
      case K::log_shifted: lim.value += t.coef * std::log(t.shift); break;
      case K::x_log_x: break;  // x ln x -> 0
      case K::shifted_x_log: lim.value += t.coef * t.shift * std::log(t.shift); break;
    }
  }
  return lim;
}

inline double eval_terms(const TermList& terms, double x) {
  double v = 0.0;
  for (const auto& t : terms) v += t.value(x);
  return v;
}

}  // namespace hardycheck

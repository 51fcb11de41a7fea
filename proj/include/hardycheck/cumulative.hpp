#pragma once

/// Cumulative integral F(x) = integral of f from 0 to x.
///
/// Construction collects the kink/jump points of f (truncation windows and
/// min/max crossings), resolves every piece to its active branch, and builds
/// per-piece symbolic antiderivatives when the resolved pieces stay inside
/// the closed-form basis. The closed form is validated against direct
/// quadrature at a few checkpoints; on any mismatch or unsupported node the
/// evaluator falls back to quadrature with a populate-once value cache at
/// the breakpoints (thread-safe under concurrent reads).

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "basis.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "interval.hpp"
#include "quadrature.hpp"

namespace hardycheck {

namespace cumulative_detail {

inline void scan_crossings(const Expr& a, const Expr& b, double lo, double hi,
                           std::vector<double>& out) {
  auto diff = [&](double x) -> std::optional<double> {
    try {
      double v = a(x) - b(x);
      return v;
    } catch (const EvalError&) {
      return std::nullopt;
    }
  };
  const int n = 257;
  const double llo = std::log(lo), lhi = std::log(hi);
  std::optional<double> prev;
  double prev_x = lo;
  for (int i = 0; i < n; ++i) {
    double x = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    auto v = diff(x);
    if (v && *v == 0.0) {
      out.push_back(x);  // grid point sits exactly on a crossing
    } else if (prev && v && *prev != 0.0 &&
               ((*prev < 0.0 && *v > 0.0) || (*prev > 0.0 && *v < 0.0))) {
      double xa = prev_x, xb = x;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (xa + xb);
        auto vm = diff(mid);
        if (!vm || *vm == 0.0) {
          xa = xb = mid;
          break;
        }
        if ((*prev < 0.0) == (*vm < 0.0))
          xa = mid;
        else
          xb = mid;
      }
      out.push_back(0.5 * (xa + xb));
    }
    if (v) {
      prev = v;
      prev_x = x;
    }
  }
}

inline void collect_breakpoints(const Expr& e, double lo, double hi, std::vector<double>& out) {
  switch (e.kind()) {
    case NodeKind::truncate:
      if (e.window_lo() > lo && e.window_lo() < hi) out.push_back(e.window_lo());
      if (e.window_hi() > lo && e.window_hi() < hi) out.push_back(e.window_hi());
      break;
    case NodeKind::minimum:
    case NodeKind::maximum:
      scan_crossings(e.children()[0], e.children()[1], lo, hi, out);
      break;
    default:
      break;
  }
  for (const auto& k : e.children()) collect_breakpoints(k, lo, hi, out);
}

/// Replace min/max/trunc nodes by the branch active at x0.
inline Expr resolve_at(const Expr& e, double x0) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::variable:
      return e;
    case NodeKind::truncate:
      if (x0 < e.window_lo() || x0 > e.window_hi()) return Expr::constant(0.0);
      return resolve_at(e.children()[0], x0);
    case NodeKind::minimum:
    case NodeKind::maximum: {
      double va = e.children()[0](x0);
      double vb = e.children()[1](x0);
      bool first = e.kind() == NodeKind::minimum ? va <= vb : va >= vb;
      return resolve_at(e.children()[first ? 0 : 1], x0);
    }
    case NodeKind::sum:
    case NodeKind::product: {
      std::vector<Expr> kids;
      for (const auto& k : e.children()) kids.push_back(resolve_at(k, x0));
      return e.kind() == NodeKind::sum ? Expr::sum(std::move(kids))
                                       : Expr::product(std::move(kids));
    }
    case NodeKind::power:
      return Expr::power(resolve_at(e.children()[0], x0), e.exponent());
    case NodeKind::exponential:
      return Expr::exponential(resolve_at(e.children()[0], x0));
    case NodeKind::logarithm:
      return Expr::logarithm(resolve_at(e.children()[0], x0));
  }
  return e;
}

}  // namespace cumulative_detail

class Cumulative {
 public:
  /// Integrates f from 0. Throws CumulativeError if the integral from 0
  /// provably diverges (closed-form head exponent <= -1, or a divergent
  /// head probe in the quadrature fallback).
  explicit Cumulative(Expr f, Interval domain = Interval::positive_axis(),
                      QuadOptions opts = default_opts())
      : f_(std::move(f)), domain_(domain), opts_(opts) {
    namespace cd = cumulative_detail;
    const double scan_hi = std::min(domain_.hi, 1e9);
    std::vector<double> knots;
    cd::collect_breakpoints(f_, 1e-9, scan_hi, knots);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, 1.0); }),
                knots.end());
    knots_ = knots;

    if (try_closed_form() && validate_closed_form()) {
      closed_form_ = true;
    } else {
      pieces_.clear();
      check_head_quadrature();
      prime_cache();
    }
  }

  static QuadOptions default_opts() {
    QuadOptions o;
    o.abs_tol = 1e-12;
    o.rel_tol = 1e-10;
    o.max_evals = 200000;
    return o;
  }

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (closed_form_) return eval_closed(x);
    return eval_quadrature(x);
  }

  bool closed_form() const { return closed_form_; }
  const std::vector<double>& breakpoints() const { return knots_; }
  const Expr& source() const { return f_; }

 private:
  // Small-x Taylor data for the first piece. Evaluating A(x) - A(0) by
  // subtraction cancels catastrophically once x is tiny (the antiderivative
  // constants are O(1) while F(x) = O(x^2) when f vanishes at 0), so below
  // `radius` the delta is summed as L x + sum_k c_k x^k plus the exact
  // standalone power terms. L is taken from f(0) itself when evaluable:
  // it is the mathematically exact linear coefficient F'(0).
  struct SmallXSeries {
    bool usable = false;
    double linear = 0.0;
    double radius = 0.0;
    std::vector<double> coef;  // coef[k] multiplies x^k, k >= 2
    TermList standalone_powers;
  };

  struct Piece {
    double lo, hi;         // piece bounds; last piece may have hi = inf
    TermList anti;         // antiderivative terms on the piece
    double f_at_lo = 0.0;  // cumulative value at lo
  };

  /// Exact-to-rounding delta of one antiderivative term between lo and x.
  static double term_delta(const BasisTerm& t, double lo, double x) {
    using K = BasisTerm::Kind;
    switch (t.kind) {
      case K::constant:
        return 0.0;  // constants never appear in antiderivatives
      case K::power:
        if (lo == 0.0) return t.coef * std::pow(x, t.expo);
        return t.coef * (std::pow(x, t.expo) - std::pow(lo, t.expo));
      case K::exponential:
        return t.coef * std::exp(t.rate * lo) * std::expm1(t.rate * (x - lo));
      case K::logx:
        return t.coef * std::log(x / std::max(lo, 1e-300));
      case K::shifted_power:
        return t.coef * std::pow(t.shift + lo, t.expo) *
               std::expm1(t.expo * std::log1p((x - lo) / (t.shift + lo)));
      case K::log_shifted:
        return t.coef * std::log1p((x - lo) / (t.shift + lo));
      case K::x_log_x:
        return t.coef * (x * std::log(x) - (lo > 0.0 ? lo * std::log(lo) : 0.0));
      case K::shifted_x_log:
        return t.coef * ((t.shift + x) * std::log(t.shift + x) -
                         (t.shift + lo) * std::log(t.shift + lo));
    }
    return 0.0;
  }

  static double delta_terms(const TermList& terms, double lo, double x) {
    double v = 0.0;
    for (const auto& t : terms) v += term_delta(t, lo, x);
    return v;
  }

  SmallXSeries build_series(const TermList& anti) const {
    using K = BasisTerm::Kind;
    SmallXSeries s;
    constexpr int kOrder = 40;
    s.coef.assign(kOrder + 1, 0.0);
    double max_rate = 0.0;
    double min_shift = kInf;
    for (const auto& t : anti) {
      switch (t.kind) {
        case K::power:
          if (t.expo == 1.0) {
            s.linear += t.coef;
          } else {
            s.standalone_powers.push_back(t);
          }
          break;
        case K::exponential: {
          s.linear += t.coef * t.rate;
          double fk = 1.0;  // rate^k / k!
          for (int k = 2; k <= kOrder; ++k) {
            fk = k == 2 ? t.rate * t.rate / 2.0 : fk * t.rate / k;
            s.coef[k] += t.coef * fk;
          }
          max_rate = std::max(max_rate, std::abs(t.rate));
          break;
        }
        case K::shifted_power: {
          s.linear += t.coef * t.expo * std::pow(t.shift, t.expo - 1.0);
          double binom = t.expo;  // C(e, k) accumulated incrementally
          for (int k = 2; k <= kOrder; ++k) {
            binom *= (t.expo - (k - 1)) / k;
            s.coef[k] += t.coef * binom * std::pow(t.shift, t.expo - k);
          }
          min_shift = std::min(min_shift, t.shift);
          break;
        }
        case K::log_shifted: {
          s.linear += t.coef / t.shift;
          double sign = -1.0;
          for (int k = 2; k <= kOrder; ++k) {
            s.coef[k] += t.coef * sign / (k * std::pow(t.shift, k));
            sign = -sign;
          }
          min_shift = std::min(min_shift, t.shift);
          break;
        }
        default:
          return s;  // log-type terms: stay on the delta path
      }
    }
    // f(0) is the exact linear coefficient F'(0) when it is evaluable.
    try {
      double f0 = f_(0.0);
      if (std::isfinite(f0)) s.linear = f0;
    } catch (const EvalError&) {
    }
    s.radius = 0.4;
    if (max_rate > 0.0) s.radius = std::min(s.radius, 0.4 / max_rate);
    if (std::isfinite(min_shift)) s.radius = std::min(s.radius, 0.4 * min_shift);
    s.usable = true;
    return s;
  }

  double eval_series(const SmallXSeries& s, double x) const {
    double v = s.linear * x;
    double xk = x;
    for (std::size_t k = 2; k < s.coef.size(); ++k) {
      xk *= x;
      v += s.coef[k] * xk;
    }
    for (const auto& t : s.standalone_powers) v += t.coef * std::pow(x, t.expo);
    return v;
  }

  bool try_closed_form() {
    namespace cd = cumulative_detail;
    std::vector<double> edges{0.0};
    for (double k : knots_) edges.push_back(k);
    edges.push_back(kInf);

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double lo = edges[i], hi = edges[i + 1];
      double probe;
      if (lo == 0.0)
        probe = std::isinf(hi) ? 1.0 : hi * 0.37;
      else if (std::isinf(hi))
        probe = lo * 2.718281828 + 1.0;
      else
        probe = std::sqrt(lo * hi);

      Expr resolved = Expr::constant(0.0);
      try {
        resolved = cd::resolve_at(f_, probe);
      } catch (const EvalError&) {
        return false;
      }
      auto terms = linearize(resolved);
      if (!terms) return false;
      TermList anti;
      for (const auto& t : *terms) {
        auto a = antiderivative(t);
        if (!a) return false;
        anti.insert(anti.end(), a->begin(), a->end());
      }

      Piece p;
      p.lo = lo;
      p.hi = hi;
      p.anti = std::move(anti);
      p.f_at_lo = acc;
      if (lo == 0.0) {
        LimitAtZero lim = limit_at_zero(p.anti);
        if (!lim.finite)
          throw CumulativeError(
              "cumulative integral diverges at 0 (exponent <= -1 in node " +
              lim.divergent_origin + ")");
        series_ = build_series(p.anti);
      }
      if (!std::isinf(hi)) acc = p.f_at_lo + delta_terms(p.anti, lo, hi);
      pieces_.push_back(std::move(p));
    }
    return true;
  }

  bool validate_closed_form() const {
    QuadOptions vopts;
    vopts.abs_tol = 1e-9;
    vopts.rel_tol = 1e-7;
    vopts.max_evals = 60000;
    auto raw = [this](double t) { return f_(t); };
    for (double c : {0.31, 1.07, 3.3, 11.4}) {
      if (c >= domain_.hi) continue;
      IntegralEstimate q = integrate_bounded(raw, 0.0, c, vopts, knots_);
      if (q.status != QuadStatus::converged) continue;  // singular head: trust the algebra
      double cf = eval_closed(c);
      if (std::abs(cf - q.value) > 1e-5 * std::max({1.0, std::abs(cf), std::abs(q.value)}))
        return false;
    }
    return true;
  }

  double eval_closed(double x) const {
    // Find the piece containing x.
    std::size_t i = pieces_.size() - 1;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      if (x <= pieces_[k].hi || k + 1 == pieces_.size()) {
        i = k;
        break;
      }
    }
    const Piece& p = pieces_[i];
    if (i == 0 && series_.usable && x <= series_.radius) return eval_series(series_, x);
    return p.f_at_lo + delta_terms(p.anti, p.lo, x);
  }

  void check_head_quadrature() const {
    const double h = knots_.empty() ? 1.0 : std::min(1.0, knots_.front());
    auto mapped = [this](double u) { return f_(1.0 / u) / (u * u); };
    TailClassification tc = classify_tail(mapped, 1.0 / h, 16, 1500);
    if (tc.kind == TailKind::divergent)
      throw CumulativeError("cumulative integral diverges at 0 (head exponent ~ " +
                            format_double(-tc.exponent - 2.0) + " for " + f_.str() + ")");
  }

  void prime_cache() {
    double acc = 0.0;
    double prev = 0.0;
    auto raw = [this](double t) { return f_(t); };
    for (double k : knots_) {
      IntegralEstimate q = integrate_bounded(raw, prev, k, opts_, knots_);
      acc += q.value;
      cache_[k] = acc;
      prev = k;
    }
  }

  double eval_quadrature(double x) const {
    auto raw = [this](double t) { return f_(t); };
    std::lock_guard<std::mutex> lock(cache_mutex_);
    // Nearest cached point at or below x.
    double start = 0.0, base = 0.0;
    auto it = cache_.upper_bound(x);
    if (it != cache_.begin()) {
      --it;
      start = it->first;
      base = it->second;
    }
    if (start == x) return base;
    IntegralEstimate q = integrate_bounded(raw, start, x, opts_, knots_);
    double value = base + q.value;
    if (q.status == QuadStatus::converged && cache_.size() < 4096) cache_[x] = value;
    return value;
  }

  Expr f_;
  Interval domain_;
  QuadOptions opts_;
  std::vector<double> knots_;
  std::vector<Piece> pieces_;
  SmallXSeries series_;
  bool closed_form_ = false;
  mutable std::map<double, double> cache_;
  mutable std::mutex cache_mutex_;
};

}  // namespace hardycheck

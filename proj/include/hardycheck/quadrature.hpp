#pragma once

/// Adaptive quadrature for possibly improper integrals on subintervals of
/// (0, inf). Globally adaptive bisection with a Gauss(7)/Kronrod(15)
/// embedded pair; the segment with the largest error estimate is split
/// first. Nodes are interior, so endpoint singularities (t^-a at 0) are
/// never evaluated. An unbounded upper endpoint is handled by the
/// substitution x = s + t/(1-t) after a dyadic tail probe has classified
/// the tail as integrable. Everything is a pure function of its inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"

namespace hardycheck {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  long max_evals = 1000000;
  double tail_split = 1.0;  // bounded/transformed split point for (lo, inf)

  void validate() const {
    if (!(abs_tol > 0.0)) throw ConstraintError("QuadOptions: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw ConstraintError("QuadOptions: rel_tol must be > 0");
    if (max_evals <= 0) throw ConstraintError("QuadOptions: max_evals must be > 0");
    if (!(tail_split > 0.0)) throw ConstraintError("QuadOptions: tail_split must be > 0");
  }
};

enum class QuadStatus { converged, divergent_suspected, inconclusive };

inline const char* to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::converged: return "converged";
    case QuadStatus::divergent_suspected: return "divergent-suspected";
    case QuadStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct IntegralEstimate {
  double value = 0.0;
  double err_bound = 0.0;
  QuadStatus status = QuadStatus::inconclusive;
  long evals = 0;
  std::string diagnostic;

  bool converged() const { return status == QuadStatus::converged; }
};

enum class TailKind { integrable, divergent, inconclusive };

inline const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::integrable: return "integrable";
    case TailKind::divergent: return "divergent";
    case TailKind::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TailClassification {
  TailKind kind = TailKind::inconclusive;
  double exponent = 0.0;        // fitted power-law exponent of the integrand
  bool super_polynomial = false;
  double partial_sum = 0.0;     // sum of the probed dyadic blocks
  long evals = 0;
  std::string detail;
};

namespace quad_detail {

// 15-point Kronrod nodes (positive half, descending) with the embedded
// 7-point Gauss rule. QUADPACK dqk15 constants.
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWeightsKronrod = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Gauss weights attach to nodes 1, 3, 5, 7 of kNodes.
inline constexpr std::array<double, 4> kWeightsGauss = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value = 0.0;
  double err = 0.0;
  bool eval_failed = false;
  std::string fail_msg;
};

template <class F>
PanelResult gk15(F& f, double a, double b) {
  PanelResult r;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 15> fv{};
  auto eval = [&](double x, double& out) -> bool {
    double y;
    try {
      y = f(x);
    } catch (const EvalError& e) {
      r.eval_failed = true;
      r.fail_msg = std::string("evaluation failed at x=") + std::to_string(x) + ": " + e.what();
      return false;
    }
    if (std::isnan(y)) {
      r.eval_failed = true;
      r.fail_msg = "non-finite integrand value at x=" + std::to_string(x);
      return false;
    }
    if (std::isinf(y)) {
      r.eval_failed = true;
      r.fail_msg = "infinite integrand value at x=" + std::to_string(x);
      return false;
    }
    out = y;
    return true;
  };

  // fv layout: i in [0,7) holds the pair (center - h*node_i, center + h*node_i)
  // at slots 2i and 2i+1; slot 14 is the center.
  for (int i = 0; i < 7; ++i) {
    if (!eval(center - half * kNodes[i], fv[2 * i])) return r;
    if (!eval(center + half * kNodes[i], fv[2 * i + 1])) return r;
  }
  if (!eval(center, fv[14])) return r;

  double resk = kWeightsKronrod[7] * fv[14];
  double resabs = std::abs(resk);
  for (int i = 0; i < 7; ++i) {
    resk += kWeightsKronrod[i] * (fv[2 * i] + fv[2 * i + 1]);
    resabs += kWeightsKronrod[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
  }
  double resg = kWeightsGauss[3] * fv[14];
  for (int i = 0; i < 3; ++i) {
    int j = 2 * i + 1;  // nodes 1, 3, 5
    resg += kWeightsGauss[i] * (fv[2 * j] + fv[2 * j + 1]);
  }

  const double mean = resk * 0.5;
  double resasc = kWeightsKronrod[7] * std::abs(fv[14] - mean);
  for (int i = 0; i < 7; ++i) {
    resasc += kWeightsKronrod[i] *
              (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));
  }

  r.value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * resabs);
  r.err = err;
  return r;
}

struct Segment {
  double a, b, value, err;
  std::uint64_t id;  // insertion order; breaks error ties deterministically
};

struct SegmentWorse {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.id > y.id;
  }
};

inline bool splittable(double a, double b) {
  const double eps = std::numeric_limits<double>::epsilon();
  double mid = 0.5 * (a + b);
  return mid > a && mid < b &&
         (b - a) > 8.0 * eps * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace quad_detail

/// Adaptive integration over a bounded interval, pre-split at the supplied
/// interior breakpoints. Never evaluates the endpoints.
template <class F>
IntegralEstimate integrate_bounded(F&& f, double a, double b, const QuadOptions& opts,
                                   const std::vector<double>& breakpoints = {}) {
  using namespace quad_detail;
  IntegralEstimate out;
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> queue;
  std::vector<Segment> stuck;  // narrower than the round-off floor
  std::uint64_t next_id = 0;
  long evals = 0;

  auto push_panel = [&](double lo, double hi) -> bool {
    PanelResult p = gk15(f, lo, hi);
    evals += 15;
    if (p.eval_failed) {
      out.status = QuadStatus::inconclusive;
      out.diagnostic = p.fail_msg;
      return false;
    }
    Segment s{lo, hi, p.value, p.err, next_id++};
    if (splittable(lo, hi))
      queue.push(s);
    else
      stuck.push_back(s);
    return true;
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!push_panel(cuts[i], cuts[i + 1])) {
      out.evals = evals;
      return out;
    }
  }

  auto totals = [&]() {
    // Exact resummation; the queue is small and this runs rarely.
    double v = 0.0, e = 0.0;
    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> q = queue;
    while (!q.empty()) {
      v += q.top().value;
      e += q.top().err;
      q.pop();
    }
    for (const auto& s : stuck) {
      v += s.value;
      e += s.err;
    }
    return std::pair<double, double>(v, e);
  };

  double value = 0.0, err = 0.0;
  {
    auto [v, e] = totals();
    value = v;
    err = e;
  }

  auto met = [&](double v, double e) {
    return e <= std::max(opts.abs_tol, opts.rel_tol * std::abs(v));
  };

  std::string stop_reason;
  while (!met(value, err)) {
    if (queue.empty()) {
      stop_reason = "round-off floor reached before tolerance";
      break;
    }
    if (evals + 30 > opts.max_evals) {
      stop_reason = "max_evals budget exhausted";
      break;
    }
    Segment worst = queue.top();
    queue.pop();
    value -= worst.value;
    err -= worst.err;
    double mid = 0.5 * (worst.a + worst.b);
    for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      PanelResult p = gk15(f, lo, hi);
      evals += 15;
      if (p.eval_failed) {
        out.status = QuadStatus::inconclusive;
        out.diagnostic = p.fail_msg;
        out.evals = evals;
        return out;
      }
      Segment s{lo, hi, p.value, p.err, next_id++};
      value += p.value;
      err += p.err;
      if (splittable(lo, hi))
        queue.push(s);
      else
        stuck.push_back(s);
    }
    // Guard against drift in the incremental sums.
    if ((next_id & 0x3ff) == 0) {
      auto [v, e] = totals();
      value = v;
      err = e;
    }
  }

  auto [v, e] = totals();
  out.value = v;
  out.err_bound = e;
  out.evals = evals;
  if (met(v, e)) {
    out.status = QuadStatus::converged;
  } else {
    out.status = QuadStatus::inconclusive;
    out.diagnostic = stop_reason.empty() ? "tolerance not met" : stop_reason;
  }
  return out;
}

namespace quad_detail {

/// Classify a sequence of dyadic block integrals that share one sign.
inline void fit_blocks(const std::vector<double>& bk, TailClassification& tc) {
  double amax = 0.0;
  for (double v : bk) amax = std::max(amax, std::abs(v));
  const double tiny = amax * 1e-14 + 1e-305;

  std::size_t last_usable = 0;
  bool any_usable = false;
  for (std::size_t k = 0; k < bk.size(); ++k) {
    if (std::abs(bk[k]) > tiny) {
      last_usable = k;
      any_usable = true;
    }
  }
  if (!any_usable) {
    tc.kind = TailKind::integrable;
    tc.super_polynomial = true;
    tc.exponent = -kInf;
    tc.detail = "tail numerically zero";
    return;
  }

  // Trailing zero blocks after real mass: finite support or extremely fast decay.
  const bool trailing_zeros = last_usable + 2 < bk.size();
  const double sign = bk[last_usable] < 0.0 ? -1.0 : 1.0;

  std::vector<double> logs;
  for (std::size_t k = 0; k <= last_usable; ++k) {
    double m = sign * bk[k];
    if (m <= tiny) break;  // interior near-zero block ends the usable range
    logs.push_back(std::log2(m));
  }

  if (logs.size() < 3) {
    if (trailing_zeros) {
      tc.kind = TailKind::integrable;
      tc.super_polynomial = true;
      tc.exponent = -kInf;
      tc.detail = "tail support ends within the probed range";
      return;
    }
    tc.kind = TailKind::inconclusive;
    tc.detail = "too few usable blocks for a decay fit";
    return;
  }

  // Fit the asymptotic regime: the last half of the usable blocks. Early
  // blocks often straddle a smooth transition (saturating factors) and
  // would spoil the slope.
  const std::size_t n = logs.size();
  const std::size_t fit_n = n >= 8 ? std::max<std::size_t>(4, n / 2) : n;
  const std::size_t fit_0 = n - fit_n;
  double sk = 0, sy = 0, skk = 0, sky = 0;
  for (std::size_t k = fit_0; k < n; ++k) {
    sk += static_cast<double>(k);
    sy += logs[k];
    skk += static_cast<double>(k) * static_cast<double>(k);
    sky += static_cast<double>(k) * logs[k];
  }
  const double nf = static_cast<double>(fit_n);
  const double denom = nf * skk - sk * sk;
  const double slope = (nf * sky - sk * sy) / denom;
  const double icept = (sy - slope * sk) / nf;
  double rms = 0.0;
  for (std::size_t k = fit_0; k < n; ++k) {
    double r = logs[k] - (icept + slope * static_cast<double>(k));
    rms += r * r;
  }
  rms = std::sqrt(rms / nf);

  tc.exponent = slope - 1.0;  // block_k ~ 2^{k(s+1)} for integrand ~ x^s

  const double first_step = logs[1] - logs[0];
  const double last_step = logs[n - 1] - logs[n - 2];
  const bool steepening = last_step <= first_step - 2.0 && last_step <= -3.0;
  if (steepening || trailing_zeros) {
    tc.kind = TailKind::integrable;
    tc.super_polynomial = true;
    tc.detail = trailing_zeros ? "tail support ends within the probed range"
                               : "super-polynomial decay";
    return;
  }

  constexpr double margin = 0.05;
  if (rms > 0.5) {
    tc.kind = TailKind::inconclusive;
    tc.detail = "poor power-law fit (rms " + std::to_string(rms) + ")";
    return;
  }
  if (tc.exponent < -1.0 - margin) {
    tc.kind = TailKind::integrable;
    tc.detail = "power-law decay";
  } else {
    tc.kind = TailKind::divergent;
    tc.detail = "tail decays no faster than 1/x";
  }
}

inline bool mixed_signs(const std::vector<double>& bk) {
  double amax = 0.0;
  for (double v : bk) amax = std::max(amax, std::abs(v));
  const double tiny = amax * 1e-14 + 1e-305;
  int pos = 0, neg = 0;
  for (double v : bk) {
    if (v > tiny) ++pos;
    if (v < -tiny) ++neg;
  }
  return pos > 0 && neg > 0;
}

}  // namespace quad_detail

/// Dyadic tail probe: integrates blocks [from*2^k, from*2^(k+1)] for
/// k = 0..blocks and fits the block decay. A fitted integrand exponent
/// below -1 (with margin) or super-polynomial decay means integrable.
/// Mixed-sign blocks fall back to an |f| probe: absolute convergence is
/// still reported integrable, anything else is inconclusive.
template <class F>
TailClassification classify_tail(F&& f, double from, int blocks = 20,
                                 long evals_per_block = 3000) {
  TailClassification tc;
  if (!(from > 0.0)) throw ConstraintError("classify_tail: from must be > 0");

  QuadOptions block_opts;
  block_opts.abs_tol = 1e-14;
  block_opts.rel_tol = 1e-6;
  block_opts.max_evals = evals_per_block;

  auto probe = [&](auto&& fn, std::vector<double>& out, std::string& fail) {
    double lo = from;
    for (int k = 0; k <= blocks; ++k) {
      double hi = lo * 2.0;
      if (std::isinf(hi)) break;
      IntegralEstimate est = integrate_bounded(fn, lo, hi, block_opts);
      tc.evals += est.evals;
      if (!est.diagnostic.empty() && est.diagnostic.find("evaluation") != std::string::npos &&
          est.status == QuadStatus::inconclusive) {
        fail = "block " + std::to_string(k) + ": " + est.diagnostic;
        return false;
      }
      out.push_back(est.value);
      lo = hi;
    }
    return true;
  };

  std::vector<double> bk;
  std::string fail;
  if (!probe(f, bk, fail)) {
    tc.kind = TailKind::inconclusive;
    tc.detail = fail;
    return tc;
  }
  for (double v : bk) tc.partial_sum += v;

  if (!quad_detail::mixed_signs(bk)) {
    quad_detail::fit_blocks(bk, tc);
    return tc;
  }

  // One or more sign changes: probe |f| for absolute convergence.
  auto absf = [&f](double x) { return std::abs(f(x)); };
  std::vector<double> abk;
  if (!probe(absf, abk, fail)) {
    tc.kind = TailKind::inconclusive;
    tc.detail = fail;
    return tc;
  }
  quad_detail::fit_blocks(abk, tc);
  if (tc.kind == TailKind::integrable) {
    tc.detail = "absolutely convergent (" + tc.detail + ")";
  } else {
    tc.kind = TailKind::inconclusive;
    tc.detail = "oscillating-sign blocks";
  }
  return tc;
}

/// Where the dyadic tail probe (and the bounded/transformed partition)
/// starts for an integral over (lo, inf): past tail_split and past the last
/// structural breakpoint, so the probe sees only the asymptotic regime.
inline double tail_start(const Interval& iv, const QuadOptions& opts,
                         const std::vector<double>& breakpoints) {
  double from = std::max({iv.lo, opts.tail_split, 1e-12});
  for (double b : breakpoints)
    if (std::isfinite(b)) from = std::max(from, b * (1.0 + 1e-6));
  return from;
}

/// Integrate f over iv with the given options. Interior breakpoints (jumps,
/// kinks) pre-split the adaptive grid. For an unbounded upper endpoint the
/// tail beyond tail_start() is classified first; a divergent or
/// unclassifiable tail short-circuits to the corresponding status. If the
/// caller already classified the tail (from the same tail_start), pass it
/// to skip the re-probe.
template <class F>
IntegralEstimate integrate(F&& f, const Interval& iv, const QuadOptions& opts = {},
                           const std::vector<double>& breakpoints = {},
                           const TailClassification* known_tail = nullptr) {
  opts.validate();
  if (!iv.unbounded()) return integrate_bounded(f, iv.lo, iv.hi, opts, breakpoints);

  const double split = tail_start(iv, opts, breakpoints);

  TailClassification tc;
  if (known_tail != nullptr) {
    tc = *known_tail;
  } else {
    tc = classify_tail(f, split, 20, std::min<long>(3000, std::max<long>(150, opts.max_evals / 40)));
  }

  IntegralEstimate out;
  out.evals = (known_tail == nullptr) ? tc.evals : 0;

  if (tc.kind == TailKind::divergent) {
    QuadOptions head_opts = opts;
    head_opts.max_evals = std::max<long>(1000, opts.max_evals / 10);
    double head = 0.0;
    if (iv.lo < split) {
      IntegralEstimate h = integrate_bounded(f, iv.lo, split, head_opts, breakpoints);
      out.evals += h.evals;
      head = h.value;
    }
    out.value = head + tc.partial_sum;
    out.err_bound = kInf;
    out.status = QuadStatus::divergent_suspected;
    out.diagnostic = "tail beyond " + std::to_string(split) +
                     " looks divergent (exponent ~ " + std::to_string(tc.exponent) +
                     "); value is the partial integral over the probed range";
    return out;
  }
  if (tc.kind == TailKind::inconclusive) {
    out.status = QuadStatus::inconclusive;
    out.diagnostic = "tail classification inconclusive: " + tc.detail;
    return out;
  }

  QuadOptions part = opts;
  part.abs_tol = 0.5 * opts.abs_tol;
  part.rel_tol = 0.5 * opts.rel_tol;

  IntegralEstimate head;
  head.status = QuadStatus::converged;
  if (iv.lo < split) {
    part.max_evals = (opts.max_evals - out.evals) / 2;
    head = integrate_bounded(f, iv.lo, split, part, breakpoints);
    out.evals += head.evals;
    if (head.status == QuadStatus::inconclusive && !head.diagnostic.empty() &&
        head.diagnostic.find("evaluation") != std::string::npos) {
      out.status = QuadStatus::inconclusive;
      out.diagnostic = head.diagnostic;
      return out;
    }
  }

  // Decay rate of the tail integrand, from the dyadic probe.
  const double decay = tc.super_polynomial ? kInf : -(tc.exponent + 1.0);

  part.max_evals = opts.max_evals - out.evals;
  IntegralEstimate tail;
  if (decay >= 2.0) {
    // Fast decay: x = split + t/(1-t) resolves everything that matters.
    auto mapped = [&f, split](double t) -> double {
      const double omt = 1.0 - t;
      if (omt < 1e-14) return 0.0;
      const double x = split + t / omt;
      return f(x) / (omt * omt);
    };
    std::vector<double> mapped_cuts;
    for (double c : breakpoints) {
      if (c > split && std::isfinite(c)) {
        double d = c - split;
        mapped_cuts.push_back(d / (1.0 + d));
      }
    }
    tail = integrate_bounded(mapped, 0.0, 1.0, part, mapped_cuts);
  } else {
    // Slow power-law decay x^s, s = exponent: the rational map cannot reach
    // past x ~ 1/eps, so use x = split * u^-k with k large enough that the
    // u-space integrand ~ u^(k(-s-1)-1) stays integrable with margin.
    const double k =
        std::min(24.0, std::max(1.0, std::ceil(1.2 / std::max(decay, 0.05))));
    auto mapped = [&f, split, k](double u) -> double {
      const double x = split * std::pow(u, -k);
      if (!std::isfinite(x) || x > 1e290) return 0.0;
      return f(x) * split * k * std::pow(u, -k - 1.0);
    };
    std::vector<double> mapped_cuts;
    for (double c : breakpoints)
      if (c > split && std::isfinite(c)) mapped_cuts.push_back(std::pow(split / c, 1.0 / k));
    tail = integrate_bounded(mapped, 0.0, 1.0, part, mapped_cuts);
  }
  out.evals += tail.evals;
  if (tail.status == QuadStatus::inconclusive && !tail.diagnostic.empty() &&
      tail.diagnostic.find("evaluation") != std::string::npos) {
    out.status = QuadStatus::inconclusive;
    out.diagnostic = tail.diagnostic;
    return out;
  }

  out.value = head.value + tail.value;
  out.err_bound = head.err_bound + tail.err_bound;
  if (out.err_bound <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value))) {
    out.status = QuadStatus::converged;
  } else {
    out.status = QuadStatus::inconclusive;
    out.diagnostic = head.status != QuadStatus::converged ? head.diagnostic : tail.diagnostic;
    if (out.diagnostic.empty()) out.diagnostic = "combined error above tolerance";
  }
  return out;
}

}  // namespace hardycheck

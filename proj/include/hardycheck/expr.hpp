#pragma once

/// Immutable expression trees for test functions of one positive real
/// variable. Node kinds: constant, variable, sum, product, power with a
/// real exponent (covers x^a and composition with a power), exp, log,
/// min/max, and truncation to a window [c,d] in x (zero outside). Sums and
/// products are n-ary and auto-flattened so that render/parse round-trips
/// reproduce identical trees.

#include <array>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hardycheck {

enum class NodeKind {
  constant,
  variable,
  sum,
  product,
  power,
  exponential,
  logarithm,
  minimum,
  maximum,
  truncate
};

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::constant: return "constant";
    case NodeKind::variable: return "variable";
    case NodeKind::sum: return "sum";
    case NodeKind::product: return "product";
    case NodeKind::power: return "power";
    case NodeKind::exponential: return "exp";
    case NodeKind::logarithm: return "log";
    case NodeKind::minimum: return "min";
    case NodeKind::maximum: return "max";
    case NodeKind::truncate: return "trunc";
  }
  return "?";
}

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double c) {
    if (!std::isfinite(c)) throw ConstraintError("Expr: constants must be finite");
    Node n;
    n.kind = NodeKind::constant;
    n.value = c;
    return Expr(std::move(n));
  }

  static Expr variable() {
    Node n;
    n.kind = NodeKind::variable;
    return Expr(std::move(n));
  }

  static Expr sum(std::vector<Expr> terms) { return nary(NodeKind::sum, std::move(terms)); }

  static Expr product(std::vector<Expr> factors) {
    return nary(NodeKind::product, std::move(factors));
  }

  static Expr power(Expr base, double exponent) {
    if (!std::isfinite(exponent)) throw ConstraintError("Expr: exponent must be finite");
    Node n;
    n.kind = NodeKind::power;
    n.exponent = exponent;
    n.kids.push_back(std::move(base));
    return Expr(std::move(n));
  }

  static Expr exponential(Expr child) { return unary(NodeKind::exponential, std::move(child)); }
  static Expr logarithm(Expr child) { return unary(NodeKind::logarithm, std::move(child)); }

  static Expr minimum(Expr a, Expr b) { return binary(NodeKind::minimum, std::move(a), std::move(b)); }
  static Expr maximum(Expr a, Expr b) { return binary(NodeKind::maximum, std::move(a), std::move(b)); }

  static Expr truncate(Expr child, double lo, double hi) {
    if (!(lo >= 0.0) || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw ConstraintError("Expr: truncation window needs 0 <= lo < hi < inf");
    Node n;
    n.kind = NodeKind::truncate;
    n.window_lo = lo;
    n.window_hi = hi;
    n.kids.push_back(std::move(child));
    return Expr(std::move(n));
  }

  static Expr negate(Expr e) {
    if (e.kind() == NodeKind::constant) return constant(-e.constant_value());
    return product({constant(-1.0), std::move(e)});
  }

  NodeKind kind() const { return node_->kind; }
  double constant_value() const { return node_->value; }
  double exponent() const { return node_->exponent; }
  double window_lo() const { return node_->window_lo; }
  double window_hi() const { return node_->window_hi; }
  const std::vector<Expr>& children() const { return node_->kids; }

  /// Evaluate at x. Throws EvalError (with the offending node path) on any
  /// non-finite intermediate.
  double operator()(double x) const { return eval(*node_, x); }

  /// Render to grammar text. parse(str()) reconstructs an identical tree.
  std::string str() const {
    std::string out;
    render(*node_, out);
    return out;
  }

  bool same_tree(const Expr& other) const { return same(*node_, *other.node_); }

  bool is_constant_tree() const { return constant_only(*node_); }

 private:
  struct Node {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;      // constant
    double exponent = 0.0;   // power
    double window_lo = 0.0;  // truncate
    double window_hi = 0.0;
    std::vector<Expr> kids;
  };

  explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static Expr nary(NodeKind kind, std::vector<Expr> kids) {
    std::vector<Expr> flat;
    for (auto& k : kids) {
      if (k.kind() == kind) {
        for (const auto& sub : k.children()) flat.push_back(sub);
      } else {
        flat.push_back(std::move(k));
      }
    }
    if (flat.empty()) throw ConstraintError("Expr: n-ary node needs at least one child");
    if (flat.size() == 1) return flat.front();
    Node n;
    n.kind = kind;
    n.kids = std::move(flat);
    return Expr(std::move(n));
  }

  static Expr unary(NodeKind kind, Expr child) {
    Node n;
    n.kind = kind;
    n.kids.push_back(std::move(child));
    return Expr(std::move(n));
  }

  static Expr binary(NodeKind kind, Expr a, Expr b) {
    Node n;
    n.kind = kind;
    n.kids.push_back(std::move(a));
    n.kids.push_back(std::move(b));
    return Expr(std::move(n));
  }

  static double eval(const Node& n, double x) {
    double v = 0.0;
    switch (n.kind) {
      case NodeKind::constant:
        return n.value;
      case NodeKind::variable:
        return x;
      case NodeKind::sum: {
        v = 0.0;
        for (std::size_t i = 0; i < n.kids.size(); ++i) v += eval_child(n, i, x);
        break;
      }
      case NodeKind::product: {
        v = 1.0;
        for (std::size_t i = 0; i < n.kids.size(); ++i) v *= eval_child(n, i, x);
        break;
      }
      case NodeKind::power:
        v = std::pow(eval_child(n, 0, x), n.exponent);
        break;
      case NodeKind::exponential:
        v = std::exp(eval_child(n, 0, x));
        break;
      case NodeKind::logarithm:
        v = std::log(eval_child(n, 0, x));
        break;
      case NodeKind::minimum:
        v = std::min(eval_child(n, 0, x), eval_child(n, 1, x));
        break;
      case NodeKind::maximum:
        v = std::max(eval_child(n, 0, x), eval_child(n, 1, x));
        break;
      case NodeKind::truncate:
        if (x < n.window_lo || x > n.window_hi) return 0.0;
        v = eval_child(n, 0, x);
        break;
    }
    if (!std::isfinite(v))
      throw EvalError(to_string(n.kind), x,
                      std::string("non-finite value in node '") + to_string(n.kind) +
                          "' at x=" + format_double(x));
    return v;
  }

  static double eval_child(const Node& n, std::size_t i, double x) {
    try {
      return eval(*n.kids[i].node_, x);
    } catch (EvalError& e) {
      // Extend the node path on the way out; allocation happens only on error.
      e.node_path = std::string(to_string(n.kind)) + "[" + std::to_string(i) + "]." + e.node_path;
      throw;
    }
  }

  static bool atomic(const Node& n) {
    return n.kind == NodeKind::constant || n.kind == NodeKind::variable ||
           n.kind == NodeKind::exponential || n.kind == NodeKind::logarithm ||
           n.kind == NodeKind::minimum || n.kind == NodeKind::maximum ||
           n.kind == NodeKind::truncate;
  }

  static void render(const Node& n, std::string& out) {
    switch (n.kind) {
      case NodeKind::constant:
        out += format_double(n.value);
        return;
      case NodeKind::variable:
        out += "x";
        return;
      case NodeKind::sum:
      case NodeKind::product: {
        const char* op = n.kind == NodeKind::sum ? " + " : " * ";
        out += "(";
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i) out += op;
          render(*n.kids[i].node_, out);
        }
        out += ")";
        return;
      }
      case NodeKind::power: {
        const Node& base = *n.kids[0].node_;
        if (atomic(base) && !(base.kind == NodeKind::constant && base.value < 0)) {
          render(base, out);
        } else {
          out += "(";
          render(base, out);
          out += ")";
        }
        out += "^";
        if (n.exponent < 0) {
          out += "(" + format_double(n.exponent) + ")";
        } else {
          out += format_double(n.exponent);
        }
        return;
      }
      case NodeKind::exponential:
      case NodeKind::logarithm:
        out += n.kind == NodeKind::exponential ? "exp(" : "log(";
        render(*n.kids[0].node_, out);
        out += ")";
        return;
      case NodeKind::minimum:
      case NodeKind::maximum:
        out += n.kind == NodeKind::minimum ? "min(" : "max(";
        render(*n.kids[0].node_, out);
        out += ", ";
        render(*n.kids[1].node_, out);
        out += ")";
        return;
      case NodeKind::truncate:
        out += "trunc(";
        render(*n.kids[0].node_, out);
        out += ", " + format_double(n.window_lo) + ", " + format_double(n.window_hi) + ")";
        return;
    }
  }

  static bool same(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == NodeKind::constant && a.value != b.value) return false;
    if (a.kind == NodeKind::power && a.exponent != b.exponent) return false;
    if (a.kind == NodeKind::truncate &&
        (a.window_lo != b.window_lo || a.window_hi != b.window_hi))
      return false;
    if (a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
      if (!same(*a.kids[i].node_, *b.kids[i].node_)) return false;
    return true;
  }

  static bool constant_only(const Node& n) {
    if (n.kind == NodeKind::variable) return false;
    for (const auto& k : n.kids)
      if (!constant_only(*k.node_)) return false;
    return true;
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace hardycheck

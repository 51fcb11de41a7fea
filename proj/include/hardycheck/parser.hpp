#pragma once

/// Recursive-descent parser for the expression grammar:
///
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := '-' factor | powexpr
///   powexpr := atom ('^' factor)?          exponent must fold to a constant
///   atom    := number | 'x' | 'exp' '(' expr ')' | 'log' '(' expr ')'
///            | 'min' '(' expr ',' expr ')' | 'max' '(' expr ',' expr ')'
///            | 'trunc' '(' expr ',' const ',' const ')' | '(' expr ')'
///
/// Whitespace is insignificant. Division a/b becomes a * b^(-1).

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "expr.hpp"

namespace hardycheck {

namespace parse_detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
  }

  Expr expr() {
    std::vector<Expr> terms;
    terms.push_back(term());
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        terms.push_back(term());
      } else if (c == '-') {
        ++pos_;
        terms.push_back(Expr::negate(term()));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors;
    factors.push_back(factor());
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        factors.push_back(factor());
      } else if (c == '/') {
        ++pos_;
        factors.push_back(Expr::power(factor(), -1.0));
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr factor() {
    if (accept('-')) return Expr::negate(factor());
    return powexpr();
  }

  Expr powexpr() {
    Expr base = atom();
    if (peek() == '^') {
      ++pos_;
      std::size_t expo_pos = pos_;
      Expr e = factor();
      if (!e.is_constant_tree())
        throw ParseError(expo_pos, "exponent must fold to a constant");
      return Expr::power(std::move(base), e(0.0));
    }
    return base;
  }

  Expr atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')', "to close parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return Expr::constant(v);
  }

  Expr identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);

    if (name == "x") return Expr::variable();
    if (name == "exp" || name == "log") {
      expect('(', "after function name");
      Expr arg = expr();
      expect(')', "to close function call");
      return name == "exp" ? Expr::exponential(std::move(arg))
                           : Expr::logarithm(std::move(arg));
    }
    if (name == "min" || name == "max") {
      expect('(', "after function name");
      Expr a = expr();
      expect(',', "between arguments");
      Expr b = expr();
      expect(')', "to close function call");
      return name == "min" ? Expr::minimum(std::move(a), std::move(b))
                           : Expr::maximum(std::move(a), std::move(b));
    }
    if (name == "trunc") {
      expect('(', "after function name");
      Expr inner = expr();
      expect(',', "between arguments");
      double lo = const_arg();
      expect(',', "between arguments");
      double hi = const_arg();
      expect(')', "to close function call");
      if (!(lo >= 0.0) || !(lo < hi))
        throw ParseError(start, "trunc window needs 0 <= lo < hi");
      return Expr::truncate(std::move(inner), lo, hi);
    }
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }

  double const_arg() {
    std::size_t at = pos_;
    Expr e = expr();
    if (!e.is_constant_tree()) throw ParseError(at, "argument must be a constant");
    return e(0.0);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace parse_detail

inline Expr parse(std::string_view text) { return parse_detail::Parser(text).run(); }

}  // namespace hardycheck

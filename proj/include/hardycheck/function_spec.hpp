#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"
#include "interval.hpp"

namespace hardycheck {

enum class CertStatus { verified_numeric, refuted, asserted, inconclusive };

inline const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::verified_numeric: return "verified-numeric";
    case CertStatus::refuted: return "refuted";
    case CertStatus::asserted: return "asserted";
    case CertStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

/// A point (or point pair, for two-point properties) where a property check
/// found its worst violation.
struct Witness {
  double x = 0.0;
  std::optional<double> y;
};

struct Certificate {
  std::string property;
  CertStatus status = CertStatus::inconclusive;
  std::string grid;  // description of the sample points used
  std::optional<Witness> witness;
  std::string detail;

  bool passed() const {
    return status == CertStatus::verified_numeric || status == CertStatus::asserted;
  }
};

/// An expression together with its declared structural properties and the
/// numeric certificates backing them.
struct FunctionSpec {
  Expr expr;
  Interval domain = Interval::positive_axis();
  std::vector<std::string> declared_props;
  std::vector<Certificate> certificates;
  std::string label;  // family name or source text, carried into reports

  FunctionSpec() = default;
  FunctionSpec(Expr e, Interval d, std::vector<std::string> props = {}, std::string lbl = {})
      : expr(std::move(e)), domain(d), declared_props(std::move(props)), label(std::move(lbl)) {}

  const Certificate* find_certificate(const std::string& property) const {
    for (const auto& c : certificates)
      if (c.property == property) return &c;
    return nullptr;
  }
};

}  // namespace hardycheck

#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace hardycheck {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A subinterval of [0, +inf). The upper endpoint may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = kInf;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (std::isnan(lo) || std::isnan(hi))
      throw ConstraintError("Interval: endpoints must not be NaN");
    if (!(lo >= 0.0))
      throw ConstraintError("Interval: lower endpoint must be >= 0");
    if (!(lo < hi))
      throw ConstraintError("Interval: need lo < hi");
  }

  static Interval positive_axis() { return Interval(0.0, kInf); }

  bool unbounded() const { return std::isinf(hi); }
  bool contains(double x) const { return x > lo && x < hi; }

  std::string str() const {
    std::ostringstream os;
    os << "(" << lo << ", ";
    if (unbounded())
      os << "inf)";
    else
      os << hi << ")";
    return os.str();
  }
};

}  // namespace hardycheck

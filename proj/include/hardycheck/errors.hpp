#pragma once

#include <stdexcept>
#include <string>

namespace hardycheck {

/// Expression evaluation produced a non-finite intermediate. Carries the
/// path of the offending node (e.g. "product[1].power").
struct EvalError : std::runtime_error {
  std::string node_path;
  double at_x;
  EvalError(std::string path, double x, const std::string& what)
      : std::runtime_error(what), node_path(std::move(path)), at_x(x) {}
};

/// Text did not conform to the expression grammar. `position` is a 0-based
/// byte offset into the input.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// A parameter violated an inequality entry's constraint set. The message
/// names the violated constraint.
struct ConstraintError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A required function slot is missing or its hypothesis certificate failed.
struct BindingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A lemma's premises could not be certified, so its conclusion is not tested.
struct PremiseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The admissible-function sampler exhausted its retry budget.
struct SampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cumulative integral does not exist (divergence at the lower endpoint).
struct CumulativeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment configuration is malformed (unknown key, bad value, missing field).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hardycheck

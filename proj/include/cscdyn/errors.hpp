#pragma once

#include <stdexcept>
#include <string>

namespace cscdyn {

/// Argument outside the mathematical domain of an operation (negative density,
/// non-finite input, mismatched array sizes, degenerate geometry).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An equation that has no solution for the given data, e.g. k(v) = a with a > k(0).
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an analysis routine does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotImplementedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Time integration could not continue. Carries the last time at which the
/// state was still finite and accepted.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : std::runtime_error(what + " (last good time " + std::to_string(last_good_time) + ")"),
        last_good_time_(last_good_time) {}

  [[nodiscard]] double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Slow-manifold construction failed at a specific abscissa.
class CurveError : public std::runtime_error {
 public:
  CurveError(const std::string& what, double u)
      : std::runtime_error(what + " at u = " + std::to_string(u)), u_(u) {}

  [[nodiscard]] double u() const noexcept { return u_; }

 private:
  double u_;
};

/// The graph ODE of the slow manifold hit a vanishing denominator.
class SingularPointError : public CurveError {
 public:
  using CurveError::CurveError;
};

/// Invalid experiment configuration. The message names the key and constraint.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cscdyn

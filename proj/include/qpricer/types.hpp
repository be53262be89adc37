#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace qpricer {

// Thrown when a constructor or operation receives parameters outside its
// documented domain (non-positive rates, negative deviations, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a requested load would put the queue at or beyond saturation.
class InstabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root bracketing failures: no sign change over the requested interval.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// More than one sign change detected where a unique root was promised.
class AmbiguousRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was asked for in a service-level region where it is undefined.
class RegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A best-response problem has an empty feasible set for the given strategy.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration errors carry the offending field name for CLI diagnostics.
class ConfigError : public InvalidParameter {
 public:
  ConfigError(std::string field, const std::string& message)
      : InvalidParameter(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Loads closer to saturation than this (relative to mu) are rejected instead
// of being returned as huge-but-finite waits; root finders downstream need
// clean domains.
inline constexpr double kStabilityMargin = 1e-12;

// Ratio of priority accumulation weights, beta = b_s / b_p.  beta = 0 is
// static priority to the primary class, beta = 1 is global FCFS, and
// beta = infinity (a first-class value, not a large float) is static
// priority to the secondary class.
class PriorityRatio {
 public:
  PriorityRatio(double value) : value_(value) {
    if (!(value >= 0.0))  // also rejects NaN
      throw InvalidParameter("PriorityRatio must be >= 0");
  }

  static PriorityRatio infinity() {
    return PriorityRatio(std::numeric_limits<double>::infinity());
  }

  double value() const { return value_; }
  bool is_infinite() const { return std::numeric_limits<double>::infinity() == value_; }

  friend bool operator==(PriorityRatio a, PriorityRatio b) { return a.value_ == b.value_; }
  friend bool operator<(PriorityRatio a, PriorityRatio b) { return a.value_ < b.value_; }
  friend bool operator<=(PriorityRatio a, PriorityRatio b) { return a.value_ <= b.value_; }

 private:
  double value_;
};

}  // namespace qpricer

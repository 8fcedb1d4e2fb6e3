#pragma once

#include <stdexcept>
#include <string>

namespace relscm {

/// A factor level lies outside the cardinality declared by the parameter vector.
class CardinalityError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative time, nonpositive scale, probability level outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent observations (missing y0, regime mismatch, bad CSV row).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration, generator spec, fit spec or query.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced NaN or infinity where a finite value is required.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Slope of the linear degradation term is not positive, so the threshold is never reached.
class NonFailingTrajectoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// More than the tolerated fraction of posterior draws failed a per-draw computation.
class DrawFailureError : public std::runtime_error {
 public:
  DrawFailureError(const std::string& what, std::size_t failed, std::size_t total)
      : std::runtime_error(what), failed_(failed), total_(total) {}
  std::size_t failed() const { return failed_; }
  std::size_t total() const { return total_; }

 private:
  std::size_t failed_;
  std::size_t total_;
};

}  // namespace relscm

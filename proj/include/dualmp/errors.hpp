#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dualmp {

/// Adaptive quadrature gave up before reaching the requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_estimate)
      : std::runtime_error(what), achieved_(achieved_estimate) {}
  double achieved_estimate() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A value left the representable range (bracket search, overflow of H).
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// The mountain-pass geometry could not be established (no endpoint with J < 0).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dualmp

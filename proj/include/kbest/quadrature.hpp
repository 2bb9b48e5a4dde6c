#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace kbest::quad {

/// Raised when the refinement budget runs out before the error estimate
/// meets the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double value, double error)
      : std::runtime_error(what), value_(value), error_(error) {}
  double value() const { return value_; }
  double error() const { return error_; }

 private:
  double value_;
  double error_;
};

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod on [lo, hi]. The interval with
/// the largest error estimate is bisected until
/// total_error <= max(abs_tol, rel_tol * |value|).
Result integrate(const Integrand& f, double lo, double hi, const Options& opts = {});

/// Integral over [lo, inf) through t = lo + scale * s / (1 - s), s in [0, 1).
Result integrate_to_infinity(const Integrand& f, double lo, double scale = 1.0,
                             const Options& opts = {});

}  // namespace kbest::quad

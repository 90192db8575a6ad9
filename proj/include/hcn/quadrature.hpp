#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Controls for the adaptive 1-D integrator.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    // Semi-infinite integrands with a known power tail may be truncated here
    // instead of using the rational transform; see integrate_truncated().
    double truncation_radius = 1e4;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

/// Thrown when the subdivision budget is exhausted before the tolerance is
/// met; carries the best estimate so far.
class AccuracyError : public std::runtime_error {
  public:
    AccuracyError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_(best), err_(err) {}
    double best_estimate() const { return best_; }
    double error_estimate() const { return err_; }

  private:
    double best_;
    double err_;
};

/// Adaptive Gauss-Kronrod 15(7) integration of f over [lo, hi].
/// hi may be kInfinity, in which case x = lo + t/(1-t) maps the range onto
/// [0,1). Deterministic: identical inputs give bit-identical results.
QuadResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                        const QuadratureSpec& spec = {});

/// Integrates f over [lo, inf) by truncating at spec.truncation_radius and
/// adding a tail bound for integrands decaying like tail_coeff * x^(-p),
/// p > 1. The tail estimate is added to the value and to the error.
QuadResult integrate_truncated(const std::function<double(double)>& f, double lo,
                               double tail_coeff, double tail_power,
                               const QuadratureSpec& spec = {});

}  // namespace hcn

#pragma once

#include <functional>
#include <vector>

namespace hcn {

/// Monotone cubic (Fritsch-Carlson) interpolant on fixed nodes. No overshoot
/// between nodes, which keeps cached PGFL profiles inside (0, 1].
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

  private:
    std::vector<double> x_, y_, d_;
};

/// Samples fn on a log-spaced grid over [lo, hi] (lo > 0) and interpolates.
Pchip build_log_cache(const std::function<double(double)>& fn, double lo, double hi, int nodes);

}  // namespace hcn

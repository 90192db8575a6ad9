#include "hcn/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcn {

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("Pchip: need >= 2 matching nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("Pchip: nodes must increase");
    d_.resize(n);
    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        slope[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_[0] = slope[0];
    d_[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    // clamp endpoint derivatives (Fritsch-Carlson condition)
    for (std::size_t i : {std::size_t(0), n - 1}) {
        const double s = (i == 0) ? slope[0] : slope[n - 2];
        if (s == 0.0)
            d_[i] = 0.0;
        else if (d_[i] / s < 0.0)
            d_[i] = 0.0;
        else if (std::fabs(d_[i]) > 3.0 * std::fabs(s))
            d_[i] = 3.0 * s;
    }
}

double Pchip::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

Pchip build_log_cache(const std::function<double(double)>& fn, double lo, double hi, int nodes) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("build_log_cache: bad range");
    if (nodes < 2) throw std::invalid_argument("build_log_cache: need >= 2 nodes");
    std::vector<double> x(nodes), y(nodes);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < nodes; ++i) {
        x[i] = lo * std::exp(ratio * static_cast<double>(i) / (nodes - 1));
        y[i] = fn(x[i]);
    }
    x.back() = hi;
    return Pchip(std::move(x), std::move(y));
}

}  // namespace hcn

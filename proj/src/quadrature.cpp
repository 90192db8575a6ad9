#include "hcn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hcn {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    if (!(truncation_radius > 0.0))
        throw std::invalid_argument("QuadratureSpec: truncation_radius must be positive");
}

namespace {

// 15-point Kronrod nodes with embedded 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    double value;
    double error;
};

// Kronrod estimate and Gauss-Kronrod difference as error proxy.
Interval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double result_g = fc * kWg[3];
    double result_k = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        result_k += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) result_g += kWg[i / 2] * (f1 + f2);
    }
    result_k *= h;
    result_g *= h;
    const double diff = std::fabs(result_k - result_g);
    // QUADPACK-style sharpening of the raw difference.
    double err = diff;
    if (diff > 0.0) err = std::min(diff, std::pow(200.0 * diff, 1.5));
    return {a, b, result_k, err};
}

QuadResult adapt(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    std::vector<Interval> heap;
    auto less_err = [](const Interval& x, const Interval& y) { return x.error < y.error; };
    heap.push_back(gk15(f, lo, hi));
    double total_value = heap[0].value;
    double total_error = heap[0].error;
    int subdivisions = 0;
    while (total_error > std::max(spec.rel_tol * std::fabs(total_value), spec.abs_tol)) {
        if (subdivisions >= spec.max_subdivisions) {
            throw AccuracyError("integrate_1d: subdivision budget exhausted", total_value,
                                total_error);
        }
        std::pop_heap(heap.begin(), heap.end(), less_err);
        const Interval worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            throw AccuracyError("integrate_1d: interval too small to bisect", total_value,
                                total_error);
        }
        const Interval left = gk15(f, worst.a, mid);
        const Interval right = gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), less_err);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), less_err);
        ++subdivisions;
    }
    return {total_value, total_error, subdivisions};
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                        const QuadratureSpec& spec) {
    spec.validate();
    if (std::isinf(hi)) {
        // x = lo + t/(1-t) maps [0,1) onto [lo,inf); dx = dt/(1-t)^2.
        auto g = [&f, lo](double t) {
            const double om = 1.0 - t;
            const double x = lo + t / om;
            return f(x) / (om * om);
        };
        return adapt(g, 0.0, 1.0, spec);
    }
    if (hi == lo) return {0.0, 0.0, 0};
    return adapt(f, lo, hi, spec);
}

QuadResult integrate_truncated(const std::function<double(double)>& f, double lo,
                               double tail_coeff, double tail_power,
                               const QuadratureSpec& spec) {
    spec.validate();
    if (!(tail_power > 1.0))
        throw std::invalid_argument("integrate_truncated: tail power must exceed 1");
    const double hi = spec.truncation_radius;
    if (hi <= lo) throw std::invalid_argument("integrate_truncated: radius below lower limit");
    QuadResult r = integrate_1d(f, lo, hi, spec);
    // integral of tail_coeff * x^(-p) over [hi, inf)
    const double tail = tail_coeff * std::pow(hi, 1.0 - tail_power) / (tail_power - 1.0);
    r.value += tail;
    r.error += std::fabs(tail);
    return r;
}

}  // namespace hcn

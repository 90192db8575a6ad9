#include "hcn/special.hpp"

#include <cmath>
#include <stdexcept>

namespace hcn {

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_positive(double x) {
    if (x < 0.5) {
        // Reflection keeps the series argument away from the poles.
        return kPi / (std::sin(kPi * x) * gamma_positive(1.0 - x));
    }
    x -= 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
    const double t = x + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

bool is_nonpositive_integer(double c) {
    return c <= 0.0 && c == std::floor(c);
}

// Series sum of 2F1 at argument z in [0, 1) or (-1, 0]; terms by recurrence.
double hyp_series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 20000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::fabs(term) < 1e-16 * std::fabs(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1: series did not converge");
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    return gamma_positive(x);
}

double hyp2f1(double a, double b, double c, double z) {
    if (z > 0.0) throw std::domain_error("hyp2f1: only z <= 0 is supported");
    if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1: c is a non-positive integer");
    if (z == 0.0) return 1.0;
    if (z > -0.5) return hyp_series(a, b, c, z);
    // Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)).
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * hyp_series(a, c - b, c, w);
}

}  // namespace hcn

#include <doctest.h>

#include <cmath>

#include "hcn/quadrature.hpp"

using namespace hcn;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("constant integrand over a unit interval") {
    const auto r = integrate_1d([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("semi-infinite radial integral of the smoothed path loss") {
    // int_0^inf r/(r^4 + eps) dr = (1/4) eps^-1/2 pi csc(pi/2) = 2.5 pi at eps = 0.01
    auto f = [](double r) { return r / (r * r * r * r + 0.01); };
    const auto r = integrate_1d(f, 0.0, kInfinity);
    CHECK(r.value == doctest::Approx(2.5 * kPi).epsilon(1e-8));
}

TEST_CASE("semi-infinite integral with a squared denominator") {
    // With u = r^2: (1/2) int_0^inf (u^2+eps)^-2 du = pi/(8 eps^1.5) = 392.699082...
    // (symbolic antiderivative u/(2a^2(u^2+a^2)) + atan(u/a)/(2a^3), a = sqrt(eps))
    auto f = [](double r) {
        const double d = r * r * r * r + 0.01;
        return r / (d * d);
    };
    const auto r = integrate_1d(f, 0.0, kInfinity);
    CHECK(r.value == doctest::Approx(kPi / 0.008).epsilon(1e-8));
    CHECK(r.value == doctest::Approx(392.699081699).epsilon(1e-8));
}

TEST_CASE("reported error bounds the true error") {
    auto f = [](double x) { return std::exp(-x) * std::sin(7.0 * x); };
    const auto r = integrate_1d(f, 0.0, kInfinity);
    const double truth = 7.0 / 50.0;  // int e^-x sin(7x) = 7/(1+49)
    CHECK(std::fabs(r.value - truth) <= std::max(r.error, 1e-10));
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
    auto f = [](double r) { return r / (r * r * r * r + 0.01); };
    const auto a = integrate_1d(f, 0.0, kInfinity);
    const auto b = integrate_1d(f, 0.0, kInfinity);
    CHECK(a.value == b.value);
    CHECK(a.error == b.error);
}

TEST_CASE("subdivision exhaustion raises an accuracy error with the best estimate") {
    QuadratureSpec spec;
    spec.max_subdivisions = 2;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 1e-300;
    auto nasty = [](double x) { return std::sin(200.0 * x) * std::sin(311.0 * x); };
    CHECK_THROWS_AS(integrate_1d(nasty, 0.0, 10.0, spec), AccuracyError);
    try {
        integrate_1d(nasty, 0.0, 10.0, spec);
    } catch (const AccuracyError& e) {
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("truncated integration adds the power tail") {
    QuadratureSpec spec;
    spec.truncation_radius = 50.0;
    // f = x^-3 from 1: exact 1/2; tail coeff 1, power 3
    auto f = [](double x) { return std::pow(x, -3.0); };
    const auto r = integrate_truncated(f, 1.0, 1.0, 3.0, spec);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("spec validation") {
    QuadratureSpec spec;
    spec.rel_tol = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.max_subdivisions = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

#include "hcn/correlation.hpp"

#include <cmath>
#include <vector>

#include "hcn/parallel.hpp"
#include "hcn/rng.hpp"

namespace hcn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double csc(double x) { return 1.0 / std::sin(x); }

// Radial truncation for the theta/F quadratures; g_eps ~ r^-alpha beyond.
double radial_cutoff(const RadioParams& p, double R, double u) {
    const double eps_scale = 50.0 * std::pow(p.eps, 1.0 / p.alpha);
    return std::max({eps_scale, 10.0 * R, 10.0 * u, 1.0});
}

}  // namespace

double gain_integral(const RadioParams& p) {
    p.validate();
    // 2*pi * int_0^inf r/(r^alpha + eps) dr = (2 pi^2 / alpha) eps^((2-alpha)/alpha) csc(2 pi/alpha)
    return 2.0 * kPi * kPi / p.alpha * std::pow(p.eps, (2.0 - p.alpha) / p.alpha) *
           csc(2.0 * kPi / p.alpha);
}

double gain_sq_integral(const RadioParams& p) {
    p.validate();
    // 2*pi * int_0^inf r/(r^alpha+eps)^2 dr with delta = 2/alpha:
    // (2 pi^2 / alpha) (1-delta) eps^(delta-2) csc(pi delta)
    const double d = p.delta();
    return 2.0 * kPi * kPi / p.alpha * (1.0 - d) * std::pow(p.eps, d - 2.0) * csc(kPi * d);
}

double mean_interference(double density, const RadioParams& p) {
    if (density < 0.0) throw std::invalid_argument("mean_interference: density must be >= 0");
    if (density == 0.0) return 0.0;
    return p.fading_mean * density * gain_integral(p);
}

double theta_cross(double u, const RadioParams& p) {
    p.validate();
    if (u < 0.0) throw std::invalid_argument("theta_cross: u must be >= 0");
    if (u == 0.0) return gain_sq_integral(p);
    const double rmax = radial_cutoff(p, 0.0, u);
    QuadratureSpec inner_spec;
    inner_spec.rel_tol = 1e-8;
    inner_spec.abs_tol = 1e-14;
    QuadratureSpec outer_spec;
    outer_spec.rel_tol = 1e-7;
    outer_spec.abs_tol = 1e-13;
    outer_spec.truncation_radius = rmax;
    auto ring = [&](double r) {
        auto angle = [&](double phi) {
            const double d2 = r * r + u * u - 2.0 * r * u * std::cos(phi);
            return g_eps(std::sqrt(std::max(d2, 0.0)), p);
        };
        return 2.0 * r * g_eps(r, p) * integrate_1d(angle, 0.0, kPi, inner_spec).value;
    };
    // tail: both factors ~ r^-alpha, ring measure r dr -> r^(1-2alpha)
    const double tail_coeff = 2.0 * kPi;
    return integrate_truncated(ring, 0.0, tail_coeff, 2.0 * p.alpha - 1.0, outer_spec).value;
}

double f_exact(double c, double R, const RadioParams& p) {
    p.validate();
    if (c < 0.0) throw std::invalid_argument("f_exact: c must be >= 0");
    if (!(R > 0.0)) throw std::invalid_argument("f_exact: R must be > 0");
    if (c == 0.0) return 0.0;
    // F = c/(pi R^2)^2 * int_0^2R 2 pi w A_R(w) theta(w) dw
    QuadratureSpec spec;
    spec.rel_tol = 1e-5;
    spec.abs_tol = 1e-12;
    spec.max_subdivisions = 400;
    auto f = [&](double w) { return 2.0 * kPi * w * lens_area(w, R) * theta_cross(w, p); };
    const double integral = integrate_1d(f, 0.0, 2.0 * R, spec).value;
    const double disk = kPi * R * R;
    return c / (disk * disk) * integral;
}

double f_approx(double c, double R, const RadioParams& p) {
    p.validate();
    if (c < 0.0) throw std::invalid_argument("f_approx: c must be >= 0");
    if (!(R > 0.0)) throw std::invalid_argument("f_approx: R must be > 0");
    const double s = csc(2.0 * kPi / p.alpha);
    return 4.0 * c * kPi * kPi * kPi / (p.alpha * p.alpha * R * R) *
           std::pow(p.eps, (4.0 - 2.0 * p.alpha) / p.alpha) * s * s;
}

double mean_product(double density, double c, double R, double u, const RadioParams& p) {
    if (density < 0.0) throw std::invalid_argument("mean_product: density must be >= 0");
    if (density == 0.0) return 0.0;
    const double gi = gain_integral(p);
    const double em = p.fading_mean;
    return em * em * density * (theta_cross(u, p) + density * gi * gi + f_exact(c, R, p));
}

double second_moment(double density, double c, double R, const RadioParams& p) {
    if (density < 0.0) throw std::invalid_argument("second_moment: density must be >= 0");
    if (density == 0.0) return 0.0;
    const double gi = gain_integral(p);
    const double em = p.fading_mean;
    return p.fading_sq_mean * density * gain_sq_integral(p) +
           em * em * density * (density * gi * gi + f_exact(c, R, p));
}

namespace {

CorrelationReport make_report(double theta, double theta_prime, double f_value, double u,
                              const RadioParams& p, std::string method) {
    CorrelationReport rep;
    rep.theta = theta;
    rep.theta_prime = theta_prime;
    rep.f_value = f_value;
    rep.u = u;
    rep.eps = p.eps;
    rep.method = std::move(method);
    rep.zeta = (theta + f_value) / (theta_prime + f_value);
    return rep;
}

}  // namespace

CorrelationReport zeta_cluster(double c, double R, double u, const RadioParams& p) {
    const double theta = theta_cross(u, p);
    const double theta_prime = p.fading_ratio() * gain_sq_integral(p);
    return make_report(theta, theta_prime, f_exact(c, R, p), u, p, "exact");
}

CorrelationReport zeta_cluster_approx(double c, double R, double u, const RadioParams& p) {
    const double theta = theta_cross(u, p);
    const double theta_prime = p.fading_ratio() * gain_sq_integral(p);
    return make_report(theta, theta_prime, f_approx(c, R, p), u, p, "approx");
}

CorrelationReport zeta_ppp(double u, const RadioParams& p) {
    const double theta = theta_cross(u, p);
    const double theta_prime = p.fading_ratio() * gain_sq_integral(p);
    return make_report(theta, theta_prime, 0.0, u, p, "exact");
}

CorrelationReport estimate_zeta_mc(const InterfererField& field, double u,
                                   const RadioParams& p, const ZetaMcOptions& opts) {
    p.validate();
    if (u < 0.0) throw std::invalid_argument("estimate_zeta_mc: u must be >= 0");
    if (opts.trials < 1000) throw std::invalid_argument("estimate_zeta_mc: trials must be >= 1000");

    double reach = 0.0;
    if (const auto* m = std::get_if<MatClusterSpec>(&field)) reach = m->radius;
    if (const auto* s = std::get_if<SocpSpec>(&field)) reach = s->cluster_reach();
    double wr = opts.window_radius;
    if (wr <= 0.0)
        wr = 10.0 * std::max({reach, std::pow(p.eps, -1.0 / p.alpha), u, 1.0});
    const Window window{wr};

    const Point probe1{-0.5 * u, 0.0};
    const Point probe2{0.5 * u, 0.0};
    const std::uint64_t n = opts.trials;
    std::vector<double> i1(n), i2(n);
    parallel_for(n, opts.threads, [&](std::size_t t) {
        Rng rng(derive_seed(opts.seed, t));
        PointPattern pat;
        if (const auto* pp = std::get_if<PppSpec>(&field)) {
            pat = sample_ppp(pp->density, window, rng);
        } else if (const auto* m = std::get_if<MatClusterSpec>(&field)) {
            pat = sample_mcp(*m, window, rng);
        } else {
            pat = sample_socp(std::get<SocpSpec>(field), window, rng);
        }
        double a = 0.0, b = 0.0;
        for (const auto& pt : pat.points) {
            // independent fading per (location, slot)
            a += rng.exponential() * g_eps(dist(pt.pos, probe1), p);
            b += rng.exponential() * g_eps(dist(pt.pos, probe2), p);
        }
        i1[t] = a;
        i2[t] = b;
    });

    // Pearson correlation plus O(n) jackknife over leave-one-out sums.
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) {
        sx += i1[t];
        sy += i2[t];
        sxx += i1[t] * i1[t];
        syy += i2[t] * i2[t];
        sxy += i1[t] * i2[t];
    }
    auto pearson = [](double n_, double sx_, double sy_, double sxx_, double syy_, double sxy_) {
        const double vx = sxx_ - sx_ * sx_ / n_;
        const double vy = syy_ - sy_ * sy_ / n_;
        const double cxy = sxy_ - sx_ * sy_ / n_;
        if (!(vx > 0.0) || !(vy > 0.0))
            throw EstimationError("estimate_zeta_mc: degenerate interference variance");
        return cxy / std::sqrt(vx * vy);
    };
    const double r_full = pearson(static_cast<double>(n), sx, sy, sxx, syy, sxy);
    std::vector<double> loo(n);
    double loo_mean = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) {
        loo[t] = pearson(static_cast<double>(n - 1), sx - i1[t], sy - i2[t],
                         sxx - i1[t] * i1[t], syy - i2[t] * i2[t], sxy - i1[t] * i2[t]);
        loo_mean += loo[t];
    }
    loo_mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) ss += (loo[t] - loo_mean) * (loo[t] - loo_mean);
    const double se = std::sqrt((static_cast<double>(n - 1) / static_cast<double>(n)) * ss);

    CorrelationReport rep;
    rep.zeta = r_full;
    rep.u = u;
    rep.eps = p.eps;
    rep.method = "monte-carlo";
    rep.stderr_mc = se;
    return rep;
}

}  // namespace hcn

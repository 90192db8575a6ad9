#include "hcn/jsp.hpp"

#include <algorithm>
#include <cmath>

#include "hcn/interp.hpp"
#include "hcn/special.hpp"

namespace hcn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(UserClass u) { return u == UserClass::MU ? "MU" : "SU"; }

double q_n(int n, double beta, double delta) {
    if (n < 1) throw std::domain_error("q_n: n must be >= 1");
    if (!(beta > 0.0)) throw std::domain_error("q_n: beta must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("q_n: delta must lie in (0,1)");
    double sum = 0.0;
    double binom = 1.0;  // C(n, m) built multiplicatively
    double beta_pow = 1.0;
    double sign = 1.0;
    for (int m = 1; m <= n; ++m) {
        binom *= static_cast<double>(n - m + 1) / m;
        beta_pow *= beta;
        const double md = static_cast<double>(m) - delta;
        sum += sign * binom * beta_pow / md * hyp2f1(m, md, md + 1.0, -beta);
        sign = -sign;
    }
    return kPi * delta * sum;
}

double u_n(int n, double delta) {
    if (n < 1) throw std::domain_error("u_n: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("u_n: delta must lie in (0,1)");
    return kPi * kPi * delta / std::sin(kPi * delta) * gamma_fn(n + delta) /
           (gamma_fn(n) * gamma_fn(1.0 + delta));
}

namespace {

// success-exponent coefficient a with P^(n)(r) = exp(-a r^2)
double ppp_exponent(int n, UserClass user, double lambda_m, double lambda_s,
                    const RadioParams& radio) {
    const double d = radio.delta();
    if (user == UserClass::MU) {
        const double cross = std::pow(radio.beta_m * radio.power_sbs / radio.power_mbs, d);
        return lambda_m * q_n(n, radio.beta_m, d) + lambda_s * cross * u_n(n, d);
    }
    const double cross = std::pow(radio.beta_s * radio.power_mbs / radio.power_sbs, d);
    return lambda_m * cross * u_n(n, d) + lambda_s * q_n(n, radio.beta_s, d);
}

}  // namespace

double jsp_ppp_value(int n, UserClass user, double lambda_m, double lambda_s,
                     const RadioParams& radio, double D, bool exact_D) {
    radio.validate();
    if (!(D > 0.0)) throw std::invalid_argument("jsp_ppp_value: D must be > 0");
    if (lambda_m < 0.0 || lambda_s < 0.0)
        throw std::invalid_argument("jsp_ppp_value: densities must be >= 0");
    const double a = ppp_exponent(n, user, lambda_m, lambda_s, radio);
    const double x = a * D * D;
    if (!exact_D) return std::min(1.0, 1.0 / x);
    if (x < 1e-10) return 1.0 - 0.5 * x;
    return (1.0 - std::exp(-x)) / x;
}

JspResult jsp_ppp(int n, UserClass user, const HcnModel& model, bool exact_D) {
    model.validate();
    if (model.variant() != SbsVariant::PPP)
        throw std::invalid_argument("jsp_ppp: model SBS tier must be a PPP");
    const auto radii = association_radii(model);
    const double D = (user == UserClass::MU) ? radii.mbs : radii.sbs;
    JspResult res;
    res.n = n;
    res.user = user;
    res.method = exact_D ? "ppp-closed-form" : "ppp-printed";
    res.value = jsp_ppp_value(n, user, model.mbs_density, model.sbs_density(), model.radio, D,
                              exact_D);
    return res;
}

// ---------------------------------------------------------------------------
// PGFL machinery
// ---------------------------------------------------------------------------

namespace {

double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// Angle subtended at the origin-distance-s center by the circle of radius t
// inside a disk of radius R (area-kernel of the disk average).
double disk_arc_angle(double s, double t, double R) {
    if (s < R && t <= R - s) return 2.0 * kPi;
    const double c = (s * s + t * t - R * R) / (2.0 * s * t);
    return 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

// Average of fn over a disk of radius R whose center is s away from the
// origin of fn's radial argument. Normalized by the quadrature of the kernel
// itself so constant profiles average exactly.
double disk_average(const std::function<double(double)>& fn, double s, double R, double jump,
                    double rel_tol) {
    QuadratureSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-13;
    spec.max_subdivisions = 200;
    if (s < 1e-12 * R) {
        auto f = [&](double t) { return 2.0 * kPi * t * fn(t); };
        auto k = [](double t) { return 2.0 * kPi * t; };
        double lo = 0.0;
        double acc = 0.0, norm = 0.0;
        if (jump > 0.0 && jump < R) {
            acc += integrate_1d(f, 0.0, jump, spec).value;
            norm += integrate_1d(k, 0.0, jump, spec).value;
            lo = jump;
        }
        acc += integrate_1d(f, lo, R, spec).value;
        norm += integrate_1d(k, lo, R, spec).value;
        return acc / norm;
    }
    const double lo = std::max(0.0, s - R);
    const double hi = s + R;
    auto f = [&](double t) { return t * disk_arc_angle(s, t, R) * fn(t); };
    auto k = [&](double t) { return t * disk_arc_angle(s, t, R); };
    double breaks[2];
    int nb = 0;
    if (s < R && R - s > lo && R - s < hi) breaks[nb++] = R - s;
    if (jump > lo && jump < hi) breaks[nb++] = jump;
    if (nb == 2 && breaks[0] > breaks[1]) std::swap(breaks[0], breaks[1]);
    double acc = 0.0, norm = 0.0;
    double a = lo;
    for (int i = 0; i < nb; ++i) {
        acc += integrate_1d(f, a, breaks[i], spec).value;
        norm += integrate_1d(k, a, breaks[i], spec).value;
        a = breaks[i];
    }
    acc += integrate_1d(f, a, hi, spec).value;
    norm += integrate_1d(k, a, hi, spec).value;
    return acc / norm;
}

double disk_average_qmc(const std::function<double(double)>& fn, double s, double R, int nodes) {
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double rho = R * std::sqrt(halton(i + 1, 2));
        const double phi = 2.0 * kPi * halton(i + 1, 3);
        const double d2 = s * s + rho * rho + 2.0 * s * rho * std::cos(phi);
        acc += fn(std::sqrt(std::max(d2, 0.0)));
    }
    return acc / nodes;
}

// Reverse-Gaussian radial weight of the first-order displacement law.
struct FirstOrderLaw {
    double R1, sigma;
    double weight(double y) const {
        return 2.0 * kPi * y * (1.0 - std::exp(-y * y / (2.0 * sigma * sigma)));
    }
    double normalizer() const {
        return kPi * R1 * R1 +
               2.0 * kPi * sigma * sigma * (std::exp(-R1 * R1 / (2.0 * sigma * sigma)) - 1.0);
    }
};

// Average of fn over the first-order displacement law at center distance x.
// Self-normalized against the quadrature of the weight.
double ring_average(const std::function<double(double)>& fn, double x, const FirstOrderLaw& law,
                    double rel_tol) {
    QuadratureSpec phi_spec;
    phi_spec.rel_tol = rel_tol;
    phi_spec.abs_tol = 1e-13;
    phi_spec.max_subdivisions = 100;
    QuadratureSpec y_spec = phi_spec;
    auto outer = [&](double y) {
        auto fphi = [&](double phi) {
            const double d2 = x * x + y * y - 2.0 * x * y * std::cos(phi);
            return fn(std::sqrt(std::max(d2, 0.0)));
        };
        return law.weight(y) * integrate_1d(fphi, 0.0, kPi, phi_spec).value / kPi;
    };
    const double num = integrate_1d(outer, 0.0, law.R1, y_spec).value;
    const double den = integrate_1d([&](double y) { return law.weight(y); }, 0.0, law.R1,
                                    y_spec).value;
    return num / den;
}

double ring_average_qmc(const std::function<double(double)>& fn, double x,
                        const FirstOrderLaw& law, int nodes) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double y = law.R1 * std::sqrt(halton(i + 1, 2));
        const double w = 1.0 - std::exp(-y * y / (2.0 * law.sigma * law.sigma));
        const double phi = 2.0 * kPi * halton(i + 1, 3);
        const double d2 = x * x + y * y - 2.0 * x * y * std::cos(phi);
        num += w * fn(std::sqrt(std::max(d2, 0.0)));
        den += w;
    }
    return num / den;
}

// Cached stage function: pchip inside, analytic power tail beyond.
struct Stage {
    Pchip cache;
    double tail_coeff = 0.0;
    double tail_power = 4.0;
    double operator()(double s) const {
        if (s >= cache.x_max()) return 1.0 - tail_coeff * std::pow(s, -tail_power);
        return std::clamp(cache(s), 0.0, 1.0);
    }
};

// 2*pi int_0^inf (1 - K(x)) x dx with the power tail added past x_hi.
double one_minus_integral(const std::function<double(double)>& K, double start, double x_hi,
                          double tail_coeff, double tail_power, double rel_tol) {
    QuadratureSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-14;
    spec.max_subdivisions = 800;
    spec.truncation_radius = x_hi;
    auto f = [&](double x) { return 2.0 * kPi * x * (1.0 - K(x)); };
    return integrate_truncated(f, start, 2.0 * kPi * tail_coeff, tail_power - 1.0, spec).value;
}

struct PgflEval {
    double log_ordinary = 0.0;  // log of the ordinary PGFL
    double palm_factor = 1.0;   // representative-cluster multiplier
};

PgflEval eval_pgfl(const TierProcess& proc, const RadialProfile& profile,
                   const PgflOptions& opts, bool reduced_palm, double palm_offset) {
    if (!profile.value) throw std::invalid_argument("pgfl: profile has no evaluator");
    if (!(profile.tail_power > 2.0))
        throw std::invalid_argument("pgfl: tail power must exceed 2 for convergence");
    const double scale_v =
        profile.tail_coeff > 0.0 ? std::pow(profile.tail_coeff, 1.0 / profile.tail_power) : 1.0;
    const double jump = std::max(profile.jump_radius, 0.0);
    PgflEval out;

    if (const auto* pp = std::get_if<PppSpec>(&proc)) {
        // exact semi-infinite quadrature; the profile is cheap to evaluate
        QuadratureSpec spec;
        spec.rel_tol = std::min(opts.rel_tol, 1e-8);
        spec.abs_tol = 1e-15;
        spec.max_subdivisions = 2000;
        const double start = jump;  // v = 1 inside the exclusion ball
        auto f = [&](double x) { return 2.0 * kPi * x * (1.0 - profile.value(x)); };
        const double J = integrate_1d(f, start, kInfinity, spec).value;
        out.log_ordinary = -pp->density * J;
        return out;  // Slivnyak: reduced Palm equals the PGFL
    }

    const bool qmc = opts.method == PgflMethod::QuasiMonteCarlo;
    const int qmc_split = std::max(16, static_cast<int>(std::sqrt(double(opts.qmc_nodes))));
    const double avg_tol = 10.0 * opts.rel_tol;

    if (const auto* mcp = std::get_if<MatClusterSpec>(&proc)) {
        const double R = mcp->radius;
        const double c = mcp->mean_points;
        if (c == 0.0) return out;  // empty clusters: PGFL = 1
        const double x_hi = 8.0 * scale_v + 4.0 * R + 4.0 * jump + palm_offset + 1.0;
        const double cache_hi = x_hi + R + palm_offset + 1.0;
        double lo_scale = std::min(R, scale_v);
        if (jump > 0.0) lo_scale = std::min(lo_scale, jump);
        const double x_lo = std::max(1e-9, 1e-3 * lo_scale);
        auto dv_raw = [&](double s) {
            return qmc ? disk_average_qmc(profile.value, s, R, qmc_split)
                       : disk_average(profile.value, s, R, profile.jump_radius, avg_tol);
        };
        Stage dv{build_log_cache(dv_raw, x_lo, cache_hi, opts.grid_nodes), profile.tail_coeff,
                 profile.tail_power};
        auto cluster_factor = [&](double x) { return std::exp(-c * (1.0 - dv(x))); };
        const double J = one_minus_integral(cluster_factor, 0.0, x_hi, c * profile.tail_coeff,
                                            profile.tail_power, opts.rel_tol);
        out.log_ordinary = -mcp->parent_density * J;
        if (reduced_palm) {
            out.palm_factor = qmc ? disk_average_qmc(cluster_factor, palm_offset, R, qmc_split)
                                  : disk_average(cluster_factor, palm_offset, R, -1.0, avg_tol);
        }
        return out;
    }

    const auto& socp = std::get<SocpSpec>(proc);
    const double R1 = socp.first_radius;
    const double R2 = socp.second_radius;
    const double c1 = socp.first_mean;
    const double c2 = socp.second_mean;
    const FirstOrderLaw law{R1, socp.sigma};
    const double reach = R1 + R2;
    const double x_hi = 8.0 * scale_v + 4.0 * reach + 4.0 * jump + palm_offset + 1.0;
    const double cache_hi = x_hi + reach + palm_offset + 1.0;
    double lo_scale = std::min(R2, scale_v);
    if (jump > 0.0) lo_scale = std::min(lo_scale, jump);
    const double x_lo = std::max(1e-9, 1e-3 * lo_scale);
    auto dv_raw = [&](double s) {
        return qmc ? disk_average_qmc(profile.value, s, R2, qmc_split)
                   : disk_average(profile.value, s, R2, profile.jump_radius, avg_tol);
    };
    Stage dv{build_log_cache(dv_raw, x_lo, cache_hi, opts.grid_nodes), profile.tail_coeff,
             profile.tail_power};
    auto second_factor = [&](double s) { return std::exp(-c2 * (1.0 - dv(s))); };
    auto ring_raw = [&](double x) {
        return qmc ? ring_average_qmc(second_factor, x, law, qmc_split)
                   : ring_average(second_factor, x, law, avg_tol);
    };
    Stage ring{build_log_cache(ring_raw, x_lo, cache_hi, opts.grid_nodes),
               c2 * profile.tail_coeff, profile.tail_power};
    auto first_factor = [&](double x) { return std::exp(-c1 * (1.0 - ring(x))); };
    const double J = one_minus_integral(first_factor, 0.0, x_hi, c1 * c2 * profile.tail_coeff,
                                        profile.tail_power, opts.rel_tol);
    out.log_ordinary = -socp.parent_density * J;
    if (reduced_palm) {
        // sibling second-order points around the conditioned point, and the
        // parent's other first-order clusters with the parent offset taken at
        // the conditioned point itself
        const double t1 = first_factor(palm_offset);
        const double t2 = qmc ? disk_average_qmc(second_factor, palm_offset, R2, qmc_split)
                              : disk_average(second_factor, palm_offset, R2, -1.0, avg_tol);
        out.palm_factor = t1 * t2;
    }
    return out;
}

}  // namespace

double pgfl(const TierProcess& proc, const RadialProfile& profile, const PgflOptions& opts,
            bool reduced_palm, double palm_offset) {
    const PgflEval ev = eval_pgfl(proc, profile, opts, reduced_palm, palm_offset);
    return std::exp(ev.log_ordinary) * ev.palm_factor;
}

// ---------------------------------------------------------------------------
// Joint success probabilities (Lemma-4 structure)
// ---------------------------------------------------------------------------

namespace {

RadialProfile own_tier_profile(int n, double beta, double r, double alpha) {
    RadialProfile pr;
    pr.jump_radius = r;
    pr.tail_power = alpha;
    pr.tail_coeff = n * beta * std::pow(r, alpha);
    pr.value = [n, beta, r, alpha](double x) {
        if (x <= r) return 1.0;
        return std::pow(1.0 + beta * std::pow(x / r, -alpha), -static_cast<double>(n));
    };
    return pr;
}

RadialProfile cross_tier_profile(int n, double beta_eff, double r, double alpha) {
    RadialProfile pr;
    pr.tail_power = alpha;
    pr.tail_coeff = n * beta_eff * std::pow(r, alpha);
    pr.value = [n, beta_eff, r, alpha](double x) {
        if (x == 0.0) return 0.0;
        return std::pow(1.0 + beta_eff * std::pow(x / r, -alpha), -static_cast<double>(n));
    };
    return pr;
}

}  // namespace

double jsp_conditional(int n, double r, UserClass user, const HcnModel& model,
                       const JspOptions& opts) {
    model.validate();
    if (n < 1) throw std::domain_error("jsp_conditional: n must be >= 1");
    if (!(r > 0.0)) throw std::domain_error("jsp_conditional: r must be > 0");
    const RadioParams& radio = model.radio;
    const double alpha = radio.alpha;
    const TierProcess mbs_tier = PppSpec{model.mbs_density};
    if (user == UserClass::MU) {
        const auto own = own_tier_profile(n, radio.beta_m, r, alpha);
        const double beta_eff = radio.beta_m * radio.power_sbs / radio.power_mbs;
        const auto cross = cross_tier_profile(n, beta_eff, r, alpha);
        const double own_factor = pgfl(mbs_tier, own, opts.pgfl, true, r);
        const double cross_factor = pgfl(model.sbs, cross, opts.pgfl);
        return own_factor * cross_factor;
    }
    const auto own = own_tier_profile(n, radio.beta_s, r, alpha);
    const double beta_eff = radio.beta_s * radio.power_mbs / radio.power_sbs;
    const auto cross = cross_tier_profile(n, beta_eff, r, alpha);
    const double own_factor = pgfl(model.sbs, own, opts.pgfl, true, r);
    const double cross_factor = pgfl(mbs_tier, cross, opts.pgfl);
    return own_factor * cross_factor;
}

JspResult jsp(int n, UserClass user, const HcnModel& model, const JspOptions& opts) {
    const auto radii = association_radii(model);
    const double D = (user == UserClass::MU) ? radii.mbs : radii.sbs;
    QuadratureSpec spec;
    spec.rel_tol = opts.r_rel_tol;
    spec.abs_tol = 1e-12;
    spec.max_subdivisions = 60;
    auto f = [&](double r) { return jsp_conditional(n, r, user, model, opts) * r; };
    const double integral = integrate_1d(f, 0.0, D, spec).value;
    JspResult res;
    res.n = n;
    res.user = user;
    res.method = "pgfl-quadrature";
    res.value = 2.0 / (D * D) * integral;
    return res;
}

double gamma_const(const SocpSpec& spec) {
    spec.validate();
    const FirstOrderLaw law{spec.first_radius, spec.sigma};
    const double first_peak =
        (1.0 - std::exp(-spec.first_radius * spec.first_radius / (2.0 * spec.sigma * spec.sigma))) /
        law.normalizer();
    const double second_peak = 1.0 / (kPi * spec.second_radius * spec.second_radius);
    return std::min(first_peak, second_peak);
}

JspResult jsp_bounds(int n, UserClass user, const HcnModel& model) {
    model.validate();
    const auto radii = association_radii(model);
    const double D = (user == UserClass::MU) ? radii.mbs : radii.sbs;
    const RadioParams& radio = model.radio;
    const double lambda_m = model.mbs_density;
    double lambda_low = 0.0, lambda_high = 0.0;
    if (model.variant() == SbsVariant::MCP) {
        const auto& m = std::get<MatClusterSpec>(model.sbs);
        const double lam = m.density();
        lambda_high = lam / (1.0 + m.mean_points);
        lambda_low = (user == UserClass::MU)
                         ? lam
                         : lam + m.mean_points / (kPi * m.radius * m.radius);
    } else if (model.variant() == SbsVariant::SOCP) {
        const auto& s = std::get<SocpSpec>(model.sbs);
        const double lam = s.density();
        lambda_high = lam / ((1.0 + s.first_mean) * (1.0 + s.second_mean));
        lambda_low = (user == UserClass::MU)
                         ? lam
                         : lam + s.first_mean * s.second_mean * gamma_const(s) +
                               s.second_mean / (kPi * s.second_radius * s.second_radius);
    } else {
        throw std::invalid_argument("jsp_bounds: requires a MCP or SOCP SBS tier");
    }
    JspResult res;
    res.n = n;
    res.user = user;
    res.method = "theorem-bounds";
    res.lower = jsp_ppp_value(n, user, lambda_m, lambda_low, radio, D, true);
    res.upper = jsp_ppp_value(n, user, lambda_m, lambda_high, radio, D, true);
    res.value = 0.5 * (*res.lower + *res.upper);
    return res;
}

}  // namespace hcn

#include <doctest.h>

#include <cmath>

#include "hcn/jsp.hpp"
#include "hcn/quadrature.hpp"

using namespace hcn;

namespace {

constexpr double kPi = 3.14159265358979323846;

// analytic tail of 2 pi int_T^inf [1 - (1 + beta t^-alpha)^-n] t dt via the
// (convergent, alternating) binomial expansion of (1 + x)^-n for x < 1
double tail_beyond(int n, double beta, double alpha, double T) {
    double sum = 0.0;
    double coeff = 1.0;  // C(n+k-1, k) built multiplicatively
    double x_pow = 1.0;
    for (int k = 1; k < 400; ++k) {
        coeff *= static_cast<double>(n + k - 1) / k;
        x_pow *= beta;
        const double term = ((k % 2) ? 1.0 : -1.0) * coeff * x_pow *
                            std::pow(T, 2.0 - k * alpha) / (k * alpha - 2.0);
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return 2.0 * kPi * sum;
}

// independent quadrature route for the own-tier exponent coefficient:
// Q_n(beta) = 2 pi int_1^inf [1 - (1 + beta t^-alpha)^-n] t dt
double q_n_oracle(int n, double beta, double delta) {
    const double alpha = 2.0 / delta;
    const double T = 10.0 * std::max(1.0, std::pow(beta, 1.0 / alpha));
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-15;
    spec.max_subdivisions = 20000;
    auto f = [&](double t) {
        return 2.0 * kPi * t * (1.0 - std::pow(1.0 + beta * std::pow(t, -alpha), -double(n)));
    };
    return integrate_1d(f, 1.0, T, spec).value + tail_beyond(n, beta, alpha, T);
}

// U_n = 2 pi int_0^inf [1 - (1 + t^-alpha)^-n] t dt
double u_n_oracle(int n, double delta) {
    const double alpha = 2.0 / delta;
    const double T = 10.0;
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-15;
    spec.max_subdivisions = 20000;
    auto f = [&](double t) {
        return 2.0 * kPi * t * (1.0 - std::pow(1.0 + std::pow(t, -alpha), -double(n)));
    };
    return integrate_1d(f, 0.0, T, spec).value + tail_beyond(n, 1.0, alpha, T);
}

RadioParams fig3_radio() {
    RadioParams r;
    r.alpha = 4.0;
    r.eps = 0.01;
    r.power_mbs = dbm_to_watts(39.0);
    r.power_sbs = dbm_to_watts(13.0);
    r.beta_m = db_to_linear(-2.0);
    r.beta_s = db_to_linear(-3.0);
    return r;
}

HcnModel fig3_ppp() {
    HcnModel m;
    m.mbs_density = 7.96e-6;
    m.sbs = PppSpec{1.2e-4};
    m.radio = fig3_radio();
    return m;
}

HcnModel fig3_mcp() {
    HcnModel m;
    m.mbs_density = 7.96e-6;
    m.sbs = MatClusterSpec{4e-5, 3.0, 10.0};
    m.radio = fig3_radio();
    return m;
}

HcnModel fig3_socp() {
    HcnModel m;
    m.mbs_density = 7.96e-6;
    m.sbs = SocpSpec{7.96e-6, 15.0, 90.0, 50.0, 3.0, 10.0};
    m.radio = fig3_radio();
    return m;
}

}  // namespace

TEST_CASE("q_n pinned and oracle values") {
    CHECK(q_n(1, 1.0, 0.5) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-9));
    CHECK(q_n(1, 1e-9, 0.5) < 1e-7);
    for (int n : {1, 2, 4}) {
        for (double beta : {0.5, 1.0, 3.0}) {
            CHECK(q_n(n, beta, 0.5) == doctest::Approx(q_n_oracle(n, beta, 0.5)).epsilon(1e-8));
        }
    }
    // a non-4 path-loss exponent as well
    CHECK(q_n(2, 1.0, 0.625) == doctest::Approx(q_n_oracle(2, 1.0, 0.625)).epsilon(1e-8));
    CHECK_THROWS_AS(q_n(0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(q_n(1, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(q_n(1, -1.0, 0.5), std::domain_error);
}

TEST_CASE("u_n pinned and oracle values") {
    CHECK(u_n(1, 0.5) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-12));
    CHECK(u_n(2, 0.5) == doctest::Approx(1.5 * kPi * kPi / 2.0).epsilon(1e-12));
    for (int n : {1, 2, 4}) CHECK(u_n(n, 0.5) == doctest::Approx(u_n_oracle(n, 0.5)).epsilon(1e-8));
    CHECK(u_n(3, 0.7) == doctest::Approx(u_n_oracle(3, 0.7)).epsilon(1e-8));
    CHECK(u_n(2, 0.5) > u_n(1, 0.5));
    CHECK(u_n(4, 0.5) > u_n(2, 0.5));
    CHECK_THROWS_AS(u_n(1, 0.0), std::domain_error);
}

TEST_CASE("jsp_ppp: exact-D value against the direct conditional quadrature") {
    // lambda_s = 0, beta_m = -2 dB: only the MBS tier remains; the oracle
    // averages exp(-lambda_m Q_n r^2) against 2r/D^2 directly.
    HcnModel m = fig3_ppp();
    m.sbs = PppSpec{0.0};
    const auto radii = association_radii(m);
    for (int n : {1, 2}) {
        const double a = m.mbs_density * q_n(n, m.radio.beta_m, 0.5);
        QuadratureSpec spec;
        spec.rel_tol = 1e-10;
        auto f = [&](double r) {
            return std::exp(-a * r * r) * 2.0 * r / (radii.mbs * radii.mbs);
        };
        const double oracle = integrate_1d(f, 0.0, radii.mbs, spec).value;
        CHECK(jsp_ppp(n, UserClass::MU, m, true).value ==
              doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("jsp_ppp: trivial limits and form comparison") {
    HcnModel m = fig3_ppp();
    m.radio.beta_m = 1e-12;
    CHECK(jsp_ppp(1, UserClass::MU, m, true).value == doctest::Approx(1.0).epsilon(1e-6));
    m = fig3_ppp();
    // printed form drops (1 - e^-aD^2) and therefore upper-bounds the exact one
    for (int n : {1, 2, 4}) {
        const double exact = jsp_ppp(n, UserClass::SU, m, true).value;
        const double printed = jsp_ppp(n, UserClass::SU, m, false).value;
        CHECK(exact <= printed);
        CHECK(exact >= 0.0);
        CHECK(exact <= 1.0);
    }
    CHECK_THROWS_AS(jsp_ppp(1, UserClass::MU, fig3_mcp(), true), std::invalid_argument);
}

TEST_CASE("pgfl: unit profile gives one for every variant") {
    RadialProfile one;
    one.value = [](double) { return 1.0; };
    one.tail_coeff = 0.0;
    CHECK(pgfl(PppSpec{1e-3}, one) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pgfl(MatClusterSpec{1e-4, 3.0, 10.0}, one) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(pgfl(SocpSpec{1e-5, 5.0, 50.0, 30.0, 3.0, 10.0}, one) ==
          doctest::Approx(1.0).epsilon(1e-7));
    CHECK(pgfl(MatClusterSpec{1e-4, 3.0, 10.0}, one, {}, true, 5.0) ==
          doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("pgfl: PPP cross-tier profile reproduces the U_n closed form") {
    const double lambda = 1e-4, beta = 0.8, r = 30.0, alpha = 4.0;
    for (int n : {1, 2}) {
        RadialProfile pr;
        pr.tail_power = alpha;
        pr.tail_coeff = n * beta * std::pow(r, alpha);
        pr.value = [=](double x) {
            if (x == 0.0) return 0.0;
            return std::pow(1.0 + beta * std::pow(x / r, -alpha), -double(n));
        };
        const double got = pgfl(PppSpec{lambda}, pr);
        const double want = std::exp(-lambda * std::pow(beta, 0.5) * u_n(n, 0.5) * r * r);
        CHECK(got == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("pgfl: MCP lies between the PPP evaluations of Eq-18 densities") {
    const MatClusterSpec mcp{1e-4, 3.0, 10.0};
    const double lambda = mcp.density();
    RadialProfile pr;
    const double beta = 0.8, r = 30.0;
    pr.tail_power = 4.0;
    pr.tail_coeff = beta * std::pow(r, 4.0);
    pr.value = [=](double x) {
        if (x == 0.0) return 0.0;
        return std::pow(1.0 + beta * std::pow(x / r, -4.0), -1.0);
    };
    const double g_mcp = pgfl(mcp, pr);
    const double g_low = pgfl(PppSpec{lambda}, pr);
    const double g_high = pgfl(PppSpec{lambda / (1.0 + mcp.mean_points)}, pr);
    CHECK(g_low <= g_mcp * (1.0 + 1e-6));
    CHECK(g_mcp <= g_high * (1.0 + 1e-6));
    // density ordering of the PPP functional itself
    CHECK(g_low < g_high);
}

TEST_CASE("pgfl: SOCP dominates the matching MCP which dominates the PPP") {
    // Appendix ordering G_SOCP >= G_MCP >= G_PPP at equal density; the
    // comparable MCP collapses the first-order offsets.
    const SocpSpec socp{1e-5, 5.0, 50.0, 30.0, 3.0, 10.0};
    const MatClusterSpec mcp{socp.parent_density * socp.first_mean, socp.second_mean,
                             socp.second_radius};
    RadialProfile pr;
    const double beta = 1.0, r = 40.0;
    pr.tail_power = 4.0;
    pr.tail_coeff = beta * std::pow(r, 4.0);
    pr.value = [=](double x) {
        if (x == 0.0) return 0.0;
        return std::pow(1.0 + beta * std::pow(x / r, -4.0), -1.0);
    };
    const double g_socp = pgfl(socp, pr);
    const double g_mcp = pgfl(mcp, pr);
    const double g_ppp = pgfl(PppSpec{socp.density()}, pr);
    CHECK(g_ppp <= g_mcp * (1.0 + 1e-6));
    CHECK(g_mcp <= g_socp * (1.0 + 1e-6));
}

TEST_CASE("pgfl: nested and quasi-Monte-Carlo paths agree within 1%") {
    // nearly PPP-reducible SOCP (small cluster means)
    const SocpSpec socp{1e-4, 0.05, 50.0, 30.0, 0.05, 10.0};
    RadialProfile pr;
    const double beta = 1.0, r = 40.0;
    pr.tail_power = 4.0;
    pr.tail_coeff = beta * std::pow(r, 4.0);
    pr.value = [=](double x) {
        if (x == 0.0) return 0.0;
        return std::pow(1.0 + beta * std::pow(x / r, -4.0), -1.0);
    };
    PgflOptions nested;
    PgflOptions qmc;
    qmc.method = PgflMethod::QuasiMonteCarlo;
    const double a = pgfl(socp, pr, nested);
    const double b = pgfl(socp, pr, qmc);
    CHECK(b == doctest::Approx(a).epsilon(0.01));
    // and both sit near the PPP value the process collapses to
    const double p = pgfl(PppSpec{socp.density()}, pr);
    CHECK(a == doctest::Approx(p).epsilon(0.02));
}

TEST_CASE("jsp_conditional: PPP route agrees with the Lemma-7 closed form") {
    HcnModel m = fig3_ppp();
    const double lambda_s = 1.2e-4;
    for (int n : {1, 2, 4}) {
        for (double r : {10.0, 30.0}) {
            const double got = jsp_conditional(n, r, UserClass::MU, m);
            const double cross = std::pow(m.radio.beta_m * m.radio.power_sbs / m.radio.power_mbs,
                                          0.5);
            const double want = std::exp(-(m.mbs_density * q_n(n, m.radio.beta_m, 0.5) +
                                           lambda_s * cross * u_n(n, 0.5)) *
                                         r * r);
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
    // SU route as well
    const double r = 20.0;
    const double got = jsp_conditional(2, r, UserClass::SU, m);
    const double cross = std::pow(m.radio.beta_s * m.radio.power_mbs / m.radio.power_sbs, 0.5);
    const double want = std::exp(-(m.mbs_density * cross * u_n(2, 0.5) +
                                   lambda_s * q_n(2, m.radio.beta_s, 0.5)) *
                                 r * r);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("jsp: averaged value matches the closed form for the PPP model") {
    HcnModel m = fig3_ppp();
    const JspResult quad = jsp(1, UserClass::MU, m);
    const JspResult closed = jsp_ppp(1, UserClass::MU, m, true);
    CHECK(quad.value == doctest::Approx(closed.value).epsilon(1e-5));
}

TEST_CASE("jsp: probability shrinks with n, beta and density") {
    HcnModel m = fig3_ppp();
    const double p1 = jsp_ppp(1, UserClass::MU, m, true).value;
    const double p2 = jsp_ppp(2, UserClass::MU, m, true).value;
    const double p4 = jsp_ppp(4, UserClass::MU, m, true).value;
    CHECK(p1 >= p2);
    CHECK(p2 >= p4);
    HcnModel harsher = m;
    harsher.radio.beta_m *= 2.0;
    CHECK(jsp_ppp(1, UserClass::MU, harsher, true).value < p1);
    HcnModel denser = m;
    denser.sbs = PppSpec{2.4e-4};
    denser.radii_override = association_radii(m);  // same D, more interferers
    CHECK(jsp_ppp(1, UserClass::MU, denser, true).value < p1);
}

TEST_CASE("jsp: cluster-model value decreases in the cluster mean") {
    // Remark: raising c at a fixed parent density adds interferers without
    // changing the serving-link geometry.
    HcnModel a = fig3_mcp();
    HcnModel b = a;
    std::get<MatClusterSpec>(b.sbs).mean_points = 6.0;
    b.radii_override = association_radii(a);
    a.radii_override = association_radii(a);
    const double ja = jsp(1, UserClass::MU, a).value;
    const double jb = jsp(1, UserClass::MU, b).value;
    CHECK(jb < ja);
}

TEST_CASE("jsp: cluster-model value sits inside its own bounds") {
    for (UserClass user : {UserClass::MU, UserClass::SU}) {
        HcnModel m = fig3_mcp();
        const JspResult full = jsp(2, user, m);
        const JspResult bounds = jsp_bounds(2, user, m);
        CHECK(full.value >= *bounds.lower * (1.0 - 1e-3));
        CHECK(full.value <= *bounds.upper * (1.0 + 1e-3));
    }
}

TEST_CASE("gamma_const: pinned example and limits") {
    const SocpSpec spec{1e-4, 10.0, 90.0, 50.0, 3.0, 10.0};
    const double g = gamma_const(spec);
    CHECK(g == doctest::Approx(6.243e-5).epsilon(1e-3));
    CHECK(g <= 1.0 / (kPi * 100.0));
    SocpSpec tight = spec;
    tight.sigma = 1e-3;
    CHECK(gamma_const(tight) ==
          doctest::Approx(1.0 / (kPi * 8100.0)).epsilon(1e-6));
}

TEST_CASE("jsp_bounds: order, collapse and domain") {
    HcnModel m = fig3_mcp();
    for (int n : {1, 2}) {
        for (UserClass user : {UserClass::MU, UserClass::SU}) {
            const JspResult b = jsp_bounds(n, user, m);
            CHECK(*b.lower <= *b.upper);
            CHECK(*b.lower >= 0.0);
            CHECK(*b.upper <= 1.0);
        }
    }
    const JspResult bs = jsp_bounds(1, UserClass::SU, fig3_socp());
    CHECK(*bs.lower <= *bs.upper);
    // c -> 0 collapses both bounds onto the PPP value at the same density
    HcnModel tiny = fig3_mcp();
    std::get<MatClusterSpec>(tiny.sbs) = MatClusterSpec{1.2e-4 / 1e-6, 1e-6, 10.0};
    const JspResult collapsed = jsp_bounds(1, UserClass::MU, tiny);
    CHECK(*collapsed.upper - *collapsed.lower <= 1e-5 * *collapsed.upper);
    CHECK_THROWS_AS(jsp_bounds(1, UserClass::MU, fig3_ppp()), std::invalid_argument);
}

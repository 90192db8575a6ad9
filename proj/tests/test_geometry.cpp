#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hcn/geometry.hpp"
#include "hcn/model.hpp"
#include "hcn/quadrature.hpp"

using namespace hcn;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct IntensityStats {
    double mean = 0.0;
    double se = 0.0;
};

template <typename Sampler>
IntensityStats empirical_intensity(Sampler&& draw, int reps, double area) {
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double count = static_cast<double>(draw(i).points.size());
        sum += count;
        sum_sq += count * count;
    }
    const double mean = sum / reps;
    const double var = (sum_sq - sum * sum / reps) / (reps - 1.0);
    return {mean / area, std::sqrt(var / reps) / area};
}

}  // namespace

TEST_CASE("ppp: zero density gives an empty pattern") {
    Rng rng(1);
    CHECK(sample_ppp(0.0, Window{100.0}, rng).points.empty());
    CHECK_THROWS_AS(sample_ppp(-1.0, Window{100.0}, rng), std::invalid_argument);
}

TEST_CASE("ppp: empirical intensity matches the nominal density") {
    const Window w{1000.0};
    const double area = kPi * w.radius * w.radius;
    auto stats = empirical_intensity(
        [&](int i) {
            Rng rng(derive_seed(42, i));
            return sample_ppp(1e-4, w, rng);
        },
        10000, area);
    CHECK(std::fabs(stats.mean - 1e-4) <= 3.0 * stats.se);
    // mean count ~ lambda pi r^2 = 314.16
    CHECK(stats.mean * area == doctest::Approx(314.159).epsilon(0.02));
}

TEST_CASE("ppp: fixed seed reproduces the pattern bit-exactly") {
    Rng a(99), b(99);
    const auto pa = sample_ppp(5e-4, Window{300.0}, a);
    const auto pb = sample_ppp(5e-4, Window{300.0}, b);
    REQUIRE(pa.points.size() == pb.points.size());
    for (std::size_t i = 0; i < pa.points.size(); ++i) {
        CHECK(pa.points[i].pos.x == pb.points[i].pos.x);
        CHECK(pa.points[i].pos.y == pb.points[i].pos.y);
    }
}

TEST_CASE("mcp: zero mean points gives an empty pattern") {
    Rng rng(3);
    CHECK(sample_mcp(MatClusterSpec{1e-3, 0.0, 10.0}, Window{500.0}, rng).points.empty());
}

TEST_CASE("mcp: retained intensity is the parent density times the cluster mean") {
    const Window w{500.0};
    const double area = kPi * w.radius * w.radius;
    const MatClusterSpec spec{1e-3, 3.0, 10.0};
    auto stats = empirical_intensity(
        [&](int i) {
            Rng rng(derive_seed(43, i));
            return sample_mcp(spec, w, rng);
        },
        10000, area);
    CHECK(std::fabs(stats.mean - 3e-3) <= 3.0 * stats.se);
}

TEST_CASE("mcp: every retained point lies in the window") {
    Rng rng(5);
    const Window w{200.0};
    const auto pat = sample_mcp(MatClusterSpec{1e-3, 5.0, 25.0}, w, rng);
    for (const auto& p : pat.points) CHECK(w.contains(p.pos));
}

TEST_CASE("socp: zero first-order mean gives an empty pattern") {
    Rng rng(3);
    const SocpSpec spec{1e-4, 0.0, 90.0, 50.0, 3.0, 10.0};
    CHECK(sample_socp(spec, Window{500.0}, rng).points.empty());
}

TEST_CASE("socp: intensity matches lambda_S0 * c_S' * c_S") {
    const Window w{500.0};
    const double area = kPi * w.radius * w.radius;
    const SocpSpec spec{1e-4, 10.0, 90.0, 50.0, 3.0, 10.0};
    auto stats = empirical_intensity(
        [&](int i) {
            Rng rng(derive_seed(44, i));
            return sample_socp(spec, w, rng);
        },
        10000, area);
    CHECK(std::fabs(stats.mean - 3e-3) <= 3.0 * stats.se);
}

TEST_CASE("socp: first-order radial law stays within its support") {
    Rng rng(17);
    for (int i = 0; i < 20000; ++i) {
        const double r = sample_reverse_gaussian_radius(rng, 90.0, 50.0);
        CHECK(r >= 0.0);
        CHECK(r <= 90.0);
    }
}

TEST_CASE("serving-distance pdf and sampler") {
    CHECK(pdf_serving_distance(10.0, 10.0) == doctest::Approx(0.2));  // 2/D
    CHECK(pdf_serving_distance(10.5, 10.0) == 0.0);
    CHECK(sample_serving_distance(0.25, 10.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(pdf_serving_distance(1.0, 0.0), std::domain_error);
    // normalization
    const auto r = integrate_1d([](double x) { return pdf_serving_distance(x, 10.0); }, 0.0, 10.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lens area: pinned values") {
    CHECK(lens_area(0.0, 5.0) == doctest::Approx(kPi * 25.0).epsilon(1e-12));
    CHECK(lens_area(10.0, 5.0) == 0.0);
    // 50 acos(1/2) - 5 sqrt(75/4)
    CHECK(lens_area(5.0, 5.0) == doctest::Approx(30.7092424).epsilon(1e-7));
    CHECK_THROWS_AS(lens_area(-1.0, 5.0), std::domain_error);
}

TEST_CASE("lens area agrees with a Monte-Carlo overlap estimate") {
    Rng rng(2024);
    const double R = 5.0, r = 5.0;
    const int n = 400000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const Point p = sample_in_disk(rng, {0.0, 0.0}, R);
        const double dx = p.x - r;
        if (dx * dx + p.y * p.y <= R * R) ++hits;
    }
    const double mc = kPi * R * R * hits / n;
    CHECK(lens_area(r, R) == doctest::Approx(mc).epsilon(0.005));
}

TEST_CASE("lens area is continuous and decreasing on [0, 2R]") {
    const double R = 7.0;
    double prev = lens_area(0.0, R);
    for (int i = 1; i <= 200; ++i) {
        const double r = 2.0 * R * i / 200.0;
        const double a = lens_area(r, R);
        CHECK(a <= prev + 1e-12);
        prev = a;
    }
    CHECK(lens_area(2.0 * R - 1e-9, R) == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("radial densities integrate to one") {
    // f_M and f_S are area densities 1/(pi R^2); f_S' carries the reverse-
    // Gaussian factor. All are checked against the 2 pi r dr measure.
    const double R = 10.0;
    const auto fm = integrate_1d(
        [R](double r) { return 2.0 * kPi * r / (kPi * R * R); }, 0.0, R);
    CHECK(fm.value == doctest::Approx(1.0).epsilon(1e-8));
    const double R1 = 90.0, sigma = 50.0;
    const double Z =
        kPi * R1 * R1 + 2.0 * kPi * sigma * sigma * (std::exp(-R1 * R1 / (2 * sigma * sigma)) - 1.0);
    const auto fs1 = integrate_1d(
        [&](double r) {
            return 2.0 * kPi * r * (1.0 - std::exp(-r * r / (2 * sigma * sigma))) / Z;
        },
        0.0, R1);
    CHECK(fs1.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("association radii for the three variants") {
    RadioParams radio;
    HcnModel mcp;
    mcp.mbs_density = 1e-4;
    mcp.sbs = MatClusterSpec{1e-3, 3.0, 10.0};
    mcp.radio = radio;
    const auto rm = association_radii(mcp);
    CHECK(rm.mbs == doctest::Approx(17.0105).epsilon(1e-4));
    CHECK(rm.sbs == doctest::Approx(17.0105 / std::sqrt(3.0)).epsilon(1e-4));

    HcnModel socp;
    socp.mbs_density = 1e-4;
    socp.sbs = SocpSpec{1e-4, 10.0, 90.0, 50.0, 3.0, 10.0};
    socp.radio = radio;
    const auto rs = association_radii(socp);
    CHECK(rs.mbs == doctest::Approx(1.0 / std::sqrt(kPi * 1.1e-3)).epsilon(1e-10));
    CHECK(rs.sbs == doctest::Approx(rs.mbs / std::sqrt(30.0)).epsilon(1e-10));

    HcnModel ppp;
    ppp.mbs_density = 1e-4;
    ppp.sbs = PppSpec{1e-3};
    ppp.radio = radio;
    const auto rp = association_radii(ppp);
    CHECK(rp.mbs == doctest::Approx(17.0105).epsilon(1e-4));
    CHECK(rp.sbs == rp.mbs);
}

TEST_CASE("csv dump carries tier and cluster tags") {
    Rng rng(8);
    const auto pat = sample_socp(SocpSpec{1e-4, 5.0, 50.0, 20.0, 2.0, 5.0}, Window{300.0}, rng);
    std::ostringstream os;
    write_pattern_csv(os, pat);
    const std::string text = os.str();
    CHECK(text.rfind("x,y,tier,parent_id,first_order_id\n", 0) == 0);
    if (!pat.points.empty()) CHECK(text.find("SBS") != std::string::npos);
}

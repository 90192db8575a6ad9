#include "hcn/geometry.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hcn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void MatClusterSpec::validate() const {
    if (!(parent_density > 0.0)) throw std::invalid_argument("MatClusterSpec: parent_density must be > 0");
    if (mean_points < 0.0) throw std::invalid_argument("MatClusterSpec: mean_points must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("MatClusterSpec: radius must be > 0");
}

void SocpSpec::validate() const {
    if (!(parent_density > 0.0)) throw std::invalid_argument("SocpSpec: parent_density must be > 0");
    if (first_mean < 0.0) throw std::invalid_argument("SocpSpec: first_mean must be >= 0");
    if (!(first_radius > 0.0)) throw std::invalid_argument("SocpSpec: first_radius must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("SocpSpec: sigma must be > 0");
    if (second_mean < 0.0) throw std::invalid_argument("SocpSpec: second_mean must be >= 0");
    if (!(second_radius > 0.0)) throw std::invalid_argument("SocpSpec: second_radius must be > 0");
}

void Window::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("Window: radius must be > 0");
}

void write_pattern_csv(std::ostream& os, const PointPattern& pattern) {
    os << "x,y,tier,parent_id,first_order_id\n";
    char buf[128];
    for (const auto& p : pattern.points) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,", p.pos.x, p.pos.y);
        os << buf << (p.tier == Tier::MBS ? "MBS" : "SBS") << ',';
        if (p.parent_id >= 0) os << p.parent_id;
        os << ',';
        if (p.first_order_id >= 0) os << p.first_order_id;
        os << '\n';
    }
}

Point sample_in_disk(Rng& rng, const Point& center, double radius) {
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * kPi * rng.uniform();
    return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

double sample_reverse_gaussian_radius(Rng& rng, double first_radius, double sigma) {
    const double two_sigma_sq = 2.0 * sigma * sigma;
    for (;;) {
        const double r = first_radius * std::sqrt(rng.uniform());
        const double accept = 1.0 - std::exp(-r * r / two_sigma_sq);
        if (rng.uniform() < accept) return r;
    }
}

PointPattern sample_ppp(double density, const Window& window, Rng& rng, Tier tier) {
    window.validate();
    if (density < 0.0) throw std::invalid_argument("sample_ppp: density must be >= 0");
    PointPattern pat{window, {}};
    const std::uint64_t n = rng.poisson(density * kPi * window.radius * window.radius);
    pat.points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        TaggedPoint p;
        p.pos = sample_in_disk(rng, {0.0, 0.0}, window.radius);
        p.tier = tier;
        pat.points.push_back(p);
    }
    return pat;
}

PointPattern sample_mcp(const MatClusterSpec& spec, const Window& window, Rng& rng) {
    spec.validate();
    window.validate();
    PointPattern pat{window, {}};
    const double parent_radius = window.radius + spec.radius;
    const std::uint64_t n_parents =
        rng.poisson(spec.parent_density * kPi * parent_radius * parent_radius);
    for (std::uint64_t ip = 0; ip < n_parents; ++ip) {
        const Point parent = sample_in_disk(rng, {0.0, 0.0}, parent_radius);
        const std::uint64_t n_daughters = rng.poisson(spec.mean_points);
        for (std::uint64_t id = 0; id < n_daughters; ++id) {
            TaggedPoint p;
            p.pos = sample_in_disk(rng, parent, spec.radius);
            p.tier = Tier::SBS;
            p.parent_id = static_cast<std::int64_t>(ip);
            if (window.contains(p.pos)) pat.points.push_back(p);
        }
    }
    return pat;
}

PointPattern sample_socp(const SocpSpec& spec, const Window& window, Rng& rng) {
    spec.validate();
    window.validate();
    PointPattern pat{window, {}};
    const double parent_radius = window.radius + spec.cluster_reach();
    const std::uint64_t n_parents =
        rng.poisson(spec.parent_density * kPi * parent_radius * parent_radius);
    std::int64_t first_order_counter = 0;
    for (std::uint64_t ip = 0; ip < n_parents; ++ip) {
        const Point parent = sample_in_disk(rng, {0.0, 0.0}, parent_radius);
        const std::uint64_t n_first = rng.poisson(spec.first_mean);
        for (std::uint64_t jf = 0; jf < n_first; ++jf) {
            const double r1 = sample_reverse_gaussian_radius(rng, spec.first_radius, spec.sigma);
            const double phi = 2.0 * kPi * rng.uniform();
            const Point first{parent.x + r1 * std::cos(phi), parent.y + r1 * std::sin(phi)};
            const std::int64_t first_id = first_order_counter++;
            const std::uint64_t n_daughters = rng.poisson(spec.second_mean);
            for (std::uint64_t id = 0; id < n_daughters; ++id) {
                TaggedPoint p;
                p.pos = sample_in_disk(rng, first, spec.second_radius);
                p.tier = Tier::SBS;
                p.parent_id = static_cast<std::int64_t>(ip);
                p.first_order_id = first_id;
                if (window.contains(p.pos)) pat.points.push_back(p);
            }
        }
    }
    return pat;
}

double pdf_serving_distance(double r, double D) {
    if (!(D > 0.0)) throw std::domain_error("pdf_serving_distance: D must be > 0");
    if (r < 0.0 || r > D) return 0.0;
    return 2.0 * r / (D * D);
}

double sample_serving_distance(double u, double D) {
    if (!(D > 0.0)) throw std::domain_error("sample_serving_distance: D must be > 0");
    return D * std::sqrt(u);
}

double lens_area(double r, double R) {
    if (r < 0.0) throw std::domain_error("lens_area: r must be >= 0");
    if (!(R > 0.0)) throw std::domain_error("lens_area: R must be > 0");
    if (r >= 2.0 * R) return 0.0;
    const double half = 0.5 * r;
    return 2.0 * R * R * std::acos(half / R) - r * std::sqrt(R * R - half * half);
}

}  // namespace hcn

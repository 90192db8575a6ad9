#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hcn/rng.hpp"

namespace hcn {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Matern cluster process: PPP parents, Poisson(c) daughters uniform in a
/// disk of radius R around each parent. Density lambda = parent_density * c.
struct MatClusterSpec {
    double parent_density = 0.0;  // lambda_M0
    double mean_points = 0.0;     // c_M
    double radius = 0.0;          // R_M

    double density() const { return parent_density * mean_points; }
    void validate() const;
};

/// Second-order cluster process: PPP parents, Poisson(c1) first-order points
/// with a reverse-Gaussian radial law on [0, R1], Poisson(c2) daughters
/// uniform in a disk of radius R2 around each first-order point.
struct SocpSpec {
    double parent_density = 0.0;  // lambda_S0
    double first_mean = 0.0;      // c_S'
    double first_radius = 0.0;    // R_S'
    double sigma = 0.0;           // std dev of the reverse-Gaussian law
    double second_mean = 0.0;     // c_S
    double second_radius = 0.0;   // R_S

    double density() const { return parent_density * first_mean * second_mean; }
    double cluster_reach() const { return first_radius + second_radius; }
    void validate() const;
};

/// Circular simulation window centered at the origin.
struct Window {
    double radius = 0.0;
    void validate() const;
    bool contains(const Point& p) const { return p.x * p.x + p.y * p.y <= radius * radius; }
};

enum class Tier : std::uint8_t { MBS, SBS };

struct TaggedPoint {
    Point pos;
    Tier tier = Tier::SBS;
    std::int64_t parent_id = -1;       // parent index, -1 when not applicable
    std::int64_t first_order_id = -1;  // SOCP first-order index, -1 otherwise
};

struct PointPattern {
    Window window;
    std::vector<TaggedPoint> points;
};

/// CSV dump with header `x,y,tier,parent_id,first_order_id`; empty fields
/// where a tag does not apply.
void write_pattern_csv(std::ostream& os, const PointPattern& pattern);

Point sample_in_disk(Rng& rng, const Point& center, double radius);

/// Radial distance of a first-order SOCP point from its parent; density
/// proportional to r(1 - exp(-r^2/2sigma^2)) on [0, R1]. Rejection against
/// the uniform-disk envelope.
double sample_reverse_gaussian_radius(Rng& rng, double first_radius, double sigma);

PointPattern sample_ppp(double density, const Window& window, Rng& rng, Tier tier = Tier::SBS);

/// Parents are drawn on the window dilated by the cluster radius so the
/// daughter intensity is stationary inside the window.
PointPattern sample_mcp(const MatClusterSpec& spec, const Window& window, Rng& rng);

PointPattern sample_socp(const SocpSpec& spec, const Window& window, Rng& rng);

/// Serving-distance PDF f(r) = 2r/D^2 on [0, D] and its inverse-CDF sampler.
double pdf_serving_distance(double r, double D);
double sample_serving_distance(double u, double D);

/// Intersection area of two radius-R disks with centers r apart (0 for r >= 2R).
double lens_area(double r, double R);

}  // namespace hcn

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "hcn/model.hpp"
#include "hcn/quadrature.hpp"
#include "hcn/radio.hpp"

namespace hcn {

/// Interference-correlation result at probe separation u. For cluster fields
/// zeta = (theta + F)/(theta' + F); F = 0 recovers the PPP coefficient.
struct CorrelationReport {
    double zeta = 0.0;
    double f_value = 0.0;      // F(c,R); 0 for the PPP field
    double theta = 0.0;        // cross integral of g_eps at separation u
    double theta_prime = 0.0;  // (E[h^2]/E[h]^2) * integral of g_eps^2
    double eps = 0.0;
    double u = 0.0;
    std::string method;  // "exact", "approx" or "monte-carlo"
    std::optional<double> stderr_mc;
};

/// Closed form of the planar integral of g_eps (Appendix-D radial integral).
double gain_integral(const RadioParams& p);

/// Closed form of the planar integral of g_eps^2.
double gain_sq_integral(const RadioParams& p);

/// Mean interference E[h] * lambda * integral(g_eps); identical for PPP, MCP
/// and SOCP fields of equal density.
double mean_interference(double density, const RadioParams& p);

/// Cross integral of g_eps at probe separation u >= 0 (theta in the zeta
/// formulas), by polar quadrature with a power-law tail bound.
double theta_cross(double u, const RadioParams& p);

/// Cluster term F(c,R): the double planar integral of g(X)g(Y)A_R(|X-Y|)
/// scaled by c/(pi^2 R^4), reduced to radial form via the convolution
/// identity int g(X) g(X-w) dX = theta(|w|). Relative target 1e-4.
double f_exact(double c, double R, const RadioParams& p);

/// Large-R closed form of F(c,R).
double f_approx(double c, double R, const RadioParams& p);

/// Mean product of interference at two probes separated by u.
double mean_product(double density, double c, double R, double u, const RadioParams& p);

/// Second moment of interference at one probe.
double second_moment(double density, double c, double R, const RadioParams& p);

CorrelationReport zeta_cluster(double c, double R, double u, const RadioParams& p);
CorrelationReport zeta_ppp(double u, const RadioParams& p);
/// zeta with F evaluated by the large-R approximation.
CorrelationReport zeta_cluster_approx(double c, double R, double u, const RadioParams& p);

class EstimationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using InterfererField = std::variant<PppSpec, MatClusterSpec, SocpSpec>;

struct ZetaMcOptions {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double window_radius = 0.0;  // 0 = 10 x max(R, eps^(-1/alpha), u)
    int threads = 1;
};

/// Pearson correlation of I_eps at two probes |U1-U2| = u across independent
/// network draws, fresh fading per probe and slot; jackknife standard error.
CorrelationReport estimate_zeta_mc(const InterfererField& field, double u,
                                   const RadioParams& p, const ZetaMcOptions& opts);

}  // namespace hcn

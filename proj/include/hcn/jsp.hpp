#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hcn/model.hpp"
#include "hcn/quadrature.hpp"

namespace hcn {

enum class UserClass { MU, SU };

std::string to_string(UserClass u);

/// Alternating binomial sum Q_n(beta); the own-tier exponent coefficient in
/// the PPP joint success probability (interferers outside the serving
/// distance). Equals 2 pi int_1^inf [1 - (1 + beta t^-alpha)^-n] t dt.
double q_n(int n, double beta, double delta);

/// Cross-tier constant U_n = pi^2 delta / sin(pi delta) * Gamma(n+delta) /
/// (Gamma(n) Gamma(1+delta)).
double u_n(int n, double delta);

struct JspResult {
    int n = 1;
    UserClass user = UserClass::MU;
    double value = 0.0;
    std::optional<double> lower;
    std::optional<double> upper;
    std::string method;
};

/// PPP-model joint success probability from the Q_n/U_n closed forms at the
/// given exponent and association radius. exact_D keeps the (1 - e^(-a D^2))
/// factor produced by averaging the conditional form over f(r) = 2r/D^2; the
/// printed large-D simplification drops it.
double jsp_ppp_value(int n, UserClass user, double lambda_m, double lambda_s,
                     const RadioParams& radio, double D, bool exact_D = true);

/// jsp_ppp for a model whose SBS tier is a PPP.
JspResult jsp_ppp(int n, UserClass user, const HcnModel& model, bool exact_D = true);

/// Radial PGFL argument v(x) in (0,1] with v -> 1 at infinity; tail_coeff
/// describes 1 - v(x) ~ tail_coeff * x^(-tail_power), used for analytic tail
/// corrections past the quadrature truncation. jump_radius marks the
/// exclusion-ball edge so quadratures split there (-1 when continuous).
struct RadialProfile {
    std::function<double(double)> value;
    double jump_radius = -1.0;
    double tail_coeff = 0.0;
    double tail_power = 4.0;
};

enum class PgflMethod { Nested, QuasiMonteCarlo };

struct PgflOptions {
    PgflMethod method = PgflMethod::Nested;
    int grid_nodes = 256;   // log-grid size of the cached averaged stages
    int qmc_nodes = 65536;  // low-discrepancy budget, split across the 2-D averages
    double rel_tol = 1e-6;  // outer quadrature tolerance
};

/// Probability generating functional of the tier process for the radial
/// profile. PPP: exp(-lambda int (1-v)). MCP/SOCP: nested cluster forms with
/// the disk/ring averages cached on a log grid. reduced_palm multiplies the
/// representative-cluster factors with the conditioned point palm_offset away
/// from the profile origin (for a PPP the reduced Palm PGFL is the PGFL
/// itself). The parent offset of the sibling first-order clusters in the SOCP
/// Palm factor is approximated by the conditioned point's own location.
double pgfl(const TierProcess& proc, const RadialProfile& profile, const PgflOptions& opts = {},
            bool reduced_palm = false, double palm_offset = 0.0);

struct JspOptions {
    PgflOptions pgfl;
    double r_rel_tol = 1e-5;  // tolerance of the serving-distance average
};

/// Conditional joint success probability at serving distance r: product of
/// the own-tier reduced-Palm PGFL (profile zeroed inside the serving ball)
/// and the cross-tier PGFL (integrated from 0). Evaluated through the PGFL
/// quadratures for every variant, so the PPP case is an independent route to
/// the Q_n/U_n closed form.
double jsp_conditional(int n, double r, UserClass user, const HcnModel& model,
                       const JspOptions& opts = {});

/// Average of jsp_conditional over the serving-distance PDF 2r/D^2.
JspResult jsp(int n, UserClass user, const HcnModel& model, const JspOptions& opts = {});

/// Young's-inequality constant bounding the SOCP Palm PGFL.
double gamma_const(const SocpSpec& spec);

/// PPP sandwich of the cluster-model joint success probability; both sides
/// evaluated with the model's own association radii and exact_D form.
JspResult jsp_bounds(int n, UserClass user, const HcnModel& model);

}  // namespace hcn

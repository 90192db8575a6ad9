#pragma once

#include <optional>
#include <string>
#include <variant>

#include "hcn/geometry.hpp"
#include "hcn/radio.hpp"

namespace hcn {

enum class SbsVariant { PPP, MCP, SOCP };

std::string to_string(SbsVariant v);

/// Baseline small-cell tier: a PPP of the given density.
struct PppSpec {
    double density = 0.0;  // lambda_P
    void validate() const {
        if (!(density >= 0.0)) throw std::invalid_argument("PppSpec: density must be >= 0");
    }
};

struct AssociationRadii {
    double mbs = 0.0;  // D_m
    double sbs = 0.0;  // D_s
};

/// One interferer field: PPP, MCP or SOCP.
using TierProcess = std::variant<PppSpec, MatClusterSpec, SocpSpec>;

/// Two-tier network: MBS PPP plus one of the three SBS tier models. In the
/// SOCP model the MBSs are identified with the SOCP parent process, so
/// mbs_density must equal the SOCP parent density there.
struct HcnModel {
    double mbs_density = 0.0;  // lambda_m
    TierProcess sbs;
    RadioParams radio;
    std::optional<AssociationRadii> radii_override;

    SbsVariant variant() const {
        if (std::holds_alternative<PppSpec>(sbs)) return SbsVariant::PPP;
        if (std::holds_alternative<MatClusterSpec>(sbs)) return SbsVariant::MCP;
        return SbsVariant::SOCP;
    }

    double sbs_density() const;
    /// Largest daughter-to-cluster-center reach of the SBS tier (0 for PPP).
    double cluster_reach() const;
    void validate() const;
};

/// Association-disk radii (D_m, D_s). MCP: D_m = [pi(lambda_m+lambda_M0)]^-1/2
/// and D_s = D_m/sqrt(c_M); SOCP: D_m = [pi(lambda_m+c_S' lambda_S0)]^-1/2 and
/// D_s = D_m/sqrt(c_S' c_S); PPP reuses the MCP form with lambda_P for the
/// parent density and D_s = D_m. An override on the model wins.
AssociationRadii association_radii(const HcnModel& model);

}  // namespace hcn

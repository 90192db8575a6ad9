#include "hcn/model.hpp"

#include <cmath>

namespace hcn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(SbsVariant v) {
    switch (v) {
        case SbsVariant::PPP: return "PPP";
        case SbsVariant::MCP: return "MCP";
        default: return "SOCP";
    }
}

double HcnModel::sbs_density() const {
    if (const auto* p = std::get_if<PppSpec>(&sbs)) return p->density;
    if (const auto* m = std::get_if<MatClusterSpec>(&sbs)) return m->density();
    return std::get<SocpSpec>(sbs).density();
}

double HcnModel::cluster_reach() const {
    if (const auto* m = std::get_if<MatClusterSpec>(&sbs)) return m->radius;
    if (const auto* s = std::get_if<SocpSpec>(&sbs)) return s->cluster_reach();
    return 0.0;
}

void HcnModel::validate() const {
    if (!(mbs_density > 0.0)) throw std::invalid_argument("HcnModel: mbs_density must be > 0");
    radio.validate();
    if (const auto* p = std::get_if<PppSpec>(&sbs)) {
        p->validate();
    } else if (const auto* m = std::get_if<MatClusterSpec>(&sbs)) {
        m->validate();
    } else {
        const auto& s = std::get<SocpSpec>(sbs);
        s.validate();
        if (std::fabs(mbs_density - s.parent_density) > 1e-12 * s.parent_density)
            throw std::invalid_argument(
                "HcnModel: SOCP variant requires mbs_density == SOCP parent density");
    }
    if (radii_override) {
        if (!(radii_override->mbs > 0.0) || !(radii_override->sbs > 0.0))
            throw std::invalid_argument("HcnModel: overridden radii must be > 0");
    }
}

AssociationRadii association_radii(const HcnModel& model) {
    model.validate();
    if (model.radii_override) return *model.radii_override;
    AssociationRadii out;
    switch (model.variant()) {
        case SbsVariant::PPP: {
            const double total = model.mbs_density + std::get<PppSpec>(model.sbs).density;
            if (!(total > 0.0)) throw std::domain_error("association_radii: zero total density");
            out.mbs = 1.0 / std::sqrt(kPi * total);
            out.sbs = out.mbs;
            break;
        }
        case SbsVariant::MCP: {
            const auto& m = std::get<MatClusterSpec>(model.sbs);
            const double total = model.mbs_density + m.parent_density;
            out.mbs = 1.0 / std::sqrt(kPi * total);
            if (!(m.mean_points > 0.0))
                throw std::domain_error("association_radii: c_M must be > 0 for the SBS radius");
            out.sbs = out.mbs / std::sqrt(m.mean_points);
            break;
        }
        case SbsVariant::SOCP: {
            const auto& s = std::get<SocpSpec>(model.sbs);
            const double total = model.mbs_density + s.first_mean * s.parent_density;
            out.mbs = 1.0 / std::sqrt(kPi * total);
            out.sbs = out.mbs / std::sqrt(s.first_mean * s.second_mean);
            break;
        }
    }
    return out;
}

}  // namespace hcn

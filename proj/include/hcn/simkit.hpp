#pragma once

#include <cstdint>
#include <vector>

#include "hcn/jsp.hpp"
#include "hcn/model.hpp"

namespace hcn {

enum class Scheme { Simple, RandomP, CorrelationAware };

std::string to_string(Scheme s);

/// Retransmission policy. RandomP transmits each slot with probability p.
/// CorrelationAware acts per cluster on the fraction of transmitting nodes
/// that succeeded: fraction >= tau -> everyone transmits next slot; otherwise
/// failures back off uniformly on {1..backoff_max}; if every transmitting
/// node failed, each node independently transmits next slot with probability
/// q_all_fail. count_silent_in_fraction includes backed-off nodes in the
/// denominator of the fraction.
struct SchemeDescriptor {
    Scheme kind = Scheme::Simple;
    double p = 1.0;
    double tau = 0.5;
    int backoff_max = 3;
    double q_all_fail = 0.5;
    bool count_silent_in_fraction = false;

    void validate() const;
};

struct SimConfig {
    HcnModel model;
    double window_radius = 0.0;  // 0 = max(5 x D_m, 5 x cluster reach)
    int slots = 4;               // HARQ horizon n for simulate_jsp
    int horizon = 400;           // slot count T for simulate_retransmission
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    UserClass user = UserClass::MU;
    SchemeDescriptor scheme;
    int threads = 1;

    double resolved_window() const;
    void validate() const;  // enforces window >= 5 x cluster reach and >= 5 x D_m
};

struct JspEstimate {
    int n = 1;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

/// Wilson score interval at 95%.
JspEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials, int n);

/// Monte-Carlo joint success probability for n = 1..config.slots.
///
/// Typical-link construction mirrors the analytic model: the serving BS of
/// the requested tier sits at the window center with the rest of its tier
/// drawn around it (for clustered tiers the representative cluster is added),
/// the user is uniform in the association disk, and own-tier interferers
/// inside the serving distance are dropped, matching the exclusion in the
/// conditional success probability. Cross-tier interferers are never
/// excluded. In the SOCP model the MBSs are the SBS parents, so the two
/// tiers are sampled jointly. Path loss is the singular x^-alpha law.
std::vector<JspEstimate> simulate_jsp(const SimConfig& config);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Mean of I_eps at probe locations over independent draws of the SBS tier
/// field (unit transmit power, smoothed gain), for the Lemma-1 cross-model
/// invariance check.
MeanEstimate estimate_mean_interference(const SimConfig& config, int probes_per_trial);

struct RetransEstimate {
    Scheme scheme = Scheme::Simple;
    double success_prob = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
};

/// Slot-based retransmission simulation over the clustered SBS tier; each SBS
/// serves one user placed uniformly in its association disk. The metric is
/// successful transmissions over transmission attempts after a warm-up of
/// horizon/5 slots, counted for SBSs away from the window edge. Fading is
/// derived from (seed, trial, slot, link) counters so schemes that make the
/// same transmit decisions produce identical trajectories.
RetransEstimate simulate_retransmission(const SimConfig& config);

}  // namespace hcn

#include "hcn/simkit.hpp"

#include <algorithm>
#include <cmath>

#include "hcn/parallel.hpp"
#include "hcn/rng.hpp"

namespace hcn {

namespace {

constexpr double kPi = 3.14159265358979323846;
// stream tags keep fading, decisions and placement independent
constexpr std::uint64_t kFadingTag = 0x66616465ULL;
constexpr std::uint64_t kSchemeTag = 0x73636d65ULL;

double counter_exponential(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) {
    Rng r(derive_seed(seed ^ kFadingTag, a, b, c));
    return r.exponential();
}

double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    Rng r(derive_seed(seed ^ kSchemeTag, a, b, c));
    return r.uniform();
}

// x^-alpha from the squared distance; alpha = 4 avoids pow entirely
inline double path_gain_sq(double d2, double alpha) {
    if (alpha == 4.0) return 1.0 / (d2 * d2);
    return std::pow(d2, -0.5 * alpha);
}

struct Bs {
    Point pos;
    Tier tier = Tier::SBS;
    std::int64_t cluster = -1;  // retransmission grouping
};

// Realized two-tier network around the window center. serving_index points
// into bs for simulate_jsp; retransmission runs ignore it.
struct Network {
    std::vector<Bs> bs;
    int serving_index = -1;
};

void append_pattern(std::vector<Bs>& out, const PointPattern& pat, Tier tier, bool socp_group) {
    for (const auto& p : pat.points)
        out.push_back({p.pos, tier, socp_group ? p.first_order_id : p.parent_id});
}

// Representative cluster of the serving SBS under the reduced Palm measure:
// the serving point sits at `serving`, its cluster center is a fresh
// displacement away, and sibling daughters are drawn around that center.
void add_representative_mcp(const MatClusterSpec& spec, const Point& serving, Rng& rng,
                            std::vector<Bs>& out) {
    const Point parent = sample_in_disk(rng, serving, spec.radius);
    const std::uint64_t nd = rng.poisson(spec.mean_points);
    for (std::uint64_t i = 0; i < nd; ++i)
        out.push_back({sample_in_disk(rng, parent, spec.radius), Tier::SBS, -2});
}

// The SOCP representative structure: the serving point's second-order
// cluster, and the other first-order clusters of the same parent.
void add_representative_socp(const SocpSpec& spec, const Point& serving, Rng& rng,
                             std::vector<Bs>& out) {
    const Point first = sample_in_disk(rng, serving, spec.second_radius);
    const double r1 = sample_reverse_gaussian_radius(rng, spec.first_radius, spec.sigma);
    const double phi = 2.0 * kPi * rng.uniform();
    const Point parent{first.x + r1 * std::cos(phi), first.y + r1 * std::sin(phi)};
    const std::uint64_t nd = rng.poisson(spec.second_mean);
    for (std::uint64_t i = 0; i < nd; ++i)
        out.push_back({sample_in_disk(rng, first, spec.second_radius), Tier::SBS, -2});
    const std::uint64_t nf = rng.poisson(spec.first_mean);
    for (std::uint64_t jf = 0; jf < nf; ++jf) {
        const double r2 = sample_reverse_gaussian_radius(rng, spec.first_radius, spec.sigma);
        const double phi2 = 2.0 * kPi * rng.uniform();
        const Point sibling_first{parent.x + r2 * std::cos(phi2), parent.y + r2 * std::sin(phi2)};
        const std::uint64_t nd2 = rng.poisson(spec.second_mean);
        for (std::uint64_t i = 0; i < nd2; ++i)
            out.push_back({sample_in_disk(rng, sibling_first, spec.second_radius), Tier::SBS, -3});
    }
}

}  // namespace

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Simple: return "simple";
        case Scheme::RandomP: return "random-p";
        default: return "correlation-aware";
    }
}

void SchemeDescriptor::validate() const {
    if (kind == Scheme::RandomP && !(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("SchemeDescriptor: p must lie in (0,1]");
    if (kind == Scheme::CorrelationAware) {
        if (!(tau >= 0.0 && tau <= 1.0))
            throw std::invalid_argument("SchemeDescriptor: tau must lie in [0,1]");
        if (backoff_max < 1)
            throw std::invalid_argument("SchemeDescriptor: backoff_max must be >= 1");
        if (!(q_all_fail >= 0.0 && q_all_fail <= 1.0))
            throw std::invalid_argument("SchemeDescriptor: q_all_fail must lie in [0,1]");
    }
}

double SimConfig::resolved_window() const {
    if (window_radius > 0.0) return window_radius;
    const auto radii = association_radii(model);
    return 5.0 * std::max(radii.mbs, model.cluster_reach());
}

void SimConfig::validate() const {
    model.validate();
    scheme.validate();
    if (trials < 100) throw std::invalid_argument("SimConfig: trials must be >= 100");
    if (slots < 1) throw std::invalid_argument("SimConfig: slots must be >= 1");
    if (horizon < 10) throw std::invalid_argument("SimConfig: horizon must be >= 10");
    const auto radii = association_radii(model);
    const double w = resolved_window();
    const double need = 5.0 * std::max(radii.mbs, model.cluster_reach());
    if (w < need * (1.0 - 1e-12))
        throw std::invalid_argument(
            "SimConfig: window radius must be at least 5x the association radius and cluster reach");
}

JspEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials, int n) {
    JspEstimate e;
    e.n = n;
    e.successes = successes;
    e.trials = trials;
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = phat + z2 / (2.0 * nn);
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    e.estimate = phat;
    e.ci_low = std::max(0.0, (center - half) / denom);
    e.ci_high = std::min(1.0, (center + half) / denom);
    return e;
}

std::vector<JspEstimate> simulate_jsp(const SimConfig& config) {
    config.validate();
    const auto radii = association_radii(config.model);
    const double D = (config.user == UserClass::MU) ? radii.mbs : radii.sbs;
    const RadioParams& radio = config.model.radio;
    const double alpha = radio.alpha;
    const double beta = (config.user == UserClass::MU) ? radio.beta_m : radio.beta_s;
    const double p_own = (config.user == UserClass::MU) ? radio.power_mbs : radio.power_sbs;
    const double p_cross = (config.user == UserClass::MU) ? radio.power_sbs : radio.power_mbs;
    const SbsVariant variant = config.model.variant();

    // Per-tier windows: a tier contributes interference out to roughly
    // (n beta_eff)^(1/alpha) times the serving distance, so each window grows
    // with its tier's effective threshold to keep the truncated tail
    // negligible against the Monte-Carlo error.
    const double beta_cross_eff = beta * p_cross / p_own;
    const double own_reach = (config.user == UserClass::SU) ? config.model.cluster_reach() : 0.0;
    const double cross_reach = (config.user == UserClass::MU) ? config.model.cluster_reach() : 0.0;
    auto auto_window = [&](double beta_eff, double reach) {
        const double scale = std::pow(std::max(config.slots * beta_eff, 1e-6), 1.0 / alpha);
        return std::max({5.0 * D, 5.0 * reach, 12.0 * scale * D});
    };
    double w_own = auto_window(beta, own_reach);
    double w_cross = auto_window(beta_cross_eff, cross_reach);
    if (config.window_radius > 0.0) w_own = w_cross = config.window_radius;
    const Window own_window{w_own};
    const Window cross_window{w_cross};

    const std::uint64_t n_trials = config.trials;
    const int slots = config.slots;
    std::vector<std::uint32_t> joint(n_trials, 0);

    parallel_for(n_trials, config.threads, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        const double r = sample_serving_distance(rng.uniform(), D);
        const double user_phi = 2.0 * kPi * rng.uniform();
        const Point user{r * std::cos(user_phi), r * std::sin(user_phi)};
        const Point serving{0.0, 0.0};

        // own tier around the serving BS at the center (reduced-Palm
        // construction; for clustered tiers the representative cluster rides
        // along), cross tier as an independent stationary field
        std::vector<Bs> own, cross;
        if (config.user == UserClass::MU) {
            append_pattern(own, sample_ppp(config.model.mbs_density, own_window, rng, Tier::MBS),
                           Tier::MBS, false);
            switch (variant) {
                case SbsVariant::PPP:
                    append_pattern(cross,
                                   sample_ppp(std::get<PppSpec>(config.model.sbs).density,
                                              cross_window, rng),
                                   Tier::SBS, false);
                    break;
                case SbsVariant::MCP:
                    append_pattern(cross,
                                   sample_mcp(std::get<MatClusterSpec>(config.model.sbs),
                                              cross_window, rng),
                                   Tier::SBS, false);
                    break;
                case SbsVariant::SOCP:
                    append_pattern(cross,
                                   sample_socp(std::get<SocpSpec>(config.model.sbs), cross_window,
                                               rng),
                                   Tier::SBS, false);
                    break;
            }
        } else {
            switch (variant) {
                case SbsVariant::PPP:
                    append_pattern(own,
                                   sample_ppp(std::get<PppSpec>(config.model.sbs).density,
                                              own_window, rng),
                                   Tier::SBS, false);
                    break;
                case SbsVariant::MCP:
                    add_representative_mcp(std::get<MatClusterSpec>(config.model.sbs), serving,
                                           rng, own);
                    append_pattern(own,
                                   sample_mcp(std::get<MatClusterSpec>(config.model.sbs),
                                              own_window, rng),
                                   Tier::SBS, false);
                    break;
                case SbsVariant::SOCP:
                    add_representative_socp(std::get<SocpSpec>(config.model.sbs), serving, rng,
                                            own);
                    append_pattern(own,
                                   sample_socp(std::get<SocpSpec>(config.model.sbs), own_window,
                                               rng),
                                   Tier::SBS, false);
                    break;
            }
            append_pattern(cross,
                           sample_ppp(config.model.mbs_density, cross_window, rng, Tier::MBS),
                           Tier::MBS, false);
        }

        // own-tier exclusion: the association model leaves no same-tier BS
        // closer to the user than the serving one
        std::vector<double> d2_own, d2_cross;
        d2_own.reserve(own.size());
        d2_cross.reserve(cross.size());
        const double r2 = r * r;
        for (const auto& b : own) {
            const double dx = b.pos.x - user.x, dy = b.pos.y - user.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 > r2) d2_own.push_back(d2);
        }
        for (const auto& b : cross) {
            const double dx = b.pos.x - user.x, dy = b.pos.y - user.y;
            d2_cross.push_back(dx * dx + dy * dy);
        }

        std::uint32_t mask = 0;
        bool alive = true;
        for (int k = 0; k < slots && alive; ++k) {
            std::uint64_t link = 0;
            double interference = 0.0;
            for (const double d2 : d2_own)
                interference += p_own * counter_exponential(config.seed, t, k, link++) *
                                path_gain_sq(d2, alpha);
            for (const double d2 : d2_cross)
                interference += p_cross * counter_exponential(config.seed, t, k, link++) *
                                path_gain_sq(d2, alpha);
            const double signal =
                p_own * counter_exponential(config.seed, t, k, link++) * path_gain_sq(r2, alpha);
            const bool ok = interference > 0.0 ? (signal / interference > beta) : true;
            if (ok)
                mask |= (1u << k);
            else
                alive = false;
        }
        joint[t] = mask;
    });

    std::vector<JspEstimate> out;
    out.reserve(slots);
    for (int n = 1; n <= slots; ++n) {
        const std::uint32_t want = (n >= 32) ? ~0u : ((1u << n) - 1);
        std::uint64_t succ = 0;
        for (std::uint64_t t = 0; t < n_trials; ++t)
            if ((joint[t] & want) == want) ++succ;
        out.push_back(wilson_interval(succ, n_trials, n));
    }
    return out;
}

MeanEstimate estimate_mean_interference(const SimConfig& config, int probes_per_trial) {
    config.model.radio.validate();
    if (probes_per_trial < 1)
        throw std::invalid_argument("estimate_mean_interference: need >= 1 probe");
    if (config.trials < 1) return {};
    const double reach = config.model.cluster_reach();
    double wr = config.window_radius;
    if (wr <= 0.0)
        wr = 10.0 * std::max({reach, std::pow(config.model.radio.eps, -1.0 / config.model.radio.alpha),
                              1.0});
    const Window window{wr};
    const RadioParams& radio = config.model.radio;

    std::vector<double> per_trial(config.trials);
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        PointPattern pat;
        if (const auto* pp = std::get_if<PppSpec>(&config.model.sbs)) {
            pat = sample_ppp(pp->density, window, rng);
        } else if (const auto* m = std::get_if<MatClusterSpec>(&config.model.sbs)) {
            pat = sample_mcp(*m, window, rng);
        } else {
            pat = sample_socp(std::get<SocpSpec>(config.model.sbs), window, rng);
        }
        double acc = 0.0;
        for (int pr = 0; pr < probes_per_trial; ++pr) {
            const Point probe = sample_in_disk(rng, {0.0, 0.0}, 0.25 * wr);
            double ii = 0.0;
            for (const auto& p : pat.points)
                ii += rng.exponential() * g_eps(dist(p.pos, probe), radio);
            acc += ii;
        }
        per_trial[t] = acc / probes_per_trial;
    });
    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= static_cast<double>(config.trials);
    double ss = 0.0;
    for (double v : per_trial) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / std::max<std::uint64_t>(1, config.trials - 1));
    return {mean, sd / std::sqrt(static_cast<double>(config.trials)),
            config.trials * static_cast<std::uint64_t>(probes_per_trial)};
}

RetransEstimate simulate_retransmission(const SimConfig& config) {
    config.validate();
    if (config.model.variant() == SbsVariant::PPP)
        throw std::invalid_argument("simulate_retransmission: SBS tier must be clustered");
    const Window window{config.resolved_window()};
    const auto radii = association_radii(config.model);
    const RadioParams& radio = config.model.radio;
    const double alpha = radio.alpha;
    const double beta = radio.beta_s;  // scheme runs on the small-cell tier
    const int warmup = config.horizon / 5;
    const double measure_radius = 0.7 * window.radius;

    std::vector<std::uint64_t> attempts(config.trials, 0), successes(config.trials, 0);

    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        std::vector<Bs> bs;
        if (config.model.variant() == SbsVariant::MCP) {
            append_pattern(bs, sample_mcp(std::get<MatClusterSpec>(config.model.sbs), window, rng),
                           Tier::SBS, false);
            append_pattern(bs, sample_ppp(config.model.mbs_density, window, rng, Tier::MBS),
                           Tier::MBS, false);
        } else {
            sample_socp_coupled(std::get<SocpSpec>(config.model.sbs), window, rng, true, bs);
        }
        // stable ordering: SBSs first, then MBSs, preserving draw order
        std::stable_partition(bs.begin(), bs.end(),
                              [](const Bs& b) { return b.tier == Tier::SBS; });
        std::size_t n_sbs = 0;
        while (n_sbs < bs.size() && bs[n_sbs].tier == Tier::SBS) ++n_sbs;

        std::vector<Point> users(n_sbs);
        std::vector<bool> measured(n_sbs);
        for (std::size_t i = 0; i < n_sbs; ++i) {
            users[i] = sample_in_disk(rng, bs[i].pos, radii.sbs);
            measured[i] = std::hypot(bs[i].pos.x, bs[i].pos.y) <= measure_radius;
        }

        std::vector<std::uint8_t> transmitting(n_sbs, 1);
        std::vector<int> backoff(n_sbs, 0);
        std::vector<std::uint8_t> succ(n_sbs, 0);
        std::uint64_t n_att = 0, n_succ = 0;

        std::vector<std::int64_t> clusters;
        for (std::size_t i = 0; i < n_sbs; ++i) clusters.push_back(bs[i].cluster);
        std::sort(clusters.begin(), clusters.end());
        clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());

        for (int slot = 0; slot < config.horizon; ++slot) {
            // transmit decisions for this slot
            if (config.scheme.kind == Scheme::RandomP) {
                for (std::size_t i = 0; i < n_sbs; ++i)
                    transmitting[i] =
                        counter_uniform(config.seed, t, slot, i) < config.scheme.p ? 1 : 0;
            } else if (config.scheme.kind == Scheme::Simple) {
                std::fill(transmitting.begin(), transmitting.end(), 1);
            }
            // (CorrelationAware: transmitting[] was set by the previous slot)

            for (std::size_t i = 0; i < n_sbs; ++i) {
                if (!transmitting[i]) continue;
                double interference = 0.0;
                std::uint64_t link_base = i * (bs.size() + 1);
                for (std::size_t j = 0; j < bs.size(); ++j) {
                    if (j == i) continue;
                    if (j < n_sbs && !transmitting[j]) continue;
                    const double power = bs[j].tier == Tier::SBS ? radio.power_sbs : radio.power_mbs;
                    interference += power *
                                    counter_exponential(config.seed, t, slot, link_base + j) *
                                    std::pow(dist(bs[j].pos, users[i]), -alpha);
                }
                const double signal = radio.power_sbs *
                                      counter_exponential(config.seed, t, slot, link_base + i) *
                                      std::pow(dist(bs[i].pos, users[i]), -alpha);
                succ[i] = interference > 0.0 ? (signal / interference > beta ? 1 : 0) : 1;
                if (slot >= warmup && measured[i]) {
                    ++n_att;
                    if (succ[i]) ++n_succ;
                }
            }

            if (config.scheme.kind != Scheme::CorrelationAware) continue;

            // per-cluster decision for the next slot
            for (std::size_t i = 0; i < n_sbs; ++i)
                if (backoff[i] > 0) --backoff[i];
            std::vector<std::uint8_t> next(n_sbs, 0);
            for (std::int64_t cid : clusters) {
                int tx = 0, ok = 0, members = 0;
                for (std::size_t i = 0; i < n_sbs; ++i) {
                    if (bs[i].cluster != cid) continue;
                    ++members;
                    if (transmitting[i]) {
                        ++tx;
                        if (succ[i]) ++ok;
                    }
                }
                if (tx == 0) {
                    // nobody transmitted: backed-off nodes resume as they expire
                    for (std::size_t i = 0; i < n_sbs; ++i)
                        if (bs[i].cluster == cid && backoff[i] == 0) next[i] = 1;
                    continue;
                }
                const int denom = config.scheme.count_silent_in_fraction ? members : tx;
                const double frac = static_cast<double>(ok) / denom;
                if (ok == 0) {
                    // every transmission failed: random restart
                    for (std::size_t i = 0; i < n_sbs; ++i) {
                        if (bs[i].cluster != cid) continue;
                        backoff[i] = 0;
                        next[i] = counter_uniform(config.seed, t, slot, n_sbs + i) <
                                          config.scheme.q_all_fail
                                      ? 1
                                      : 0;
                    }
                } else if (frac >= config.scheme.tau) {
                    for (std::size_t i = 0; i < n_sbs; ++i) {
                        if (bs[i].cluster != cid) continue;
                        backoff[i] = 0;
                        next[i] = 1;
                    }
                } else {
                    for (std::size_t i = 0; i < n_sbs; ++i) {
                        if (bs[i].cluster != cid) continue;
                        if (transmitting[i] && succ[i]) {
                            next[i] = 1;
                        } else if (transmitting[i] && !succ[i]) {
                            backoff[i] = 1 + static_cast<int>(
                                                 counter_uniform(config.seed, t, slot, 2 * n_sbs + i) *
                                                 config.scheme.backoff_max);
                            if (backoff[i] > config.scheme.backoff_max)
                                backoff[i] = config.scheme.backoff_max;
                            next[i] = 0;
                        } else if (backoff[i] == 0) {
                            next[i] = 1;
                        }
                    }
                }
            }
            transmitting = next;
        }
        attempts[t] = n_att;
        successes[t] = n_succ;
    });

    RetransEstimate est;
    est.scheme = config.scheme.kind;
    std::vector<double> ratios;
    ratios.reserve(config.trials);
    for (std::uint64_t t = 0; t < config.trials; ++t) {
        est.attempts += attempts[t];
        est.successes += successes[t];
        if (attempts[t] > 0)
            ratios.push_back(static_cast<double>(successes[t]) / attempts[t]);
    }
    if (ratios.empty()) throw std::runtime_error("simulate_retransmission: no attempts recorded");
    double mean = 0.0;
    for (double v : ratios) mean += v;
    mean /= ratios.size();
    double ss = 0.0;
    for (double v : ratios) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / std::max<std::size_t>(1, ratios.size() - 1)) /
                      std::sqrt(static_cast<double>(ratios.size()));
    est.success_prob = mean;
    est.ci_low = mean - 1.959963984540054 * se;
    est.ci_high = mean + 1.959963984540054 * se;
    return est;
}

}  // namespace hcn

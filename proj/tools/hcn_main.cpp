// Command-line front end: figure-data sweeps, validation suite, pattern dumps.
// Every output CSV is accompanied by a .manifest.json recording the resolved
// configuration, seed and output digests; --replay re-runs a manifest and
// reproduces the bytes.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcn/acceptance.hpp"
#include "hcn/correlation.hpp"
#include "hcn/parallel.hpp"
#include "hcn/rng.hpp"
#include "hcn/runconfig.hpp"
#include "hcn/simkit.hpp"

namespace {

using namespace hcn;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

struct OutputWriter {
    std::string path;
    std::ostringstream body;

    void flush_with_manifest(const std::string& command, const RunConfig& cfg,
                             std::uint64_t seed, double seconds) {
        {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write output: " + path);
            out << body.str();
        }
        RunManifest man;
        man.command = command;
        man.config = cfg.raw();
        man.seed = seed;
        man.duration_seconds = seconds;
        man.outputs.push_back({path, sha256_file(path)});
        man.write(path + ".manifest.json");
    }
};

struct CommonArgs {
    std::string config_path;
    std::string out_path = "out.csv";
    std::uint64_t seed = 0;  // 0 = take from config
    std::uint64_t trials = 0;
    int threads = 0;
    bool has_seed = false, has_trials = false;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig::from_json(nlohmann::json::object())
                                             : RunConfig::from_file(args.config_path);
    if (args.has_seed) cfg.set("seed", args.seed);
    if (args.has_trials) cfg.set("trials", args.trials);
    if (args.threads > 0) cfg.set("threads", args.threads);
    return cfg;
}

int resolve_threads(const RunConfig& cfg) {
    const auto t = cfg.integer_or("threads", 0);
    return t == 0 ? default_threads() : static_cast<int>(t);
}

void emit_zeta_row(std::ostringstream& os, const std::string& method, double u, double c,
                   double R, const RadioParams& radio, const CorrelationReport& rep) {
    os << method << ',' << num(u) << ',' << num(c) << ',' << num(R) << ',' << num(radio.alpha)
       << ',' << num(radio.eps) << ',' << num(rep.zeta) << ',' << num(rep.f_value) << ','
       << num(rep.theta) << ',' << num(rep.theta_prime) << ',';
    if (rep.stderr_mc) os << num(*rep.stderr_mc);
    os << '\n';
}

int cmd_zeta_sweep(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(args);
    const RadioParams radio = cfg.radio();
    const double R = cfg.number_or("R_M", 5.0);
    const double parent_density = cfg.number_or("lambda_M0", 0.1);
    const auto u_grid = cfg.grid("u_grid", {0.0, 0.5, 1.0, 2.0, 3.0, 5.0});
    const auto c_grid = cfg.grid("c_grid", {1.0, 3.0, 5.0});
    const std::uint64_t seed = cfg.integer_or("seed", 1);
    const std::uint64_t trials = cfg.integer_or("trials", 4000);
    const int threads = resolve_threads(cfg);

    OutputWriter out{args.out_path, {}};
    out.body << "method,u,c,R,alpha,eps,zeta,F,theta,theta_prime,stderr\n";
    std::uint64_t cell = 0;
    for (double c : c_grid) {
        for (double u : u_grid) {
            emit_zeta_row(out.body, "ppp", u, c, R, radio, zeta_ppp(u, radio));
            emit_zeta_row(out.body, "cluster-exact", u, c, R, radio,
                          zeta_cluster(c, R, u, radio));
            emit_zeta_row(out.body, "cluster-approx", u, c, R, radio,
                          zeta_cluster_approx(c, R, u, radio));
            if (trials > 0 && c > 0.0) {  // an empty field has no correlation to estimate
                ZetaMcOptions mc;
                mc.trials = trials;
                mc.seed = derive_seed(seed, cell);
                mc.threads = threads;
                emit_zeta_row(out.body, "monte-carlo", u, c, R, radio,
                              estimate_zeta_mc(MatClusterSpec{parent_density, c, R}, u, radio, mc));
            }
            ++cell;
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.flush_with_manifest("zeta-sweep", cfg, seed, secs);
    return 0;
}

int cmd_f_table(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(args);
    const RadioParams radio = cfg.radio();
    const auto c_grid = cfg.grid("c_grid", {3.0});
    const auto r_grid = cfg.grid("R_grid", {5.0, 10.0, 20.0, 50.0, 100.0});
    OutputWriter out{args.out_path, {}};
    out.body << "c,R,alpha,eps,f_exact,f_approx,ratio\n";
    for (double c : c_grid) {
        for (double R : r_grid) {
            const double fe = f_exact(c, R, radio);
            const double fa = f_approx(c, R, radio);
            out.body << num(c) << ',' << num(R) << ',' << num(radio.alpha) << ','
                     << num(radio.eps) << ',' << num(fe) << ',' << num(fa) << ','
                     << num(fe != 0.0 ? fa / fe : 0.0) << '\n';
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.flush_with_manifest("f-table", cfg, cfg.integer_or("seed", 1), secs);
    return 0;
}

void emit_jsp_row(std::ostringstream& os, UserClass user, const std::string& model, int n,
                  double beta_db, const JspResult& r) {
    os << to_string(user) << ',' << model << ',' << n << ',' << num(beta_db) << ','
       << num(r.value) << ',';
    if (r.lower) os << num(*r.lower);
    os << ',';
    if (r.upper) os << num(*r.upper);
    os << ',' << r.method << '\n';
}

int cmd_jsp(const CommonArgs& args, bool bounds_only) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(args);
    const auto beta_grid = cfg.grid("beta_db_grid", {-10.0, -7.5, -5.0, -2.5, 0.0, 2.5, 5.0});
    const auto n_grid = cfg.grid("n_grid", {1.0, 2.0});
    const std::uint64_t seed = cfg.integer_or("seed", 1);
    const std::uint64_t trials = cfg.integer_or("trials", bounds_only ? 0 : 20000);
    const int threads = resolve_threads(cfg);
    const bool exact_D = cfg.flag_or("exact_D", true);
    JspOptions jopts;
    jopts.pgfl = cfg.pgfl_options();

    OutputWriter out{args.out_path, {}};
    out.body << "user,model,n,beta_db,value,lower,upper,method\n";
    std::uint64_t cell = 0;
    for (UserClass user : {UserClass::MU, UserClass::SU}) {
        for (SbsVariant variant : {SbsVariant::PPP, SbsVariant::MCP, SbsVariant::SOCP}) {
            for (double beta_db : beta_grid) {
                HcnModel model = cfg.model_as(variant);
                if (user == UserClass::MU)
                    model.radio.beta_m = db_to_linear(beta_db);
                else
                    model.radio.beta_s = db_to_linear(beta_db);
                const std::string mname = to_string(variant);
                for (double nd : n_grid) {
                    const int n = static_cast<int>(nd);
                    if (variant == SbsVariant::PPP) {
                        emit_jsp_row(out.body, user, mname, n, beta_db,
                                     jsp_ppp(n, user, model, exact_D));
                    } else {
                        JspResult bounds = jsp_bounds(n, user, model);
                        if (!bounds_only) {
                            JspResult analytic = jsp(n, user, model, jopts);
                            analytic.lower = bounds.lower;
                            analytic.upper = bounds.upper;
                            emit_jsp_row(out.body, user, mname, n, beta_db, analytic);
                        } else {
                            emit_jsp_row(out.body, user, mname, n, beta_db, bounds);
                        }
                    }
                }
                if (!bounds_only && trials > 0) {
                    SimConfig sim;
                    sim.model = model;
                    sim.user = user;
                    sim.slots = static_cast<int>(n_grid.back());
                    sim.trials = trials;
                    sim.seed = derive_seed(seed, cell);
                    sim.threads = threads;
                    const auto est = simulate_jsp(sim);
                    for (double nd : n_grid) {
                        const int n = static_cast<int>(nd);
                        JspResult r;
                        r.n = n;
                        r.user = user;
                        r.value = est[n - 1].estimate;
                        r.lower = est[n - 1].ci_low;
                        r.upper = est[n - 1].ci_high;
                        r.method = "monte-carlo";
                        emit_jsp_row(out.body, user, mname, n, beta_db, r);
                    }
                }
                ++cell;
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.flush_with_manifest(bounds_only ? "bounds" : "jsp", cfg, seed, secs);
    return 0;
}

int cmd_retrans(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(args);
    const auto c_grid = cfg.grid("c_grid", {2.0, 4.0, 6.0});
    const double lambda_p = cfg.number_or("lambda_P", 1.2e-4);
    const double radius = cfg.number_or("R_M", 10.0);
    const std::uint64_t seed = cfg.integer_or("seed", 1);
    const std::uint64_t trials = cfg.integer_or("trials", 100);
    const int threads = resolve_threads(cfg);
    const double beta_s_db = cfg.number_or("beta_s_db", -3.0);

    OutputWriter out{args.out_path, {}};
    out.body << "scheme,c,beta_db,success_prob,ci_low,ci_high,trials,seed\n";
    std::uint64_t cell = 0;
    for (double c : c_grid) {
        SimConfig base;
        base.model.radio = cfg.radio();
        base.model.mbs_density = cfg.number_or("lambda_m", 7.96e-6);
        base.model.sbs = MatClusterSpec{lambda_p / c, c, radius};
        base.trials = trials;
        base.horizon = static_cast<int>(cfg.integer_or("horizon", 400));
        base.threads = threads;
        base.seed = derive_seed(seed, cell++);
        if (cfg.has("window_radius")) base.window_radius = cfg.number("window_radius");
        for (Scheme kind : {Scheme::Simple, Scheme::RandomP, Scheme::CorrelationAware}) {
            SimConfig sim = base;
            sim.scheme = cfg.scheme(kind);
            const RetransEstimate est = simulate_retransmission(sim);
            out.body << to_string(kind) << ',' << num(c) << ',' << num(beta_s_db) << ','
                     << num(est.success_prob) << ',' << num(est.ci_low) << ','
                     << num(est.ci_high) << ',' << trials << ',' << base.seed << '\n';
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.flush_with_manifest("retrans", cfg, seed, secs);
    return 0;
}

int cmd_sample(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(args);
    const HcnModel model = cfg.model();
    const std::uint64_t seed = cfg.integer_or("seed", 1);
    const Window window{cfg.number_or("window_radius", 500.0)};
    Rng rng(derive_seed(seed, 0));

    PointPattern all{window, {}};
    if (model.variant() == SbsVariant::SOCP) {
        // the SOCP parents double as the MBS tier
        const auto& spec = std::get<SocpSpec>(model.sbs);
        PointPattern sbs = sample_socp(spec, window, rng);
        Rng parent_rng(derive_seed(seed, 1));
        PointPattern mbs = sample_ppp(model.mbs_density, window, parent_rng, Tier::MBS);
        all.points = std::move(mbs.points);
        for (auto& p : sbs.points) all.points.push_back(p);
    } else {
        PointPattern mbs = sample_ppp(model.mbs_density, window, rng, Tier::MBS);
        PointPattern sbs;
        if (model.variant() == SbsVariant::PPP)
            sbs = sample_ppp(std::get<PppSpec>(model.sbs).density, window, rng);
        else
            sbs = sample_mcp(std::get<MatClusterSpec>(model.sbs), window, rng);
        all.points = std::move(mbs.points);
        for (auto& p : sbs.points) all.points.push_back(p);
    }
    OutputWriter out{args.out_path, {}};
    write_pattern_csv(out.body, all);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.flush_with_manifest("sample", cfg, seed, secs);
    return 0;
}

int cmd_validate(const std::string& only_csv, double trials_scale, double nudge, int threads,
                 std::uint64_t seed) {
    AcceptanceOptions opts;
    opts.trials_scale = trials_scale;
    opts.density_nudge = nudge;
    opts.threads = threads;
    if (seed != 0) opts.seed = seed;
    if (!only_csv.empty()) {
        std::stringstream ss(only_csv);
        std::string id;
        while (std::getline(ss, id, ',')) opts.only.push_back(id);
    }
    const auto results = run_acceptance(opts, std::cout);
    bool all_ok = !results.empty();
    for (const auto& r : results) all_ok = all_ok && r.passed;
    std::cout << (all_ok ? "VALIDATE PASS" : "VALIDATE FAIL") << " (" << results.size()
              << " criteria)\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interference correlation and joint success probability toolkit for "
                 "clustered two-tier networks"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string replay_path;
    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file");
        sub->add_option("--out", common.out_path, "output CSV path");
        sub->add_option("--seed", common.seed, "master seed")->each([&](const std::string&) {
            common.has_seed = true;
        });
        sub->add_option("--trials", common.trials, "Monte-Carlo trials")
            ->each([&](const std::string&) { common.has_trials = true; });
        sub->add_option("--threads", common.threads, "worker threads (0 = auto)");
    };

    auto* zeta = app.add_subcommand("zeta-sweep", "correlation coefficients over a u-grid");
    add_common(zeta);
    auto* ftab = app.add_subcommand("f-table", "F(c,R): quadrature vs the large-R form");
    add_common(ftab);
    auto* jspc = app.add_subcommand("jsp", "joint success probabilities over a beta grid");
    add_common(jspc);
    auto* bounds = app.add_subcommand("bounds", "PPP sandwich bounds over a beta grid");
    add_common(bounds);
    auto* retr = app.add_subcommand("retrans", "retransmission scheme comparison over c");
    add_common(retr);
    auto* sample = app.add_subcommand("sample", "dump a realized two-tier point pattern");
    add_common(sample);
    auto* replay = app.add_subcommand("replay", "re-run a recorded manifest");
    replay->add_option("manifest", replay_path, "path to a .manifest.json")->required();

    auto* validate = app.add_subcommand("validate", "run the acceptance suite");
    std::string only;
    double trials_scale = 1.0, nudge = 1.0;
    int vthreads = 0;
    std::uint64_t vseed = 0;
    validate->add_option("--only", only, "comma-separated criterion ids (default: all)");
    validate->add_option("--trials-scale", trials_scale, "scale Monte-Carlo budgets");
    validate->add_option("--nudge-density", nudge,
                         "perturb the simulated density in A5 (negative control)");
    validate->add_option("--threads", vthreads, "worker threads (0 = auto)");
    validate->add_option("--seed", vseed, "override the suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (zeta->parsed()) return cmd_zeta_sweep(common);
        if (ftab->parsed()) return cmd_f_table(common);
        if (jspc->parsed()) return cmd_jsp(common, false);
        if (bounds->parsed()) return cmd_jsp(common, true);
        if (retr->parsed()) return cmd_retrans(common);
        if (sample->parsed()) return cmd_sample(common);
        if (validate->parsed()) return cmd_validate(only, trials_scale, nudge, vthreads, vseed);
        if (replay->parsed()) {
            const RunManifest man = RunManifest::from_file(replay_path);
            // rebuild the command line from the manifest and dispatch
            RunConfig cfg = RunConfig::from_json(man.config);
            const std::string tmp_cfg = replay_path + ".config.json";
            {
                std::ofstream out(tmp_cfg);
                out << cfg.raw().dump(2) << '\n';
            }
            CommonArgs re;
            re.config_path = tmp_cfg;
            re.out_path = man.outputs.empty() ? "out.csv" : man.outputs.front().path;
            if (man.command == "zeta-sweep") return cmd_zeta_sweep(re);
            if (man.command == "f-table") return cmd_f_table(re);
            if (man.command == "jsp") return cmd_jsp(re, false);
            if (man.command == "bounds") return cmd_jsp(re, true);
            if (man.command == "retrans") return cmd_retrans(re);
            if (man.command == "sample") return cmd_sample(re);
            std::cerr << "replay: unsupported command '" << man.command << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

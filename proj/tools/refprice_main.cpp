// refprice: command-line driver for markdown curves, simulations, regret sweeps and oracle checks.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "refprice/config.hpp"
#include "refprice/harness.hpp"
#include "refprice/validation.hpp"

namespace fs = std::filesystem;
using namespace refprice;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Invocation {
    std::string config_path;
    std::string out;
    int threads = 0;
    std::vector<std::string> overrides;
};

ExperimentConfig load(const Invocation& inv) {
    std::vector<std::string> overrides = inv.overrides;
    if (!inv.out.empty()) overrides.push_back("run.out=\"" + inv.out + "\"");
    if (inv.threads > 0) overrides.push_back("run.threads=" + std::to_string(inv.threads));
    std::optional<std::string> seed_env;
    if (const char* s = std::getenv("REFPRICE_SEED")) seed_env = std::string(s);
    return load_config(inv.config_path, overrides, seed_env);
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.run.out);
    const fs::path path = fs::path(cfg.run.out) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

int cmd_solve(const ExperimentConfig& cfg) {
    const Instance inst = cfg.instance.build();
    const std::int64_t horizon = cfg.run.horizons.front();
    const CurveSolution sol = solve_curve(inst.theta_star(), cfg.start_reference(), 1, horizon, inst.p_max());
    std::ofstream os = open_output(cfg, "curve.csv");
    write_curve_csv(os, sol.curve);
    std::printf("T=%lld t_dagger=%lld p_first=%.6f p_last=%.6f probes=%d\n", static_cast<long long>(horizon),
                static_cast<long long>(sol.curve.t_dagger), sol.curve.prices.front(), sol.curve.prices.back(),
                sol.probes);
    return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const Instance inst = cfg.instance.build();
    const std::int64_t horizon = cfg.run.horizons.front();
    std::vector<EpisodeRecord> episodes(static_cast<std::size_t>(cfg.run.seeds));
    parallel_for(episodes.size(), cfg.run.threads, [&](std::size_t i) {
        episodes[i] = run_episode(inst, cfg.noise, cfg.policy, horizon, cfg.start_reference(), cfg.run.base_seed + i);
    });
    std::ofstream os = open_output(cfg, "episodes.csv");
    write_episodes_csv(os, episodes);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const EpisodeRecord& e = episodes[i];
        std::printf("episode %zu seed=%llu expected=%.6f realized=%.6f exploit_start=%lld resets=%lld%s\n", i,
                    static_cast<unsigned long long>(e.seed), e.expected_total, e.realized_total,
                    static_cast<long long>(e.exploit_start), static_cast<long long>(e.reset_rounds),
                    e.degenerate ? " degenerate" : "");
    }
    return kOk;
}

int cmd_sweep(const ExperimentConfig& cfg) {
    const Instance inst = cfg.instance.build();
    SweepOptions opt;
    opt.horizons = cfg.run.horizons;
    opt.n_seeds = cfg.run.seeds;
    opt.base_seed = cfg.run.base_seed;
    opt.r1 = cfg.start_reference();
    opt.threads = cfg.run.threads;
    const SweepResult res = regret_sweep(inst, cfg.noise, cfg.policy, opt);
    std::ofstream os = open_output(cfg, "regret.csv");
    write_regret_csv(os, res);
    for (const RegretRecord& r : res.records)
        std::printf("T=%lld regret=%.6f stderr=%.6f baseline=%.6f%s\n", static_cast<long long>(r.horizon),
                    r.mean_regret, r.stderr_regret, r.baseline, r.flagged ? " FLAGGED" : "");
    if (res.slope) std::printf("slope=%.4f\n", *res.slope);
    else std::printf("slope=nan (needs >= 3 horizons spanning 2 decades)\n");
    bool flagged = false;
    for (const RegretRecord& r : res.records) flagged = flagged || r.flagged;
    return flagged ? kFailure : kOk;
}

int cmd_validate(const ExperimentConfig& cfg) {
    const Instance inst = cfg.instance.build();
    bool ok = true;
    for (const CheckResult& r : run_validation(inst, cfg.noise, cfg.run.base_seed)) {
        std::printf("%s %-22s max_residual=%.3e tolerance=%.1e cases=%lld%s%s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_residual, r.tolerance, static_cast<long long>(r.cases),
                    r.detail.empty() ? "" : "  ", r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markdown pricing under averaging reference effects"};
    app.require_subcommand(1);

    Invocation inv;
    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const ExperimentConfig&);
    };
    const Entry entries[] = {
        {"solve", "Write the true-parameter markdown curve to curve.csv", cmd_solve},
        {"simulate", "Run run.seeds episodes at the first horizon and write episodes.csv", cmd_simulate},
        {"sweep", "Regret sweep over run.T and run.seeds, written to regret.csv", cmd_sweep},
        {"validate", "Cross-oracle checks of the solver, ResetRef and the gradient estimate", cmd_validate},
    };
    int (*chosen)(const ExperimentConfig&) = nullptr;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", inv.config_path, "JSON experiment config")->required();
        sub->add_option("--out", inv.out, "Output directory (run.out)");
        sub->add_option("--threads", inv.threads, "Worker cap (run.threads)")->check(CLI::PositiveNumber);
        sub->add_option("overrides", inv.overrides, "Dotted config overrides, e.g. run.seeds=50");
        sub->callback([&chosen, run = e.run] { chosen = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    ExperimentConfig cfg;
    try {
        cfg = load(inv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        return chosen(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}

// Acceptance suite: one line per criterion, "PASS"/"FAIL", measured value, target, seconds.
//
// Usage: acceptance --cli <refprice binary> --config <json> --work <dir> [--known-fail 9,10]
// Criteria listed in --known-fail still print FAIL but do not fail the process.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "refprice/harness.hpp"
#include "refprice/validation.hpp"

using namespace refprice;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string measured;
    std::string target;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

oracle::Market market(const Instance& inst) {
    return {inst.a(), inst.b(), inst.eta_plus(), inst.eta_minus()};
}

Outcome two_price_gap() {
    const Instance inst(1.0, 2.0, 0.5, 0.5, 4.0 / 3.0, 1.1);
    const std::int64_t T = 100000;
    const auto start = std::chrono::steady_clock::now();
    PolicySpec two;
    two.kind = PolicySpec::Kind::two_price;
    two.alpha = 0.3;
    PolicySpec fixed;
    fixed.kind = PolicySpec::Kind::optimal_fixed;
    const double v2 = run_episode(inst, NoiseSpec::none(), two, T, 0.0, 1, false).expected_total;
    const double vf = run_episode(inst, NoiseSpec::none(), fixed, T, 0.0, 1, false).expected_total;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // Best fixed price by grid search on the test side, so the baseline does not depend on the library.
    const double h = oracle::harmonic(T);
    // From r1 = 0 the reference trails p by p / t, so every round is on the loss side.
    auto total = [&](double p) { return T * p * (2.0 - p) - 0.5 * p * p * h; };
    const double grid_best = total(oracle::grid_argmax(total, 0.0, inst.p_max(), 1e-6));

    const double gap = (v2 - vf) / static_cast<double>(T);
    const bool ok = std::abs(gap - 0.0318) <= 0.003 && secs < 1.0 && vf >= grid_best - 1e-6 * std::abs(grid_best);
    return {ok, "gap=" + fmt("%.5f", gap) + " fixed_vs_grid=" + fmt("%.2e", vf - grid_best) + " t=" + fmt("%.3fs", secs),
            "0.0318 +- 0.003, < 1 s"};
}

Outcome two_price_params() {
    const Instance inst(1.0, 2.0, 0.5, 0.5, 4.0 / 3.0, 1.1);
    const TwoPricePlan plan = two_price_policy(inst, 0.3);
    const bool ok = std::abs(plan.p_up - 1.2787) <= 0.0005 && std::abs(plan.p_down - 0.926) <= 0.0005;
    return {ok, "p_u=" + fmt("%.5f", plan.p_up) + " p_d=" + fmt("%.5f", plan.p_down),
            "p_u 1.2787 +- 5e-4, p_d 0.926 +- 5e-4"};
}

Outcome solver_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(20231);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int refused = 0;
    for (int k = 0; k < 50; ++k) {
        const std::int64_t T = 2 + static_cast<std::int64_t>(u(rng) * 199);
        const std::int64_t td = 1 + static_cast<std::int64_t>(u(rng) * static_cast<double>(T - 1));
        double tail = 0.0;
        for (std::int64_t s = td + 1; s <= T; ++s) tail += 1.0 / static_cast<double>(s);
        const double c1 = u(rng) * std::min(0.49, 0.95 / std::max(tail, 1e-12));
        const double c2 = 0.2 + u(rng);
        const double r = u(rng) * 2.0;
        const PolicyParams theta(c1, c2);
        const auto curve = curve_from_tdagger(theta, r, td, td, T, 1e6);
        const std::vector<double> gauss = oracle::markdown_by_elimination(c1, c2, r, td, T);
        std::vector<double> lu;
        try {
            lu = dense_solve(LinearSystem{td, T, theta, r});
        } catch (const SolverError&) {
            ++refused;
            continue;
        }
        if (!curve) {
            worst = INFINITY;
            continue;
        }
        for (std::size_t i = 0; i < gauss.size(); ++i) {
            const double p = curve->price_at(td + static_cast<std::int64_t>(i));
            worst = std::max({worst, std::abs(p - gauss[i]), std::abs(p - lu[i])});
        }
    }

    int mismatches = 0;
    Rng irng(777);
    for (int k = 0; k < 100; ++k) {
        const Instance inst = random_instance(irng, k % 2 == 0);
        const std::int64_t T = 2 + static_cast<std::int64_t>(u(irng) * 499);
        const double r1 = u(irng) * inst.p_max();
        const auto a = solve_curve(inst.theta_star(), r1, 1, T, inst.p_max());
        const auto b = solve_curve_linear_scan(inst.theta_star(), r1, 1, T, inst.p_max());
        if (a.curve.t_dagger != b.curve.t_dagger) ++mismatches;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = worst <= 1e-8 && refused == 0 && mismatches == 0 && secs < 30.0;
    return {ok,
            "max|diff|=" + fmt("%.2e", worst) + " refused=" + std::to_string(refused) +
                " t_dagger_mismatch=" + std::to_string(mismatches) + " t=" + fmt("%.2fs", secs),
            "<= 1e-8 on 50 tuples, 0/100 mismatches, < 30 s"};
}

Outcome foc() {
    Rng rng(404);
    double worst = 0.0;
    int cases = 0;
    for (int k = 0; k < 6; ++k) {
        const Instance inst = random_instance(rng, k % 2 == 0);
        const PolicyParams th = inst.theta_star();
        for (std::int64_t T : {10, 100, 1000, 10000}) {
            for (double frac : {1.0, 0.5, 0.0}) {
                const double r1 = frac * inst.p_max();
                const PriceCurve c = solve_curve(th, r1, 1, T, inst.p_max()).curve;
                worst = std::max(worst, oracle::foc_residual(th.c1, th.c2, r1, 1, c.prices, c.t_dagger));
                ++cases;
            }
        }
    }
    return {worst <= 1e-8, "max residual=" + fmt("%.2e", worst) + " over " + std::to_string(cases) + " curves",
            "<= 1e-8, T up to 1e4"};
}

Outcome small_horizon() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(55);
    double worst = INFINITY;
    for (int k = 0; k < 5; ++k) {
        const Instance inst = k == 0 ? Instance(1.0, 2.0, 0.5, 0.5, 4.0 / 3.0, 1.1) : random_instance(rng, true);
        std::vector<double> grid;
        for (int i = 0; i <= 20; ++i) grid.push_back(inst.p_max() * i / 20.0);
        const double r1 = k == 0 ? inst.p_max() : std::uniform_real_distribution<double>(0.0, inst.p_max())(rng);
        const PriceCurve c = solve_curve(inst.theta_star(), r1, 1, 5, inst.p_max()).curve;
        const double ours = oracle::total_revenue(market(inst), r1, c.prices);
        worst = std::min(worst, ours - oracle::best_grid_sequence(market(inst), r1, 5, grid));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst >= -0.01 && secs < 60.0, "min(curve - grid best)=" + fmt("%.4f", worst) + " t=" + fmt("%.2fs", secs),
            ">= -0.01, < 60 s"};
}

Outcome markdown_invariant() {
    Rng rng(606);
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        const Instance inst = random_instance(rng, k % 2 == 0);
        const std::int64_t T = 1 + static_cast<std::int64_t>(std::uniform_real_distribution<double>(0.0, 2000.0)(rng));
        const double r1 = std::uniform_real_distribution<double>(0.0, inst.p_max())(rng);
        const PriceCurve c = solve_curve(inst.theta_star(), r1, 1, T, inst.p_max()).curve;
        for (std::size_t i = 1; i < c.prices.size(); ++i)
            if (c.prices[i] > c.prices[i - 1] + 1e-12) {
                ++violations;
                break;
            }
    }
    return {violations == 0, std::to_string(violations) + " violating curves of 1000", "0 violations"};
}

// Monte-Carlo mean of p D kappa / d against the analytic gain-side derivative, computed here.
Outcome gradient() {
    double worst = 0.0;
    std::uint64_t seed = 9001;
    for (const NoiseSpec& noise : {NoiseSpec::bounded_uniform(0.1), NoiseSpec::gaussian(0.1)}) {
        Rng rng(seed++);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 10; ++k) {
            const Instance inst = random_instance(rng, true);
            const double r = inst.p_max() * (0.5 + 0.5 * u(rng));
            const double d = 0.05 + 0.1 * u(rng) * r;
            const double p = d + u(rng) * (r - 2.0 * d);
            const double truth = inst.b() + inst.eta_plus() * r - 2.0 * (inst.a() + inst.eta_plus()) * p;
            double mean = 0.0, m2 = 0.0;
            const std::int64_t n = 1000000;
            for (std::int64_t i = 1; i <= n; ++i) {
                const int kappa = (rng() & 1) ? 1 : -1;
                const double posted = p + kappa * d;
                const double demand = sample_demand(inst, noise, posted, r, rng);
                const double g = gradient_estimate(posted, demand, kappa, d);
                const double delta = g - mean;
                mean += delta / static_cast<double>(i);
                m2 += delta * (g - mean);
            }
            const double se = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
            worst = std::max(worst, std::abs(mean - truth) / se);
        }
    }
    return {worst <= 3.0, "max |mean - dR/dp| = " + fmt("%.2f", worst) + " SE over 20 points", "<= 3 SE"};
}

Outcome learn_greedy_rate() {
    const auto start = std::chrono::steady_clock::now();
    const Instance inst(1.0, 2.0, 0.25, 0.25, 1.6, 1.0);
    const double r = 1.3;
    const oracle::Market m = market(inst);
    const double p_gr = oracle::grid_argmax([&](double p) { return oracle::revenue(m, p, r); }, 0.0, inst.p_max(), 1e-7);
    std::vector<double> xs, ys;
    std::string errs;
    for (std::int64_t t1 : {100, 1000, 10000, 100000}) {
        double err = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            Environment env(inst, NoiseSpec::bounded_uniform(0.05), t1 * 50, r, seed, false);
            Rng rng(seed + 1000);
            err += std::abs(learn_greedy(env, t1, r, inst.p_ratio_bound(), rng).p_hat - p_gr) / 20.0;
        }
        xs.push_back(static_cast<double>(t1));
        ys.push_back(err);
        errs += fmt(" %.2e", err);
    }
    const double slope = oracle::loglog_slope(xs, ys);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {slope >= -0.65 && slope <= -0.35 && secs < 300.0,
            "slope=" + fmt("%.3f", slope) + " errors" + errs + " t=" + fmt("%.1fs", secs), "[-0.65, -0.35], < 300 s"};
}

Outcome regret_rate() {
    const auto start = std::chrono::steady_clock::now();
    const double lo = 0.5, hi = 2.0 / 2.15;
    const double p_max = lo + 0.95 * (hi - lo);
    const Instance inst(2.0, 2.0, 0.15, 0.15, p_max, 0.5);
    const NoiseSpec noise = NoiseSpec::bounded_uniform(0.05);
    SweepOptions opt;
    opt.horizons = {1000, 10000, 100000};
    opt.n_seeds = 20;
    opt.r1 = p_max;
    PolicySpec lte;
    lte.kind = PolicySpec::Kind::learn_then_earn;
    lte.learn.t1_constant = 4.0;
    lte.learn.ra = 0.5 + 0.5 * inst.delta();
    lte.learn.rb = 0.5 + 0.9 * inst.delta();
    const SweepResult learn = regret_sweep(inst, noise, lte, opt);
    PolicySpec fixed;
    fixed.kind = PolicySpec::Kind::optimal_fixed;
    const SweepResult fx = regret_sweep(inst, noise, fixed, opt);

    std::vector<double> xs, yl, yf;
    std::string regrets;
    for (std::size_t i = 0; i < learn.records.size(); ++i) {
        xs.push_back(static_cast<double>(learn.records[i].horizon));
        yl.push_back(learn.records[i].mean_regret);
        yf.push_back(fx.records[i].mean_regret);
        regrets += fmt(" %.1f", learn.records[i].mean_regret);
    }
    const bool positive = std::all_of(yl.begin(), yl.end(), [](double v) { return v > 0; }) &&
                          std::all_of(yf.begin(), yf.end(), [](double v) { return v > 0; });
    const double sl = positive ? oracle::loglog_slope(xs, yl) : NAN;
    const double sf = positive ? oracle::loglog_slope(xs, yf) : NAN;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = positive && sl >= 0.40 && sl <= 0.65 && sf >= 0.90 && sf <= 1.05 && secs < 900.0;
    return {ok,
            "learning slope=" + fmt("%.3f", sl) + " fixed slope=" + fmt("%.3f", sf) + " regrets" + regrets +
                " t=" + fmt("%.1fs", secs),
            "learning [0.40, 0.65], fixed [0.90, 1.05], < 900 s"};
}

Outcome reset() {
    Rng rng(1010);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_target = 0.0;
    int disagreements = 0;
    for (int k = 0; k < 1000; ++k) {
        const double p_max = 0.5 + 2.0 * u(rng);
        const std::int64_t t = 1 + static_cast<std::int64_t>(u(rng) * 5000);
        const double r_t = u(rng) * p_max;
        const double target = u(rng) * p_max;
        const ResetPlan plan = reset_ref(t, r_t, target, p_max);
        // Replay the plan through the averaging rule with a long double running sum.
        long double sum = static_cast<long double>(t) * r_t;
        std::int64_t round = t;
        for (double p : plan.prices) {
            if (p < 0.0 || p > p_max) ++disagreements;
            sum += p;
            ++round;
        }
        worst_target = std::max(worst_target, std::abs(static_cast<double>(sum / round) - target));
        const std::int64_t brute = oracle::minimal_reset_holds(t, r_t, target, p_max, 10000);
        if (brute < 0 ? plan.holds <= 10000 : brute != plan.holds) ++disagreements;
    }

    // Reset overhead of a full learn-then-earn run with the default reference pair.
    const Instance inst(1.0, 2.0, 0.25, 0.25, 1.6, 1.0);
    PolicySpec lte;
    lte.kind = PolicySpec::Kind::learn_then_earn;
    double worst_ratio = 0.0;
    for (std::int64_t T : {10000, 100000}) {
        const double t1 = static_cast<double>(default_exploration_budget(inst.p_max(), T, 1.0));
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const EpisodeRecord rec = run_episode(inst, NoiseSpec::bounded_uniform(0.05), lte, T, inst.p_max(), seed, false);
            worst_ratio = std::max(worst_ratio, static_cast<double>(rec.reset_rounds) / t1);
        }
    }
    const bool ok = worst_target <= 1e-9 && disagreements == 0 && worst_ratio <= 3.0;
    return {ok,
            "max|r - target|=" + fmt("%.2e", worst_target) + " N disagreements=" + std::to_string(disagreements) +
                " max resets/T1=" + fmt("%.2f", worst_ratio),
            "<= 1e-9, 0 disagreements, resets <= 3 T1"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const std::string& config, const fs::path& work) {
    if (cli.empty() || config.empty()) return {false, "no CLI or config given", "byte-identical regret.csv"};
    fs::remove_all(work);
    std::vector<std::string> csvs;
    for (const char* run : {"a", "b"}) {
        const fs::path out = work / run;
        const std::string cmd = "\"" + cli + "\" sweep --config \"" + config + "\" --out \"" + out.string() +
                                "\" policy.kind=learn_then_earn \"run.T=[1000,3000,10000]\" run.seeds=5 > \"" +
                                (work / (std::string(run) + ".log")).string() + "\" 2>&1";
        fs::create_directories(work);
        if (std::system(cmd.c_str()) != 0) return {false, "sweep run failed: " + cmd, "byte-identical regret.csv"};
        csvs.push_back(slurp(out / "regret.csv"));
    }
    const bool ok = !csvs[0].empty() && csvs[0] == csvs[1];
    return {ok, std::to_string(csvs[0].size()) + " bytes, " + (ok ? "identical" : "different"),
            "byte-identical regret.csv"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli, config, work = "acceptance_work";
    std::set<int> known_fail;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i], value = argv[i + 1];
        if (key == "--cli") cli = value;
        else if (key == "--config") config = value;
        else if (key == "--work") work = value;
        else if (key == "--known-fail") {
            std::stringstream ss(value);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) known_fail.insert(std::stoi(item));
        } else {
            std::fprintf(stderr, "unknown argument %s\n", key.c_str());
            return 2;
        }
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"two-price gap", two_price_gap},
        {"two-price parameters", two_price_params},
        {"solver oracle equivalence", solver_equivalence},
        {"first-order residual", foc},
        {"small-horizon optimality", small_horizon},
        {"markdown invariant", markdown_invariant},
        {"gradient unbiasedness", gradient},
        {"LearnGreedy rate", learn_greedy_rate},
        {"regret rate", regret_rate},
        {"ResetRef", reset},
        {"determinism", [&] { return determinism(cli, config, work); }},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), ""};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool known = known_fail.count(id) > 0;
        std::printf("[%2d] %s %-26s %s | target %s | %.1fs%s\n", id, o.passed ? "PASS" : "FAIL", criteria[i].first,
                    o.measured.c_str(), o.target.c_str(), secs, !o.passed && known ? " (known failure)" : "");
        std::fflush(stdout);
        if (!o.passed && !known) ++unexpected;
        if (o.passed && known) std::printf("     criterion %d is listed as a known failure but passed\n", id);
    }
    std::printf("%d unexpected failure(s)\n", unexpected);
    return unexpected == 0 ? 0 : 1;
}

#include "refprice/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>

namespace refprice {

namespace {

Rng derived_stream(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
    return Rng(seq);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Rng noise_stream(std::uint64_t seed) { return derived_stream(seed, 0x6e6f6973u); }
Rng policy_stream(std::uint64_t seed) { return derived_stream(seed, 0x706f6c69u); }

EpisodeRecord run_episode(const Instance& inst, const NoiseSpec& noise, const PolicySpec& policy,
                          std::int64_t horizon, double r1, std::uint64_t seed, bool keep_rows) {
    Rng noise_rng = noise_stream(seed);
    Environment env(inst, noise, horizon, r1, noise_rng(), keep_rows);
    Rng rng = policy_stream(seed);
    const PolicyReport rep = run_policy(policy, env, r1, rng);
    if (!env.done()) throw std::logic_error("policy stopped before the end of the horizon");

    EpisodeRecord rec;
    rec.seed = seed;
    rec.policy = policy.kind;
    rec.horizon = horizon;
    rec.r1 = r1;
    rec.expected_total = env.expected_total();
    rec.realized_total = env.realized_total();
    rec.exploit_start = rep.exploit_start;
    rec.reset_rounds = env.rounds_of(RoundKind::reset);
    rec.explore_rounds = env.rounds_of(RoundKind::explore);
    rec.exploit_rounds = env.rounds_of(RoundKind::exploit);
    rec.regular_rounds = env.rounds_of(RoundKind::regular);
    rec.degenerate = rep.degenerate;
    rec.theta = rep.theta_used;
    rec.rows = env.take_rows();
    return rec;
}

Baseline clairvoyant_value(const Instance& inst, double r1, std::int64_t horizon) {
    if (horizon <= 0) return {0.0, true};
    const PolicyParams theta = inst.theta_star();
    Baseline out;
    out.exact = inst.symmetric();
    const double r_start = out.exact ? r1 : inst.p_max();
    const CurveSolution sol = solve_curve(theta, r_start, 1, horizon, inst.p_max());
    out.value = curve_value(inst, sol.curve, r1);
    return out;
}

std::optional<double> loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("slope fit needs paired samples");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) return std::nullopt;
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    if (lx.size() < 2) return std::nullopt;
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

SweepResult regret_sweep(const Instance& inst, const NoiseSpec& noise, const PolicySpec& policy,
                         const SweepOptions& options) {
    if (options.horizons.empty()) throw std::invalid_argument("sweep needs at least one horizon");
    if (options.n_seeds < 1) throw std::invalid_argument("sweep needs at least one seed");
    policy.validate(inst);

    const std::size_t n_h = options.horizons.size();
    const auto n_s = static_cast<std::size_t>(options.n_seeds);
    std::vector<Baseline> baselines(n_h);
    parallel_for(n_h, options.threads,
                 [&](std::size_t h) { baselines[h] = clairvoyant_value(inst, options.r1, options.horizons[h]); });

    std::vector<double> values(n_h * n_s);
    std::vector<char> degenerate(n_h * n_s, 0);
    parallel_for(n_h * n_s, options.threads, [&](std::size_t job) {
        const std::size_t h = job / n_s;
        const std::size_t i = job % n_s;
        const EpisodeRecord rec = run_episode(inst, noise, policy, options.horizons[h], options.r1,
                                              options.base_seed + i, /*keep_rows=*/false);
        values[job] = rec.expected_total;
        degenerate[job] = rec.degenerate ? 1 : 0;
    });

    SweepResult out;
    std::vector<double> xs, ys;
    for (std::size_t h = 0; h < n_h; ++h) {
        RegretRecord r;
        r.horizon = options.horizons[h];
        r.n_seeds = options.n_seeds;
        r.baseline = baselines[h].value;
        r.baseline_exact = baselines[h].exact;
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i = 0; i < n_s; ++i) {
            const double regret = r.baseline - values[h * n_s + i];
            sum += regret;
            sum_sq += regret * regret;
            r.degenerate_episodes += degenerate[h * n_s + i];
        }
        const double n = static_cast<double>(n_s);
        r.mean_regret = sum / n;
        r.policy_mean = r.baseline - r.mean_regret;
        const double var = n > 1 ? std::max(0.0, (sum_sq - n * r.mean_regret * r.mean_regret) / (n - 1)) : 0.0;
        r.stderr_regret = std::sqrt(var / n);
        r.flagged = r.baseline_exact &&
                    r.mean_regret < -(1e-6 * std::abs(r.baseline) + 3.0 * r.stderr_regret);
        xs.push_back(static_cast<double>(r.horizon));
        ys.push_back(r.mean_regret);
        out.records.push_back(r);
    }
    out.base_seed = options.base_seed;
    // Rate fits need at least three horizons spanning two decades.
    const auto [t_lo, t_hi] = std::minmax_element(xs.begin(), xs.end());
    if (xs.size() >= 3 && *t_hi >= 100.0 * *t_lo) out.slope = loglog_slope(xs, ys);
    return out;
}

void write_curve_csv(std::ostream& os, const PriceCurve& curve) {
    os << "t,price,reference\n";
    for (std::size_t i = 0; i < curve.prices.size(); ++i)
        os << (curve.t_start + static_cast<std::int64_t>(i)) << ',' << fmt(curve.prices[i]) << ','
           << fmt(curve.refs[i]) << '\n';
}

void write_episodes_csv(std::ostream& os, const std::vector<EpisodeRecord>& episodes) {
    os << "episode,seed,t,price,reference,demand,expected_revenue,realized_revenue,phase\n";
    for (std::size_t e = 0; e < episodes.size(); ++e) {
        const EpisodeRecord& rec = episodes[e];
        for (const RoundRow& row : rec.rows)
            os << e << ',' << rec.seed << ',' << row.t << ',' << fmt(row.price) << ',' << fmt(row.reference) << ','
               << fmt(row.demand) << ',' << fmt(row.expected_revenue) << ',' << fmt(row.realized_revenue) << ','
               << to_string(row.kind) << '\n';
    }
}

void write_regret_csv(std::ostream& os, const SweepResult& sweep) {
    os << "T,seeds,mean_regret,stderr,baseline_value,policy_value_mean,baseline_kind,degenerate_episodes,flagged\n";
    for (const RegretRecord& r : sweep.records)
        os << r.horizon << ',' << r.n_seeds << ',' << fmt(r.mean_regret) << ',' << fmt(r.stderr_regret) << ','
           << fmt(r.baseline) << ',' << fmt(r.policy_mean) << ',' << (r.baseline_exact ? "optimal" : "near_optimal")
           << ',' << r.degenerate_episodes << ',' << (r.flagged ? 1 : 0) << '\n';
    os << "# seeds: episode i uses base_seed + i, base_seed=" << sweep.base_seed << '\n';
    os << "# slope=" << (sweep.slope ? fmt(*sweep.slope) : std::string("nan")) << '\n';
}

}  // namespace refprice

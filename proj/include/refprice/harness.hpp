#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "refprice/environment.hpp"
#include "refprice/policies.hpp"

namespace refprice {

struct EpisodeRecord {
    std::uint64_t seed = 0;
    PolicySpec::Kind policy = PolicySpec::Kind::fixed;
    std::int64_t horizon = 0;
    double r1 = 0.0;
    std::vector<RoundRow> rows;  // empty when the run discarded per-round rows
    double expected_total = 0.0;
    double realized_total = 0.0;
    std::int64_t exploit_start = 0;
    std::int64_t reset_rounds = 0;
    std::int64_t explore_rounds = 0;
    std::int64_t exploit_rounds = 0;
    std::int64_t regular_rounds = 0;
    bool degenerate = false;
    std::optional<PolicyParams> theta;
};

/// Independent streams for demand shocks and policy randomization, both derived from one seed.
Rng noise_stream(std::uint64_t seed);
Rng policy_stream(std::uint64_t seed);

/// Deterministic in all arguments.  Totals are expected revenue; realized revenue is logged apart.
EpisodeRecord run_episode(const Instance& inst, const NoiseSpec& noise, const PolicySpec& policy,
                          std::int64_t horizon, double r1, std::uint64_t seed, bool keep_rows = true);

struct Baseline {
    double value = 0.0;
    bool exact = true;  // false: markdown curve from p_max, near-optimal under asymmetric effects
};

/// Clairvoyant revenue: the true-parameter markdown curve, evaluated from r1.
Baseline clairvoyant_value(const Instance& inst, double r1, std::int64_t horizon);

struct RegretRecord {
    std::int64_t horizon = 0;
    int n_seeds = 0;
    double mean_regret = 0.0;
    double stderr_regret = 0.0;
    double baseline = 0.0;
    double policy_mean = 0.0;
    bool baseline_exact = true;
    bool flagged = false;  // mean regret negative beyond noise: baseline inconsistency
    std::int64_t degenerate_episodes = 0;
};

struct SweepResult {
    std::vector<RegretRecord> records;
    std::optional<double> slope;  // OLS slope of ln(mean regret) on ln T; needs >= 3 horizons over 2 decades
    std::uint64_t base_seed = 1;
};

struct SweepOptions {
    std::vector<std::int64_t> horizons;
    int n_seeds = 1;
    std::uint64_t base_seed = 1;
    double r1 = 0.0;
    int threads = 1;
};

/// Episode i of every horizon uses seed base_seed + i.
SweepResult regret_sweep(const Instance& inst, const NoiseSpec& noise, const PolicySpec& policy,
                         const SweepOptions& options);

/// Ordinary least squares slope of ln y on ln x.  Needs >= 2 points with positive x and y.
std::optional<double> loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Runs task(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task);

void write_curve_csv(std::ostream& os, const PriceCurve& curve);
void write_episodes_csv(std::ostream& os, const std::vector<EpisodeRecord>& episodes);
void write_regret_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace refprice

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "refprice/environment.hpp"
#include "refprice/markdown.hpp"
#include "refprice/model.hpp"

namespace refprice {

/// Harmonic number H_n = sum_{t=1}^{n} 1/t.
double harmonic_number(std::int64_t n);

/// Total expected revenue of posting p for T rounds from reference r1.
double fixed_price_value(const Instance& inst, double p, double r1, std::int64_t horizon);

/// Maximizer over [0, p_max] of fixed_price_value.  Exact on both reference-effect branches.
double optimal_fixed_price(const Instance& inst, double r1, std::int64_t horizon);

/// High price for the first alpha T rounds, low price afterwards.
struct TwoPricePlan {
    double p_up = 0.0;
    double p_down = 0.0;
    double alpha = 0.0;
    /// Asymptotic per-round revenue minus b^2/(4a).
    double per_round_gain = 0.0;

    std::int64_t switch_round(std::int64_t horizon) const;
};

TwoPricePlan two_price_policy(const Instance& inst, double alpha);

/// Single-round revenue maximizer over [0, p_max] at reference r.
double myopic_greedy_step(const Instance& inst, double r);

/// Prices that steer the averaging reference from r_t (at round t) to exactly r_target.
struct ResetPlan {
    std::int64_t holds = 0;  // N rounds at the boundary price before the adjusting round
    std::vector<double> prices;

    std::int64_t rounds() const { return static_cast<std::int64_t>(prices.size()); }
};

ResetPlan reset_ref(std::int64_t t, double r_t, double r_target, double p_max);

/// One-point estimate of d revenue / dp at the center price from a +-d perturbed observation.
inline double gradient_estimate(double posted_price, double demand, int kappa, double d) {
    return posted_price * demand * static_cast<double>(kappa) / d;
}

struct LearnGreedyResult {
    double p_hat = 0.0;               // average of the pre-update iterates
    std::int64_t learning_rounds = 0;
    std::int64_t reset_rounds = 0;
    std::int64_t rounds() const { return learning_rounds + reset_rounds; }
    bool complete = false;            // false when the horizon ran out before the budget
};

/**
 * Learns the greedy price at reference r_target with bandit feedback.
 *
 * Each learning round first steers the reference back to r_target, then posts p_hat +- d and takes
 * a projected step of size 1/(2 p_max s) along the one-point gradient estimate.
 */
LearnGreedyResult learn_greedy(Environment& env, std::int64_t budget, double r_target,
                               double p_ratio_bound, Rng& rng);

struct LearnConfig {
    std::optional<std::int64_t> t1;  // exploration budget; default t1_constant p^2 sqrt(T/(1+p))
    double t1_constant = 1.0;
    std::optional<double> ra;
    std::optional<double> rb;
};

std::int64_t default_exploration_budget(double p_max, std::int64_t horizon, double constant);

/// Default pair (p_max - 2 delta/3, p_max - delta/3).
std::pair<double, double> default_reference_pair(const Instance& inst);

/// Greedy-price line through two estimates, clamped into c1 in [0, 0.49], c2 in [1e-6 p, 10 p].
struct ThetaEstimate {
    double c1_raw = 0.0;
    double c2_raw = 0.0;
    PolicyParams theta;
    bool clamped = false;
};

ThetaEstimate theta_from_greedy(double p_a, double r_a, double p_b, double r_b, double p_max);

struct LearnThenEarnReport {
    std::int64_t budget = 0;
    double ra = 0.0;
    double rb = 0.0;
    LearnGreedyResult explore_a;
    LearnGreedyResult explore_b;
    std::optional<ThetaEstimate> estimate;
    std::int64_t exploit_start = 0;  // T2; 0 when exploitation never started
    bool degenerate = false;
    std::string note;
};

/// Explore at ra, explore at rb, then post the markdown curve for the estimated parameters.
LearnThenEarnReport learn_then_earn(Environment& env, const LearnConfig& config, Rng& rng);

/// Declarative policy choice as it appears in experiment configurations.
struct PolicySpec {
    enum class Kind { fixed, optimal_fixed, two_price, myopic_greedy, markdown_oracle, learn_then_earn };

    Kind kind = Kind::optimal_fixed;
    double price = 0.0;                // fixed
    double alpha = 0.3;                // two_price
    std::optional<PolicyParams> theta; // markdown_oracle; unset means the true parameters
    LearnConfig learn;

    void validate(const Instance& inst) const;
};

std::string to_string(PolicySpec::Kind kind);
PolicySpec::Kind policy_kind_from_string(const std::string& name);

struct PolicyReport {
    std::int64_t exploit_start = 0;
    std::int64_t reset_rounds = 0;
    bool degenerate = false;
    std::optional<PolicyParams> theta_used;
    std::string note;
};

/// Plays the policy on env until the horizon ends.
PolicyReport run_policy(const PolicySpec& spec, Environment& env, double r1, Rng& rng);

}  // namespace refprice

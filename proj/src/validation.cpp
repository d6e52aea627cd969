#include "refprice/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "refprice/markdown.hpp"
#include "refprice/policies.hpp"
#include "refprice/reference.hpp"

namespace refprice {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

CheckResult finish(CheckResult r, double residual) {
    r.max_residual = residual;
    r.passed = residual <= r.tolerance;
    return r;
}

}  // namespace

Instance random_instance(Rng& rng, bool symmetric) {
    const double a = uniform(rng, 0.5, 2.0);
    const double b = uniform(rng, 1.0, 3.0);
    const double eta_plus = uniform(rng, 0.0, 0.9 * a);
    const double eta_minus = symmetric ? eta_plus : uniform(rng, 0.0, 0.9 * a);
    // Nonnegative demand at (p_max, 0) needs p_max <= b / (a + eta_minus).
    const double lo = b / (2.0 * a);
    const double hi = b / (a + eta_minus);
    const double p_max = lo + uniform(rng, 0.2, 1.0) * (hi - lo);
    const double p_ratio = lo + uniform(rng, 0.0, 0.5) * (p_max - lo);
    return Instance(a, b, eta_plus, eta_minus, p_max, p_ratio);
}

CheckResult check_dense_vs_recursion(std::uint64_t seed, int cases, std::int64_t max_horizon) {
    Rng rng(seed);
    CheckResult r{"dense_vs_recursion", false, 0.0, 1e-8, cases, ""};
    double worst = 0.0;
    for (int k = 0; k < cases; ++k) {
        const std::int64_t horizon = uniform_int(rng, 1, max_horizon);
        const std::int64_t t_dagger = uniform_int(rng, 1, horizon);
        LinearSystem sys;
        sys.t_dagger = t_dagger;
        sys.horizon = horizon;
        sys.r_dagger = uniform(rng, 0.0, 2.0);
        // The dense oracle only accepts dominant systems, so cap C1 by the harmonic tail.
        double tail = 0.0;
        for (std::int64_t s = t_dagger + 1; s <= horizon; ++s) tail += 1.0 / static_cast<double>(s);
        const double c1_cap = tail > 0.0 ? std::min(0.49, 0.95 / tail) : 0.49;
        const double c2 = uniform(rng, 0.2, 2.0);
        sys.theta = PolicyParams(uniform(rng, 0.0, c1_cap), c2);

        const std::vector<double> dense = dense_solve(sys);
        // No plateau: start the recursion at t_dagger with reference r_dagger.
        const double roomy = 1e6;
        const auto curve = curve_from_tdagger(sys.theta, sys.r_dagger, t_dagger, t_dagger, horizon, roomy);
        if (!curve) {
            worst = std::numeric_limits<double>::infinity();
            break;
        }
        for (std::size_t i = 0; i < dense.size(); ++i) worst = std::max(worst, std::abs(dense[i] - curve->prices[i]));
    }
    return finish(r, worst);
}

CheckResult check_binary_vs_linear(std::uint64_t seed, int cases, std::int64_t max_horizon) {
    Rng rng(seed);
    CheckResult r{"binary_vs_linear_scan", false, 0.0, 0.0, cases, ""};
    int mismatches = 0;
    for (int k = 0; k < cases; ++k) {
        const Instance inst = random_instance(rng, uniform(rng, 0.0, 1.0) < 0.5);
        const std::int64_t horizon = uniform_int(rng, 1, max_horizon);
        const double r_start = uniform(rng, 0.0, inst.p_max());
        const PolicyParams theta = inst.theta_star();
        std::optional<std::int64_t> fast, slow;
        try {
            fast = solve_curve(theta, r_start, 1, horizon, inst.p_max()).curve.t_dagger;
        } catch (const SolverError&) {
        }
        try {
            slow = solve_curve_linear_scan(theta, r_start, 1, horizon, inst.p_max()).curve.t_dagger;
        } catch (const SolverError&) {
        }
        if (fast != slow) ++mismatches;
    }
    if (mismatches > 0) r.detail = std::to_string(mismatches) + " instances disagree";
    return finish(r, mismatches);
}

CheckResult check_foc(const Instance& inst, std::int64_t max_horizon) {
    CheckResult r{"foc_residual", false, 0.0, 1e-8, 0, ""};
    const PolicyParams theta = inst.theta_star();
    double worst = 0.0;
    for (std::int64_t horizon = 10; horizon <= max_horizon; horizon *= 10) {
        for (double frac : {1.0, 0.5, 0.0}) {
            const PriceCurve curve = solve_curve(theta, frac * inst.p_max(), 1, horizon, inst.p_max()).curve;
            worst = std::max(worst, foc_residual(theta, curve));
            ++r.cases;
        }
    }
    return finish(r, worst);
}

CheckResult check_reset_bruteforce(std::uint64_t seed, int cases) {
    Rng rng(seed);
    CheckResult r{"reset_ref_bruteforce", false, 0.0, 1e-9, cases, ""};
    double worst = 0.0;
    int n_mismatch = 0;
    for (int k = 0; k < cases; ++k) {
        const double p_max = uniform(rng, 0.5, 3.0);
        const std::int64_t t = uniform_int(rng, 1, 1000);
        const double r_t = uniform(rng, 0.0, p_max);
        const double target = uniform(rng, 0.01, 0.99) * p_max;
        const ResetPlan plan = reset_ref(t, r_t, target, p_max);

        const bool raise = r_t < target;
        const double hold = raise ? p_max : 0.0;
        std::int64_t brute = -1;
        for (std::int64_t n = 0; n <= 10000 && brute < 0; ++n) {
            const double x = static_cast<double>(t + n + 1) * target - static_cast<double>(t) * r_t -
                             static_cast<double>(n) * hold;
            if (x >= 0.0 && x <= p_max) brute = n;
        }
        // An empty scan only says the minimal N exceeds the scanned range.
        const bool agree = brute >= 0 ? brute == plan.holds : plan.holds > 10000;
        if (!agree) ++n_mismatch;

        ReferenceState ref = ReferenceState::arm(r_t, t, p_max);
        for (double p : plan.prices) ref.post(p);
        worst = std::max(worst, std::abs(ref.current() - target));
    }
    if (n_mismatch > 0) {
        r.detail = std::to_string(n_mismatch) + " plans differ from the minimal N";
        worst = std::max(worst, static_cast<double>(n_mismatch));
    }
    return finish(r, worst);
}

CheckResult check_gradient(const Instance& inst, const NoiseSpec& noise, std::uint64_t seed, int points,
                           std::int64_t draws) {
    Rng rng(seed);
    CheckResult r{"gradient_monte_carlo", false, 0.0, 3.0, points, "residual in standard errors"};
    std::bernoulli_distribution coin(0.5);
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const double ref = uniform(rng, inst.p_ratio_bound(), inst.p_max());
        const double d = 0.5 * (ref - inst.p_ratio_bound());
        const double center = uniform(rng, d, ref - d);
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t i = 0; i < draws; ++i) {
            const int kappa = coin(rng) ? 1 : -1;
            const double p = center + kappa * d;
            const double g = gradient_estimate(p, sample_demand(inst, noise, p, ref, rng), kappa, d);
            sum += g;
            sum_sq += g * g;
        }
        const double n = static_cast<double>(draws);
        const double mean = sum / n;
        const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
        const double truth = revenue_slope_gain_side(inst, center, ref);
        worst = std::max(worst, std::abs(mean - truth) / se);
    }
    return finish(r, worst);
}

std::vector<CheckResult> run_validation(const Instance& inst, const NoiseSpec& noise, std::uint64_t seed) {
    return {check_dense_vs_recursion(seed),
            check_binary_vs_linear(seed + 1),
            check_foc(inst),
            check_reset_bruteforce(seed + 2),
            check_gradient(inst, noise, seed + 3)};
}

}  // namespace refprice

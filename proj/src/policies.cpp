#include "refprice/policies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace refprice {

double harmonic_number(std::int64_t n) {
    double h = 0.0;
    for (std::int64_t t = n; t >= 1; --t) h += 1.0 / static_cast<double>(t);
    return h;
}

double fixed_price_value(const Instance& inst, double p, double r1, std::int64_t horizon) {
    if (horizon <= 0) return 0.0;
    // r_t - p = (r1 - p) / t, so the reference side never changes along the horizon.
    const double eta = (r1 >= p) ? inst.eta_plus() : inst.eta_minus();
    const double big_t = static_cast<double>(horizon);
    return big_t * p * (inst.b() - inst.a() * p) + eta * p * (r1 - p) * harmonic_number(horizon);
}

double optimal_fixed_price(const Instance& inst, double r1, std::int64_t horizon) {
    if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
    const double h = harmonic_number(horizon);
    const double big_t = static_cast<double>(horizon);
    const double p_max = inst.p_max();

    // Concave quadratic on each side of r1; compare the clipped vertices.
    auto vertex = [&](double eta) {
        return (big_t * inst.b() + eta * r1 * h) / (2.0 * (big_t * inst.a() + eta * h));
    };
    const double split = std::min(r1, p_max);
    const double gain = std::clamp(vertex(inst.eta_plus()), 0.0, split);
    const double loss = std::clamp(vertex(inst.eta_minus()), split, p_max);
    return fixed_price_value(inst, gain, r1, horizon) >= fixed_price_value(inst, loss, r1, horizon) ? gain
                                                                                                      : loss;
}

std::int64_t TwoPricePlan::switch_round(std::int64_t horizon) const {
    return static_cast<std::int64_t>(std::floor(alpha * static_cast<double>(horizon)));
}

TwoPricePlan two_price_policy(const Instance& inst, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!inst.symmetric()) throw std::invalid_argument("two-price construction needs eta_plus == eta_minus");
    const double a = inst.a();
    const double b = inst.b();
    const double eta = inst.eta_plus();
    const double log_inv = std::log(1.0 / alpha);

    const double denom = 2.0 * (a * (1.0 - alpha) + eta * alpha * log_inv) -
                         (eta * log_inv) * (eta * log_inv) * alpha / (2.0 * a);
    if (!(denom > 0.0)) throw std::invalid_argument("two-price denominator is not positive");

    TwoPricePlan plan;
    plan.alpha = alpha;
    plan.p_down = ((1.0 - alpha) * b + eta * alpha * (b / (2.0 * a)) * log_inv) / denom;
    plan.p_up = (b + eta * plan.p_down * log_inv) / (2.0 * a);
    const double per_round = alpha * plan.p_up * (b - a * plan.p_up) +
                             (1.0 - alpha) * plan.p_down * (b - a * plan.p_down) +
                             eta * plan.p_down * alpha * (plan.p_up - plan.p_down) * log_inv;
    plan.per_round_gain = per_round - b * b / (4.0 * a);
    return plan;
}

double myopic_greedy_step(const Instance& inst, double r) {
    const double p_max = inst.p_max();
    if (!(r >= 0.0 && r <= p_max)) throw std::domain_error("reference price outside [0, p_max]");
    const double split = std::min(r, p_max);
    const double gain = std::clamp((inst.b() + inst.eta_plus() * r) / (2.0 * (inst.a() + inst.eta_plus())), 0.0,
                                   split);
    const double loss = std::clamp((inst.b() + inst.eta_minus() * r) / (2.0 * (inst.a() + inst.eta_minus())),
                                   split, p_max);
    return revenue(inst, gain, r) >= revenue(inst, loss, r) ? gain : loss;
}

ResetPlan reset_ref(std::int64_t t, double r_t, double r_target, double p_max) {
    if (t < 1) throw std::domain_error("round index starts at 1");
    for (double v : {r_t, r_target})
        if (!(v >= 0.0 && v <= p_max)) throw std::domain_error("reference outside [0, p_max]");

    ResetPlan plan;
    if (r_t == r_target) return plan;

    const double tt = static_cast<double>(t);
    const bool raise = r_t < r_target;
    const double hold_price = raise ? p_max : 0.0;
    if (raise && !(r_target < p_max))
        throw std::domain_error("an averaging reference cannot reach p_max from below in finitely many rounds");
    if (!raise && !(r_target > 0.0))
        throw std::domain_error("an averaging reference cannot reach 0 from above in finitely many rounds");

    // Adjusting price after N holds: (t + N + 1) r_target - t r_t - N hold_price.
    auto adjust = [&](std::int64_t n) {
        const double nn = static_cast<double>(n);
        return (tt + nn + 1.0) * r_target - tt * r_t - nn * hold_price;
    };
    auto admissible = [&](double x) { return x >= 0.0 && x <= p_max; };

    // Each hold moves the adjusting price by |r_target - hold_price| towards the box.
    const double per_hold = std::abs(r_target - hold_price);
    const double excess = raise ? adjust(0) - p_max : -adjust(0);
    auto n = static_cast<std::int64_t>(std::max(0.0, std::ceil(excess / per_hold)));
    while (n > 0 && admissible(adjust(n - 1))) --n;
    while (!admissible(adjust(n))) ++n;

    plan.holds = n;
    plan.prices.assign(static_cast<std::size_t>(n), hold_price);
    plan.prices.push_back(std::clamp(adjust(n), 0.0, p_max));
    return plan;
}

LearnGreedyResult learn_greedy(Environment& env, std::int64_t budget, double r_target,
                               double p_ratio_bound, Rng& rng) {
    const double p_max = env.instance().p_max();
    if (budget < 4) throw std::invalid_argument("learning budget must be at least 4 rounds");
    if (!(r_target > p_ratio_bound && r_target <= p_max))
        throw std::domain_error("learning reference must lie in (p_ratio_bound, p_max]");
    const double d = 0.5 * (r_target - p_ratio_bound);
    const double lo = d;
    const double hi = r_target - d;

    LearnGreedyResult out;
    double p_hat = 0.5 * (lo + hi);
    double iterate_sum = 0.0;
    std::bernoulli_distribution coin(0.5);

    std::int64_t s = 0;
    while (!env.done() && s < budget) {
        const ResetPlan plan = reset_ref(env.round(), env.reference(), r_target, p_max);
        for (double p : plan.prices) {
            if (env.done()) break;
            env.post(p, RoundKind::reset);
            ++out.reset_rounds;
        }
        if (env.done()) break;

        ++s;
        const int kappa = coin(rng) ? 1 : -1;
        const double price = p_hat + kappa * d;
        const double demand = env.post(price, RoundKind::explore);
        ++out.learning_rounds;
        iterate_sum += p_hat;
        const double step = price * demand * kappa / (2.0 * p_max * d * static_cast<double>(s));
        p_hat = std::clamp(p_hat + step, lo, hi);
    }
    out.complete = (s == budget);
    out.p_hat = s > 0 ? iterate_sum / static_cast<double>(s) : std::nan("");
    return out;
}

std::int64_t default_exploration_budget(double p_max, std::int64_t horizon, double constant) {
    const double raw = constant * p_max * p_max * std::sqrt(static_cast<double>(horizon) / (1.0 + p_max));
    return std::max<std::int64_t>(4, static_cast<std::int64_t>(std::llround(raw)));
}

std::pair<double, double> default_reference_pair(const Instance& inst) {
    const double delta = inst.delta();
    return {inst.p_max() - 2.0 * delta / 3.0, inst.p_max() - delta / 3.0};
}

ThetaEstimate theta_from_greedy(double p_a, double r_a, double p_b, double r_b, double p_max) {
    if (!(r_b > r_a)) throw std::invalid_argument("reference pair must satisfy ra < rb");
    ThetaEstimate est;
    est.c1_raw = (p_b - p_a) / (r_b - r_a);
    est.c2_raw = (p_a * r_b - p_b * r_a) / (r_b - r_a);
    if (!std::isfinite(est.c1_raw) || !std::isfinite(est.c2_raw))
        throw std::invalid_argument("greedy-price estimates are not finite");
    const double c1 = std::clamp(est.c1_raw, 0.0, 0.49);
    const double c2 = std::clamp(est.c2_raw, 1e-6 * p_max, 10.0 * p_max);
    est.clamped = (c1 != est.c1_raw) || (c2 != est.c2_raw);
    est.theta = PolicyParams(c1, c2);
    return est;
}

LearnThenEarnReport learn_then_earn(Environment& env, const LearnConfig& config, Rng& rng) {
    const Instance& inst = env.instance();
    const double p_max = inst.p_max();
    LearnThenEarnReport rep;
    rep.budget = config.t1 ? *config.t1 : default_exploration_budget(p_max, env.horizon(), config.t1_constant);
    const auto defaults = default_reference_pair(inst);
    rep.ra = config.ra.value_or(defaults.first);
    rep.rb = config.rb.value_or(defaults.second);
    if (!(rep.ra < rep.rb)) throw std::invalid_argument("learning references must satisfy ra < rb");

    rep.explore_a = learn_greedy(env, rep.budget, rep.ra, inst.p_ratio_bound(), rng);
    rep.explore_b = learn_greedy(env, rep.budget, rep.rb, inst.p_ratio_bound(), rng);
    if (!rep.explore_a.complete || !rep.explore_b.complete || env.done()) {
        rep.degenerate = true;
        rep.note = "horizon ended before exploitation";
        return rep;
    }

    rep.estimate = theta_from_greedy(rep.explore_a.p_hat, rep.ra, rep.explore_b.p_hat, rep.rb, p_max);
    rep.exploit_start = env.round();
    const PolicyParams theta = rep.estimate->theta;
    try {
        const CurveSolution sol = solve_curve(theta, p_max, rep.exploit_start, env.horizon(), p_max);
        for (double p : sol.curve.prices) env.post(p, RoundKind::exploit);
    } catch (const SolverError& e) {
        // Estimated parameters outside the region where the curve exists; fall back to the
        // estimated greedy line.
        rep.degenerate = true;
        rep.note = e.what();
        while (!env.done())
            env.post(std::clamp(theta.c1 * env.reference() + theta.c2, 0.0, p_max), RoundKind::exploit);
    }
    return rep;
}

std::string to_string(PolicySpec::Kind kind) {
    switch (kind) {
    case PolicySpec::Kind::fixed: return "fixed";
    case PolicySpec::Kind::optimal_fixed: return "optimal_fixed";
    case PolicySpec::Kind::two_price: return "two_price";
    case PolicySpec::Kind::myopic_greedy: return "myopic_greedy";
    case PolicySpec::Kind::markdown_oracle: return "markdown_oracle";
    case PolicySpec::Kind::learn_then_earn: return "learn_then_earn";
    }
    return "fixed";
}

PolicySpec::Kind policy_kind_from_string(const std::string& name) {
    for (auto k : {PolicySpec::Kind::fixed, PolicySpec::Kind::optimal_fixed, PolicySpec::Kind::two_price,
                   PolicySpec::Kind::myopic_greedy, PolicySpec::Kind::markdown_oracle,
                   PolicySpec::Kind::learn_then_earn})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown policy kind '" + name + "'");
}

void PolicySpec::validate(const Instance& inst) const {
    const double p_max = inst.p_max();
    switch (kind) {
    case Kind::fixed:
        if (!(price >= 0.0 && price <= p_max)) throw std::invalid_argument("fixed price outside [0, p_max]");
        break;
    case Kind::two_price: {
        const TwoPricePlan plan = two_price_policy(inst, alpha);
        if (plan.p_up > p_max || plan.p_down < 0.0 || plan.p_up < 0.0 || plan.p_down > p_max)
            throw std::invalid_argument("two-price plan leaves [0, p_max]");
        break;
    }
    case Kind::learn_then_earn: {
        if (learn.t1 && *learn.t1 < 4) throw std::invalid_argument("exploration budget T1 must be >= 4");
        if (!(learn.t1_constant > 0.0)) throw std::invalid_argument("T1 constant must be positive");
        const auto defaults = default_reference_pair(inst);
        const double ra = learn.ra.value_or(defaults.first);
        const double rb = learn.rb.value_or(defaults.second);
        if (!(ra < rb)) throw std::invalid_argument("learning references must satisfy ra < rb");
        for (double r : {ra, rb})
            if (!(r > inst.p_ratio_bound() && r <= p_max))
                throw std::invalid_argument("learning references must lie in (p_max - delta, p_max]");
        break;
    }
    case Kind::optimal_fixed:
    case Kind::myopic_greedy:
    case Kind::markdown_oracle:
        break;
    }
}

PolicyReport run_policy(const PolicySpec& spec, Environment& env, double r1, Rng& rng) {
    const Instance& inst = env.instance();
    const std::int64_t horizon = env.horizon();
    spec.validate(inst);
    if (env.round() != 1) throw std::logic_error("policy must start at round 1");

    PolicyReport rep;
    switch (spec.kind) {
    case PolicySpec::Kind::fixed:
        while (!env.done()) env.post(spec.price);
        break;
    case PolicySpec::Kind::optimal_fixed: {
        if (horizon == 0) break;
        const double p = optimal_fixed_price(inst, r1, horizon);
        while (!env.done()) env.post(p);
        break;
    }
    case PolicySpec::Kind::two_price: {
        const TwoPricePlan plan = two_price_policy(inst, spec.alpha);
        const std::int64_t switch_at = plan.switch_round(horizon);
        while (!env.done()) env.post(env.round() <= switch_at ? plan.p_up : plan.p_down);
        break;
    }
    case PolicySpec::Kind::myopic_greedy:
        while (!env.done()) env.post(myopic_greedy_step(inst, env.reference()));
        break;
    case PolicySpec::Kind::markdown_oracle: {
        if (horizon == 0) break;
        const PolicyParams theta = spec.theta.value_or(inst.theta_star());
        const double r_start = (!spec.theta && !inst.symmetric()) ? inst.p_max() : r1;
        const CurveSolution sol = solve_curve(theta, r_start, 1, horizon, inst.p_max());
        for (double p : sol.curve.prices) env.post(p);
        rep.theta_used = theta;
        break;
    }
    case PolicySpec::Kind::learn_then_earn: {
        const LearnThenEarnReport lte = learn_then_earn(env, spec.learn, rng);
        rep.exploit_start = lte.exploit_start;
        rep.reset_rounds = lte.explore_a.reset_rounds + lte.explore_b.reset_rounds;
        rep.degenerate = lte.degenerate;
        rep.note = lte.note;
        if (lte.estimate) rep.theta_used = lte.estimate->theta;
        break;
    }
    }
    return rep;
}

}  // namespace refprice

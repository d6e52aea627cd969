#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace refprice {

/// Deterministic generator used for every stochastic draw (demand shocks, exploration signs).
using Rng = std::mt19937_64;

/// Two-dimensional parameter (C1, C2) that characterizes both greedy prices and markdown curves.
/// c1 is dimensionless, c2 is in price units.
struct PolicyParams {
    double c1 = 0.0;
    double c2 = 0.0;

    PolicyParams() = default;
    PolicyParams(double c1_, double c2_);
};

/** Linear demand with asymmetric reference effects.
 *
 * Expected demand at price p and reference r is
 *   D(p, r) = b - a p + eta_plus (r - p)^+ - eta_minus (p - r)^+
 * on the feasible box [0, p_max]^2.  The constructor enforces that the unconstrained revenue
 * maximizer b/(2a) lies strictly inside the price range and that expected demand is nonnegative
 * everywhere on the box.  p_ratio_bound is the experimenter's upper bound on b/(2a) over the
 * instance class; learners only see this bound, never b/(2a) itself.
 */
class Instance {
public:
    Instance(double a, double b, double eta_plus, double eta_minus, double p_max,
             double p_ratio_bound);

    double a() const { return a_; }
    double b() const { return b_; }
    double eta_plus() const { return eta_plus_; }
    double eta_minus() const { return eta_minus_; }
    double p_max() const { return p_max_; }
    double p_ratio_bound() const { return p_ratio_bound_; }

    bool symmetric() const { return eta_plus_ == eta_minus_; }

    /// True greedy-price parameters C1* = eta+/(2(a+eta+)), C2* = b/(2(a+eta+)).
    PolicyParams theta_star() const;

    /// Width of the reference window (p_max - delta, p_max] on which the greedy price is affine.
    double delta() const { return p_max_ - p_ratio_bound_; }

    std::string describe() const;

private:
    double a_, b_, eta_plus_, eta_minus_, p_max_, p_ratio_bound_;
};

/// Demand shock distribution.  Draws are i.i.d. and mean zero.
struct NoiseSpec {
    enum class Kind { none, bounded_uniform, gaussian };

    Kind kind = Kind::none;
    double half_width = 0.0;  // bounded_uniform: shocks ~ U[-half_width, half_width]
    double stddev = 0.0;      // gaussian: shocks ~ N(0, stddev^2)

    static NoiseSpec none() { return {}; }
    static NoiseSpec bounded_uniform(double half_width);
    static NoiseSpec gaussian(double stddev);

    double draw(Rng& rng) const;
    /// Standard deviation of a single shock.
    double shock_stddev() const;
};

std::string to_string(NoiseSpec::Kind kind);
NoiseSpec::Kind noise_kind_from_string(const std::string& name);

double expected_demand(const Instance& inst, double p, double r);
double revenue(const Instance& inst, double p, double r);

/// d/dp of revenue(p, r) on the gain side (p <= r).
double revenue_slope_gain_side(const Instance& inst, double p, double r);

/// Closed-form constrained greedy price C1* r + C2*.  Only valid for r in (p_max - delta, p_max].
double greedy_price(const Instance& inst, double r);

/// Perturbation distance used when learning the greedy price at reference r.
double greedy_distance(const Instance& inst, double r);

double sample_demand(const Instance& inst, const NoiseSpec& noise, double p, double r, Rng& rng);

}  // namespace refprice

#include "refprice/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace refprice {

namespace {

// Slack for floating-point round-off on the closed price box.
constexpr double kRangeSlack = 1e-12;

void check_price(const Instance& inst, double value, const char* what) {
    const double slack = kRangeSlack * std::max(1.0, inst.p_max());
    if (!(value >= -slack && value <= inst.p_max() + slack)) {
        std::ostringstream os;
        os << what << " " << value << " outside [0, " << inst.p_max() << "]";
        throw std::domain_error(os.str());
    }
}

}  // namespace

PolicyParams::PolicyParams(double c1_, double c2_) : c1(c1_), c2(c2_) {
    if (!(c1 >= 0.0 && c1 < 0.5))
        throw std::invalid_argument("policy parameter c1 must lie in [0, 1/2)");
    if (!(c2 > 0.0) || !std::isfinite(c2))
        throw std::invalid_argument("policy parameter c2 must be positive");
}

Instance::Instance(double a, double b, double eta_plus, double eta_minus, double p_max,
                   double p_ratio_bound)
    : a_(a), b_(b), eta_plus_(eta_plus), eta_minus_(eta_minus), p_max_(p_max),
      p_ratio_bound_(p_ratio_bound) {
    for (double v : {a, b, eta_plus, eta_minus, p_max, p_ratio_bound})
        if (!std::isfinite(v)) throw std::invalid_argument("instance parameters must be finite");
    if (!(a > 0.0)) throw std::invalid_argument("price sensitivity a must be positive");
    if (b < 0.0 || eta_plus < 0.0 || eta_minus < 0.0)
        throw std::invalid_argument("b, eta_plus and eta_minus must be nonnegative");
    if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be positive");

    const double vertex = b / (2.0 * a);
    if (!(vertex < p_max))
        throw std::invalid_argument("b/(2a) must lie strictly inside [0, p_max)");
    if (!(p_ratio_bound >= vertex && p_ratio_bound < p_max))
        throw std::invalid_argument("p_ratio_bound must satisfy b/(2a) <= p_ratio_bound < p_max");

    // Piecewise-linear in (p, r): nonnegativity on the box reduces to the four corners.
    const double tol = 1e-12 * std::max(1.0, b);
    for (double p : {0.0, p_max})
        for (double r : {0.0, p_max}) {
            const double d = b - a * p + eta_plus * std::max(r - p, 0.0) -
                             eta_minus * std::max(p - r, 0.0);
            if (d < -tol) throw std::invalid_argument("expected demand is negative on the price box");
        }
}

PolicyParams Instance::theta_star() const {
    const double denom = 2.0 * (a_ + eta_plus_);
    return PolicyParams(eta_plus_ / denom, b_ / denom);
}

std::string Instance::describe() const {
    std::ostringstream os;
    os << "a=" << a_ << " b=" << b_ << " eta_plus=" << eta_plus_ << " eta_minus=" << eta_minus_
       << " p_max=" << p_max_ << " p_ratio_bound=" << p_ratio_bound_;
    return os.str();
}

NoiseSpec NoiseSpec::bounded_uniform(double half_width) {
    if (!(half_width >= 0.0)) throw std::invalid_argument("noise half_width must be nonnegative");
    NoiseSpec n;
    n.kind = Kind::bounded_uniform;
    n.half_width = half_width;
    return n;
}

NoiseSpec NoiseSpec::gaussian(double stddev) {
    if (!(stddev >= 0.0)) throw std::invalid_argument("noise std must be nonnegative");
    NoiseSpec n;
    n.kind = Kind::gaussian;
    n.stddev = stddev;
    return n;
}

double NoiseSpec::draw(Rng& rng) const {
    switch (kind) {
    case Kind::none:
        return 0.0;
    case Kind::bounded_uniform:
        if (half_width == 0.0) return 0.0;
        return std::uniform_real_distribution<double>(-half_width, half_width)(rng);
    case Kind::gaussian:
        if (stddev == 0.0) return 0.0;
        return std::normal_distribution<double>(0.0, stddev)(rng);
    }
    return 0.0;
}

double NoiseSpec::shock_stddev() const {
    switch (kind) {
    case Kind::none: return 0.0;
    case Kind::bounded_uniform: return half_width / std::sqrt(3.0);
    case Kind::gaussian: return stddev;
    }
    return 0.0;
}

std::string to_string(NoiseSpec::Kind kind) {
    switch (kind) {
    case NoiseSpec::Kind::none: return "none";
    case NoiseSpec::Kind::bounded_uniform: return "bounded_uniform";
    case NoiseSpec::Kind::gaussian: return "gaussian";
    }
    return "none";
}

NoiseSpec::Kind noise_kind_from_string(const std::string& name) {
    if (name == "none") return NoiseSpec::Kind::none;
    if (name == "bounded_uniform") return NoiseSpec::Kind::bounded_uniform;
    if (name == "gaussian") return NoiseSpec::Kind::gaussian;
    throw std::invalid_argument("unknown noise kind '" + name + "'");
}

double expected_demand(const Instance& inst, double p, double r) {
    check_price(inst, p, "price");
    check_price(inst, r, "reference price");
    return inst.b() - inst.a() * p + inst.eta_plus() * std::max(r - p, 0.0) -
           inst.eta_minus() * std::max(p - r, 0.0);
}

double revenue(const Instance& inst, double p, double r) { return p * expected_demand(inst, p, r); }

double revenue_slope_gain_side(const Instance& inst, double p, double r) {
    return inst.b() + inst.eta_plus() * r - 2.0 * (inst.a() + inst.eta_plus()) * p;
}

double greedy_price(const Instance& inst, double r) {
    check_price(inst, r, "reference price");
    if (!(r > inst.p_ratio_bound()))
        throw std::domain_error("greedy price closed form needs reference in (p_max - delta, p_max]");
    const PolicyParams theta = inst.theta_star();
    return theta.c1 * r + theta.c2;
}

double greedy_distance(const Instance& inst, double r) { return 0.5 * (r - inst.p_ratio_bound()); }

double sample_demand(const Instance& inst, const NoiseSpec& noise, double p, double r, Rng& rng) {
    return expected_demand(inst, p, r) + noise.draw(rng);
}

}  // namespace refprice

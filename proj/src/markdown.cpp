#include "refprice/markdown.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "refprice/reference.hpp"

namespace refprice {

namespace {

constexpr double kFeasibilitySlack = 1e-12;
constexpr double kPivotFloor = 1e-12;

void check_window(std::int64_t t1, std::int64_t t_dagger, std::int64_t horizon) {
    if (t1 < 1 || t_dagger < t1 || horizon < t_dagger) {
        std::ostringstream os;
        os << "invalid round window t1=" << t1 << " t_dagger=" << t_dagger << " T=" << horizon;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

double LinearSystem::coefficient(std::size_t i, std::size_t j) const {
    if (i == j) return 1.0;
    return -theta.c1 / round_of(std::max(i, j));
}

double LinearSystem::rhs(std::size_t i) const {
    return theta.c1 * static_cast<double>(t_dagger) * r_dagger / round_of(i) + theta.c2;
}

double LinearSystem::max_offdiagonal_row_sum() const {
    double harmonic_tail = 0.0;
    for (std::int64_t s = t_dagger + 1; s <= horizon; ++s) harmonic_tail += 1.0 / static_cast<double>(s);
    return theta.c1 * harmonic_tail;
}

double plateau_reference(double r_start, std::int64_t t1, std::int64_t t_dagger, double p_max) {
    return (static_cast<double>(t1) * r_start + static_cast<double>(t_dagger - t1) * p_max) /
           static_cast<double>(t_dagger);
}

std::optional<PriceCurve> curve_from_tdagger(const PolicyParams& theta, double r_start,
                                             std::int64_t t1, std::int64_t t_dagger,
                                             std::int64_t horizon, double p_max) {
    check_window(t1, t_dagger, horizon);
    if (!(r_start >= 0.0 && r_start <= p_max)) throw std::domain_error("starting reference outside [0, p_max]");

    const double c1 = theta.c1;
    const double c2 = theta.c2;
    const double r_dagger = plateau_reference(r_start, t1, t_dagger, p_max);
    const auto n = static_cast<std::size_t>(horizon - t_dagger + 1);

    // Each free price is affine in p_dagger: p = slope * p_dagger + offset.  Same for the running
    // sum t r_t = t_dagger r_dagger + sum_{s in [t_dagger, t)} p_s.
    std::vector<double> slope(n), offset(n);
    slope[0] = 1.0;
    offset[0] = 0.0;
    double sum_slope = 0.0;
    double sum_offset = static_cast<double>(t_dagger) * r_dagger;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const double t = static_cast<double>(t_dagger) + static_cast<double>(k);
        const double step = c1 / (t * (t + 1.0 + c1));
        slope[k + 1] = slope[k] - step * sum_slope;
        offset[k + 1] = offset[k] - step * sum_offset;
        sum_slope += slope[k];
        sum_offset += offset[k];
    }

    double p_dagger = 0.0;
    if (n == 1) {
        p_dagger = c1 * r_dagger + c2;
    } else {
        sum_slope += slope[n - 2];
        sum_offset += offset[n - 2];
        const double big_t = static_cast<double>(horizon);
        slope[n - 1] = c1 * sum_slope / big_t;
        offset[n - 1] = c1 * sum_offset / big_t + c2;

        // First-order condition at t_dagger: p_dagger = C2 + C1 r_dagger + C1 sum_{s > t_dagger} p_s / s.
        double weighted_slope = 0.0;
        double weighted_offset = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double s = static_cast<double>(t_dagger) + static_cast<double>(k);
            weighted_slope += slope[k] / s;
            weighted_offset += offset[k] / s;
        }
        const double pivot = 1.0 - c1 * weighted_slope;
        if (!(std::abs(pivot) > kPivotFloor) || !std::isfinite(pivot)) {
            std::ostringstream os;
            os << "markdown system is singular at t_dagger=" << t_dagger << " (pivot " << pivot << ")";
            throw SolverError(os.str());
        }
        p_dagger = (c2 + c1 * r_dagger + c1 * weighted_offset) / pivot;
    }

    const double slack = kFeasibilitySlack * std::max(1.0, p_max);
    PriceCurve curve;
    curve.t_start = t1;
    curve.t_dagger = t_dagger;
    curve.horizon = horizon;
    curve.prices.reserve(static_cast<std::size_t>(horizon - t1 + 1));
    curve.prices.assign(static_cast<std::size_t>(t_dagger - t1), p_max);
    for (std::size_t k = 0; k < n; ++k) {
        double p = (n == 1) ? p_dagger : slope[k] * p_dagger + offset[k];
        if (!std::isfinite(p) || p < -slack || p > p_max + slack) return std::nullopt;
        curve.prices.push_back(std::clamp(p, 0.0, p_max));
    }

    ReferenceState ref = ReferenceState::arm(r_start, t1);
    curve.refs.reserve(curve.prices.size());
    for (double p : curve.prices) {
        curve.refs.push_back(ref.current());
        ref.post(p);
    }
    return curve;
}

std::vector<double> dense_solve(const LinearSystem& sys) {
    if (sys.horizon < sys.t_dagger) throw std::invalid_argument("empty linear system");
    if (!sys.diagonally_dominant())
        throw SolverError("dense solve refused: system is not strictly diagonally dominant");
    const auto n = static_cast<Eigen::Index>(sys.dimension());
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b(i) = sys.rhs(static_cast<std::size_t>(i));
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = sys.coefficient(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    const Eigen::VectorXd x = a.partialPivLu().solve(b);
    return {x.data(), x.data() + x.size()};
}

CurveSolution solve_curve(const PolicyParams& theta, double r_start, std::int64_t t1,
                          std::int64_t horizon, double p_max) {
    check_window(t1, t1, horizon);
    CurveSolution out;
    std::optional<PriceCurve> best;
    std::int64_t lo = t1;
    std::int64_t hi = horizon;  // the final round is always feasible for admissible theta
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        ++out.probes;
        auto curve = curve_from_tdagger(theta, r_start, t1, mid, horizon, p_max);
        if (curve) {
            hi = mid;
            best = std::move(curve);
        } else {
            lo = mid + 1;
        }
    }
    if (!best || best->t_dagger != lo) {
        ++out.probes;
        best = curve_from_tdagger(theta, r_start, t1, lo, horizon, p_max);
    }
    if (!best) {
        std::ostringstream os;
        os << "no feasible markdown start in [" << t1 << ", " << horizon << "] for c1=" << theta.c1
           << " c2=" << theta.c2;
        throw SolverError(os.str());
    }
    out.curve = std::move(*best);
    return out;
}

CurveSolution solve_curve_linear_scan(const PolicyParams& theta, double r_start, std::int64_t t1,
                                      std::int64_t horizon, double p_max) {
    check_window(t1, t1, horizon);
    CurveSolution out;
    for (std::int64_t t = t1; t <= horizon; ++t) {
        ++out.probes;
        if (auto curve = curve_from_tdagger(theta, r_start, t1, t, horizon, p_max)) {
            out.curve = std::move(*curve);
            return out;
        }
    }
    throw SolverError("no feasible markdown start found by linear scan");
}

double curve_value(const Instance& inst, const PriceCurve& curve, double r_actual) {
    if (curve.prices.empty()) return 0.0;
    ReferenceState ref = ReferenceState::arm(r_actual, curve.t_start, inst.p_max());
    double total = 0.0;
    for (double p : curve.prices) {
        total += revenue(inst, p, ref.current());
        ref.post(p);
    }
    return total;
}

double foc_residual(const PolicyParams& theta, const PriceCurve& curve) {
    const auto first = static_cast<std::size_t>(curve.t_dagger - curve.t_start);
    const std::size_t n = curve.prices.size();
    double tail = 0.0;  // sum_{s > t} p_s / s
    double worst = 0.0;
    for (std::size_t i = n; i-- > first;) {
        const double t = static_cast<double>(curve.t_start) + static_cast<double>(i);
        const double predicted = theta.c2 + theta.c1 * (curve.refs[i] + tail);
        worst = std::max(worst, std::abs(curve.prices[i] - predicted));
        tail += curve.prices[i] / t;
    }
    return worst;
}

}  // namespace refprice

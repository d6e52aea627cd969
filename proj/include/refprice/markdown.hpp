#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refprice/model.hpp"

namespace refprice {

/// Raised when a markdown system cannot be solved (singular pivot, no feasible start round).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Markdown price curve over rounds [t_start, T].
 *
 * Prices stay at p_max on [t_start, t_dagger - 1]; from t_dagger on they follow the first-order
 * conditions of the cumulative-revenue program.  refs[i] is the reference the curve itself induces
 * at round t_start + i when started from the reference it was computed for.
 */
struct PriceCurve {
    std::int64_t t_start = 1;
    std::int64_t t_dagger = 1;
    std::int64_t horizon = 0;
    std::vector<double> prices;
    std::vector<double> refs;

    std::size_t size() const { return prices.size(); }
    double price_at(std::int64_t t) const { return prices.at(static_cast<std::size_t>(t - t_start)); }
    double ref_at(std::int64_t t) const { return refs.at(static_cast<std::size_t>(t - t_start)); }
};

/** First-order system A p = b for the free prices on [t_dagger, T].
 *
 * With s_k = t_dagger + k - 1 the entries are A_kk = 1, A_kj = -C1 / s_max(k, j), and
 * b_k = C1 t_dagger r_dagger / s_k + C2.
 */
struct LinearSystem {
    std::int64_t t_dagger = 1;
    std::int64_t horizon = 1;
    PolicyParams theta;
    double r_dagger = 0.0;

    std::size_t dimension() const { return static_cast<std::size_t>(horizon - t_dagger + 1); }
    double round_of(std::size_t k) const { return static_cast<double>(t_dagger) + static_cast<double>(k); }
    double coefficient(std::size_t i, std::size_t j) const;
    double rhs(std::size_t i) const;

    /// Largest off-diagonal absolute row sum, C1 * sum_{s = t_dagger + 1}^{T} 1/s.
    double max_offdiagonal_row_sum() const;
    bool diagonally_dominant() const { return max_offdiagonal_row_sum() < 1.0; }
};

/// Reference at t_dagger after holding p_max from t1: (t1 r_start + (t_dagger - t1) p_max) / t_dagger.
double plateau_reference(double r_start, std::int64_t t1, std::int64_t t_dagger, double p_max);

/**
 * Builds the curve whose strict markdown starts at t_dagger.
 *
 * The free prices are affine in p_dagger along the step rule p_{t+1} = p_t - C1 r_t / (t + 1 + C1);
 * the terminal price is C1 r_T + C2 and p_dagger is pinned by the first-order condition at
 * t_dagger.  O(T) time.  Returns nullopt when the markdown segment leaves [0, p_max].
 * Throws SolverError when the pivot for p_dagger vanishes.
 */
std::optional<PriceCurve> curve_from_tdagger(const PolicyParams& theta, double r_start,
                                             std::int64_t t1, std::int64_t t_dagger,
                                             std::int64_t horizon, double p_max);

/// Dense LU solve of the first-order system.  Test oracle; refuses non-dominant systems.
std::vector<double> dense_solve(const LinearSystem& sys);

struct CurveSolution {
    PriceCurve curve;
    int probes = 0;  // feasibility evaluations made by the search
};

/// Smallest feasible t_dagger by binary search over [t1, T], plus the resulting curve.
CurveSolution solve_curve(const PolicyParams& theta, double r_start, std::int64_t t1,
                          std::int64_t horizon, double p_max);

/// Same result by scanning t_dagger = t1, t1 + 1, ...  Used to cross-check the binary search.
CurveSolution solve_curve_linear_scan(const PolicyParams& theta, double r_start, std::int64_t t1,
                                      std::int64_t horizon, double p_max);

/// Deterministic revenue of posting the curve with the reference started at r_actual in round t_start.
double curve_value(const Instance& inst, const PriceCurve& curve, double r_actual);

/// max_t |p_t - (C2 + C1 (r_t + sum_{s>t} p_s / s))| over the markdown segment [t_dagger, T].
double foc_residual(const PolicyParams& theta, const PriceCurve& curve);

}  // namespace refprice

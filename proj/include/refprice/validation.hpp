#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "refprice/model.hpp"

namespace refprice {

/// Outcome of one cross-oracle suite.
struct CheckResult {
    std::string name;
    bool passed = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::int64_t cases = 0;
    std::string detail;
};

/// Random symmetric or asymmetric instance satisfying every Instance invariant.
Instance random_instance(Rng& rng, bool symmetric);

/// O(T) recursion against the dense LU solve on random diagonally dominant systems.
CheckResult check_dense_vs_recursion(std::uint64_t seed, int cases = 50, std::int64_t max_horizon = 200);

/// Binary-search t_dagger against the linear scan on random instances.
CheckResult check_binary_vs_linear(std::uint64_t seed, int cases = 100, std::int64_t max_horizon = 500);

/// First-order residual of solve_curve(theta*) for several horizons up to max_horizon and starting references.
CheckResult check_foc(const Instance& inst, std::int64_t max_horizon = 10000);

/// reset_ref against an exhaustive scan over N in [0, 10^4], plus target attainment under the ARM.
CheckResult check_reset_bruteforce(std::uint64_t seed, int cases = 1000);

/// Monte-Carlo mean of the one-point gradient estimate against the analytic slope, in standard errors.
CheckResult check_gradient(const Instance& inst, const NoiseSpec& noise, std::uint64_t seed, int points = 10,
                           std::int64_t draws = 1000000);

std::vector<CheckResult> run_validation(const Instance& inst, const NoiseSpec& noise, std::uint64_t seed);

}  // namespace refprice

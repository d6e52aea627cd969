#include "doctest.h"

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "refprice/model.hpp"
#include "refprice/validation.hpp"

using namespace refprice;

namespace {

Instance base() { return Instance(1.0, 2.0, 0.5, 0.5, 4.0 / 3.0, 1.1); }

oracle::Market market(const Instance& i) { return {i.a(), i.b(), i.eta_plus(), i.eta_minus()}; }

}  // namespace

TEST_CASE("demand examples") {
    const Instance inst = base();
    CHECK(expected_demand(inst, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expected_demand(inst, 0.6, 1.0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(revenue(inst, 0.0, 1.0) == 0.0);
    CHECK(revenue(inst, 0.6, 1.0) == doctest::Approx(0.96).epsilon(1e-12));

    // Loss side with eta_minus = 0.9.  Demand nonnegativity caps p_max at 2/1.9, so the price is
    // taken just above the reference instead of at 1.2.
    const Instance loss(1.0, 2.0, 0.5, 0.9, 1.05, 1.0);
    CHECK(expected_demand(loss, 1.05, 1.0) == doctest::Approx(2.0 - 1.05 - 0.9 * 0.05).epsilon(1e-12));
}

TEST_CASE("out of range prices are rejected") {
    const Instance inst = base();
    CHECK_THROWS_AS(expected_demand(inst, -0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(expected_demand(inst, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(revenue(inst, 2.0, 1.0), std::domain_error);
}

TEST_CASE("instance invariants") {
    CHECK_THROWS_AS(Instance(0.0, 2.0, 0.5, 0.5, 1.3, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(Instance(1.0, 2.0, 0.5, 0.5, 0.9, 0.8), std::invalid_argument);   // b/2a outside
    CHECK_THROWS_AS(Instance(1.0, 2.0, 0.5, 0.5, 1.3, 0.9), std::invalid_argument);   // ratio bound below b/2a
    CHECK_THROWS_AS(Instance(1.0, 2.0, 0.5, 0.5, 1.3, 1.3), std::invalid_argument);   // ratio bound at p_max
    CHECK_THROWS_AS(Instance(1.0, 2.0, 0.5, 0.9, 1.2, 1.1), std::invalid_argument);   // negative demand
    CHECK_THROWS_AS(Instance(1.0, NAN, 0.5, 0.5, 1.3, 1.1), std::invalid_argument);
    CHECK_NOTHROW(base());
}

TEST_CASE("true parameters and greedy price") {
    const Instance inst = base();
    const PolicyParams th = inst.theta_star();
    CHECK(th.c1 == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
    CHECK(th.c2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(greedy_price(inst, 1.3) == doctest::Approx(2.65 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(greedy_price(inst, 1.0), std::domain_error);
    // Unconstrained maximizer on the gain side at r = 1.
    const auto m = market(inst);
    CHECK(oracle::grid_argmax([&](double p) { return oracle::revenue(m, p, 1.0); }, 0.0, 1.0, 1e-5) ==
          doctest::Approx(2.5 / 3.0).epsilon(1e-4));
}

TEST_CASE("greedy price matches grid search on random instances") {
    Rng rng(17);
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        const Instance inst = random_instance(rng, k % 2 == 0);
        const double r = std::uniform_real_distribution<double>(inst.p_ratio_bound(), inst.p_max())(rng);
        if (r <= inst.p_ratio_bound()) continue;
        const auto m = market(inst);
        const double grid = oracle::grid_argmax([&](double p) { return oracle::revenue(m, p, r); }, 0.0, r, 1e-5);
        const double gr = greedy_price(inst, r);
        CHECK(std::abs(gr - grid) <= 1e-4);
        // Interior of the learning window.
        const double d = greedy_distance(inst, r);
        CHECK(gr >= d);
        CHECK(gr <= r - d);
        ++checked;
    }
    CHECK(checked > 90);
}

TEST_CASE("greedy price is affine with slope C1") {
    const Instance inst = base();
    const double c1 = inst.theta_star().c1;
    for (double r : {1.15, 1.2, 1.25, 1.3})
        CHECK(std::abs(greedy_price(inst, r) - greedy_price(inst, 1.12) - c1 * (r - 1.12)) <= 1e-14);
}

TEST_CASE("revenue shape") {
    const Instance inst(1.0, 2.0, 0.5, 0.9, 1.05, 1.0);
    // Continuity at p = r.
    for (double r : {0.2, 0.6, 1.0}) {
        const double eps = 1e-9;
        CHECK(std::abs(expected_demand(inst, r - eps, r) - expected_demand(inst, r + eps, r)) < 1e-8);
    }
    // Second difference on the gain side is -2(a + eta_plus) h^2.
    const double h = 1e-3, p = 0.5, r = 0.9;
    const double second = revenue(inst, p + h, r) - 2 * revenue(inst, p, r) + revenue(inst, p - h, r);
    CHECK(second / (h * h) == doctest::Approx(-2.0 * 1.5).epsilon(1e-6));
    CHECK(revenue_slope_gain_side(inst, p, r) ==
          doctest::Approx((revenue(inst, p + h, r) - revenue(inst, p - h, r)) / (2 * h)).epsilon(1e-9));
}

TEST_CASE("noise") {
    const Instance inst = base();
    Rng rng(5);
    CHECK(sample_demand(inst, NoiseSpec::none(), 0.7, 1.0, rng) == expected_demand(inst, 0.7, 1.0));
    CHECK(sample_demand(inst, NoiseSpec::gaussian(0.0), 0.7, 1.0, rng) == expected_demand(inst, 0.7, 1.0));

    const double eps = 0.2;
    const NoiseSpec u = NoiseSpec::bounded_uniform(eps);
    const int n = 1000000;
    double sum = 0.0, lo = 1e9, hi = -1e9;
    for (int i = 0; i < n; ++i) {
        const double x = u.draw(rng);
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(std::abs(sum / n) <= 4 * eps / std::sqrt(3.0 * n));
    CHECK(lo >= -eps);
    CHECK(hi <= eps);

    CHECK_THROWS(NoiseSpec::bounded_uniform(-1.0));
    CHECK_THROWS(NoiseSpec::gaussian(-1.0));
    for (auto k : {NoiseSpec::Kind::none, NoiseSpec::Kind::bounded_uniform, NoiseSpec::Kind::gaussian})
        CHECK(noise_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(noise_kind_from_string("laplace"));
}

TEST_CASE("policy parameter bounds") {
    CHECK_NOTHROW(PolicyParams(0.0, 1.0));
    CHECK_THROWS(PolicyParams(0.5, 1.0));
    CHECK_THROWS(PolicyParams(-0.1, 1.0));
    CHECK_THROWS(PolicyParams(0.1, 0.0));
}

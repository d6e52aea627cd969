#include "refprice/environment.hpp"

#include <stdexcept>

namespace refprice {

const char* to_string(RoundKind kind) {
    switch (kind) {
    case RoundKind::regular: return "regular";
    case RoundKind::reset: return "reset";
    case RoundKind::explore: return "explore";
    case RoundKind::exploit: return "exploit";
    }
    return "regular";
}

Environment::Environment(const Instance& inst, const NoiseSpec& noise, std::int64_t horizon,
                         double r1, std::uint64_t noise_seed, bool keep_rows)
    : inst_(inst), noise_(noise), horizon_(horizon), ref_(ReferenceState::arm(r1, 1, inst.p_max())),
      rng_(noise_seed), keep_rows_(keep_rows) {
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (keep_rows_) rows_.reserve(static_cast<std::size_t>(horizon));
}

double Environment::post(double p, RoundKind kind) {
    if (done()) throw std::logic_error("price posted after the end of the horizon");
    const double r = ref_.current();
    const double mean = expected_demand(inst_, p, r);
    const double demand = mean + noise_.draw(rng_);
    const double expected_rev = p * mean;
    const double realized_rev = p * demand;
    if (keep_rows_) rows_.push_back({ref_.round(), p, r, demand, expected_rev, realized_rev, kind});
    expected_total_ += expected_rev;
    realized_total_ += realized_rev;
    ++kind_counts_[static_cast<std::size_t>(kind)];
    ref_.post(p);
    return demand;
}

}  // namespace refprice

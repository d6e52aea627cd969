#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "refprice/model.hpp"
#include "refprice/reference.hpp"

namespace refprice {

/// What a posted round was used for.  Only bookkeeping; the market treats all rounds alike.
enum class RoundKind { regular = 0, reset = 1, explore = 2, exploit = 3 };
inline constexpr std::size_t kRoundKinds = 4;
const char* to_string(RoundKind kind);

struct RoundRow {
    std::int64_t t = 0;
    double price = 0.0;
    double reference = 0.0;
    double demand = 0.0;            // realized, may be negative under noise
    double expected_revenue = 0.0;
    double realized_revenue = 0.0;
    RoundKind kind = RoundKind::regular;
};

/** One selling horizon: the averaging reference, the demand shocks and the round log.
 *
 * A policy drives the episode by calling post() once per round.  Posting after the horizon or
 * posting a price outside [0, p_max] is an invariant breach and throws.
 */
class Environment {
public:
    Environment(const Instance& inst, const NoiseSpec& noise, std::int64_t horizon, double r1,
                std::uint64_t noise_seed, bool keep_rows = true);

    const Instance& instance() const { return inst_; }
    std::int64_t horizon() const { return horizon_; }
    std::int64_t round() const { return ref_.round(); }
    double reference() const { return ref_.current(); }
    double reference_sum() const { return ref_.sum(); }
    bool done() const { return ref_.round() > horizon_; }
    std::int64_t remaining() const { return done() ? 0 : horizon_ - ref_.round() + 1; }

    /// Posts p for the current round and returns the realized demand.
    double post(double p, RoundKind kind = RoundKind::regular);

    double expected_total() const { return expected_total_; }
    double realized_total() const { return realized_total_; }
    std::int64_t rounds_of(RoundKind kind) const { return kind_counts_[static_cast<std::size_t>(kind)]; }
    const std::vector<RoundRow>& rows() const { return rows_; }
    std::vector<RoundRow> take_rows() { return std::move(rows_); }

private:
    Instance inst_;
    NoiseSpec noise_;
    std::int64_t horizon_;
    ReferenceState ref_;
    Rng rng_;
    bool keep_rows_;
    double expected_total_ = 0.0;
    double realized_total_ = 0.0;
    std::array<std::int64_t, kRoundKinds> kind_counts_{};
    std::vector<RoundRow> rows_;
};

}  // namespace refprice

#pragma once

#include <cstdint>
#include <limits>

namespace refprice {

enum class ReferenceMode { arm, esm };

/** Reference price carried from round to round.
 *
 * Under the averaging mechanism the state stores the exact running sum r_1 + sum_{s<t} p_s and the
 * round index t, so r_t = sum / t never accumulates drift.  The exponential-smoothing mode keeps
 * r_{t+1} = zeta r_t + (1 - zeta) p_t and exists only for comparison runs.
 */
class ReferenceState {
public:
    /// Prices (including r1) are checked against [0, p_max].
    static ReferenceState arm(double r1, std::int64_t t = 1,
                              double p_max = std::numeric_limits<double>::infinity());
    static ReferenceState esm(double r1, double zeta,
                              double p_max = std::numeric_limits<double>::infinity());

    ReferenceMode mode() const { return mode_; }
    double zeta() const { return zeta_; }
    std::int64_t round() const { return t_; }
    double sum() const { return sum_; }
    double current() const { return current_; }

    /// Posts price p for the current round and advances to the next one.
    void post(double p);
    ReferenceState advanced(double p) const {
        ReferenceState next = *this;
        next.post(p);
        return next;
    }

private:
    ReferenceState() = default;

    ReferenceMode mode_ = ReferenceMode::arm;
    double zeta_ = 0.0;
    std::int64_t t_ = 1;
    double sum_ = 0.0;
    double current_ = 0.0;
    double p_max_ = std::numeric_limits<double>::infinity();
};

/// One exponential-smoothing step with an explicit (possibly time-varying) factor.
inline double smoothing_step(double r, double p, double zeta) { return zeta * r + (1.0 - zeta) * p; }

}  // namespace refprice

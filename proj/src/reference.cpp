#include "refprice/reference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace refprice {

namespace {

void check_range(double v, double p_max, const char* what) {
    if (!(v >= 0.0 && v <= p_max * (1.0 + 1e-12)) || !std::isfinite(v))
        throw std::domain_error(std::string(what) + " outside [0, p_max]");
}

}  // namespace

ReferenceState ReferenceState::arm(double r1, std::int64_t t, double p_max) {
    check_range(r1, p_max, "reference price");
    if (t < 1) throw std::domain_error("round index starts at 1");
    ReferenceState s;
    s.mode_ = ReferenceMode::arm;
    s.t_ = t;
    s.sum_ = static_cast<double>(t) * r1;
    s.current_ = r1;
    s.p_max_ = p_max;
    return s;
}

ReferenceState ReferenceState::esm(double r1, double zeta, double p_max) {
    check_range(r1, p_max, "reference price");
    if (!(zeta >= 0.0 && zeta < 1.0)) throw std::domain_error("smoothing factor must lie in [0, 1)");
    ReferenceState s;
    s.mode_ = ReferenceMode::esm;
    s.zeta_ = zeta;
    s.t_ = 1;
    s.sum_ = r1;
    s.current_ = r1;
    s.p_max_ = p_max;
    return s;
}

void ReferenceState::post(double p) {
    check_range(p, p_max_, "posted price");
    if (mode_ == ReferenceMode::arm) {
        sum_ += p;
        ++t_;
        current_ = sum_ / static_cast<double>(t_);
    } else {
        current_ = smoothing_step(current_, p, zeta_);
        ++t_;
        sum_ += p;
    }
}

}  // namespace refprice

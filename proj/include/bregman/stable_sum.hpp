#pragma once

#include "bregman/ext_real.hpp"

namespace bregman {

/// Neumaier-compensated accumulator. The correction term keeps the identity
/// tests meaningful at 1e-12 even for long sums; plain += loses that around
/// ten thousand terms.
class stable_sum {
public:
    void add(double x) noexcept {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double get() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Accumulates extended reals: finite parts go through the compensated sum,
/// infinities are tracked separately. Mixing both infinities is reported as
/// indeterminate when the total is requested.
class ext_accumulator {
public:
    void add(ext_real x) {
        if (x.is_pos_inf())
            pos_inf_ = true;
        else if (x.is_neg_inf())
            neg_inf_ = true;
        else
            finite_.add(x.value());
    }

    ext_real total() const {
        if (pos_inf_ && neg_inf_)
            throw indeterminate_error("extended sum mixes +inf and -inf terms");
        if (pos_inf_) return ext_real::pos_inf();
        if (neg_inf_) return ext_real::neg_inf();
        return ext_real(finite_.get());
    }

private:
    stable_sum finite_;
    bool pos_inf_ = false;
    bool neg_inf_ = false;
};

} // namespace bregman

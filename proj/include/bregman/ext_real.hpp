#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bregman {

/// Raised when extended-real arithmetic hits an indeterminate form such as
/// (+inf) + (-inf). Divergence formulas only ever need one-sided infinities;
/// an indeterminate form means the caller fed inputs outside the contract.
class indeterminate_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Extended real value: a finite double or one of the two infinities.
/// NaN is rejected at construction, so indeterminate forms surface as
/// exceptions instead of propagating silently.
///
/// Conventions: finite + (+/-inf) absorbs to the infinity; opposite
/// infinities throw; 0 * inf = 0 (the measure-theoretic convention the
/// integrands rely on).
class ext_real {
public:
    constexpr ext_real() noexcept : v_(0.0) {}

    ext_real(double v) : v_(v) {
        if (std::isnan(v))
            throw indeterminate_error("ext_real: NaN is not an extended real");
    }

    static ext_real pos_inf() noexcept {
        ext_real r;
        r.v_ = std::numeric_limits<double>::infinity();
        return r;
    }
    static ext_real neg_inf() noexcept {
        ext_real r;
        r.v_ = -std::numeric_limits<double>::infinity();
        return r;
    }

    bool finite() const noexcept { return std::isfinite(v_); }
    bool is_pos_inf() const noexcept { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const noexcept { return std::isinf(v_) && v_ < 0; }

    /// Underlying double; infinities come through as IEEE infinities.
    double value() const noexcept { return v_; }

    friend ext_real operator-(ext_real a) noexcept {
        ext_real r;
        r.v_ = -a.v_;
        return r;
    }

    friend ext_real operator+(ext_real a, ext_real b) {
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw indeterminate_error("ext_real: (+inf) + (-inf)");
        return ext_real(a.v_ + b.v_);
    }

    friend ext_real operator-(ext_real a, ext_real b) { return a + (-b); }

    friend ext_real operator*(ext_real a, ext_real b) {
        if ((a.v_ == 0.0 && !b.finite()) || (b.v_ == 0.0 && !a.finite()))
            return ext_real(0.0);
        return ext_real(a.v_ * b.v_);
    }

    ext_real& operator+=(ext_real b) { return *this = *this + b; }

    friend bool operator==(ext_real a, ext_real b) noexcept { return a.v_ == b.v_; }
    friend bool operator!=(ext_real a, ext_real b) noexcept { return a.v_ != b.v_; }
    friend bool operator<(ext_real a, ext_real b) noexcept { return a.v_ < b.v_; }
    friend bool operator<=(ext_real a, ext_real b) noexcept { return a.v_ <= b.v_; }
    friend bool operator>(ext_real a, ext_real b) noexcept { return a.v_ > b.v_; }
    friend bool operator>=(ext_real a, ext_real b) noexcept { return a.v_ >= b.v_; }

private:
    double v_;
};

inline std::string to_string(ext_real x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    return std::to_string(x.value());
}

} // namespace bregman

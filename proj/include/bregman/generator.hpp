#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bregman/ext_real.hpp"

namespace bregman {

/// Convex generator function phi on (0, inf) with phi(1) = 0, together with
/// the extended values the distance formulas need at the domain edges:
/// phi(0), phi'_+(0) and phi*(0) = lim_{t->inf} phi(t)/t.
///
/// Generators are immutable after construction and safe to share across
/// threads. eval/rderiv are only defined for t > 0; use at_zero() and
/// rderiv_at_zero() for the t = 0 limits.
class generator {
public:
    using eval_fn = std::function<double(double)>;
    using deriv_fn = std::function<ext_real(double)>;

    generator(std::string label, eval_fn eval, deriv_fn rderiv, ext_real at_zero,
              ext_real rderiv_at_zero, ext_real adjoint_at_zero)
        : label_(std::move(label)),
          eval_(std::move(eval)),
          rderiv_(std::move(rderiv)),
          at_zero_(at_zero),
          rderiv_at_zero_(rderiv_at_zero),
          adjoint_at_zero_(adjoint_at_zero) {}

    double eval(double t) const {
        require_positive(t);
        return eval_(t);
    }

    /// Right-hand derivative phi'_+(t).
    ext_real rderiv(double t) const {
        require_positive(t);
        return rderiv_(t);
    }

    ext_real at_zero() const noexcept { return at_zero_; }
    ext_real rderiv_at_zero() const noexcept { return rderiv_at_zero_; }
    ext_real adjoint_at_zero() const noexcept { return adjoint_at_zero_; }
    const std::string& label() const noexcept { return label_; }

private:
    static void require_positive(double t) {
        if (!(t > 0.0))
            throw std::domain_error("generator: argument must be positive; use at_zero for t = 0");
    }

    std::string label_;
    eval_fn eval_;
    deriv_fn rderiv_;
    ext_real at_zero_;
    ext_real rderiv_at_zero_;
    ext_real adjoint_at_zero_;
};

/// phi(t) = t ln t. The one generator whose scaled Bregman distance ignores
/// the scale measure entirely.
inline generator make_kl() {
    return generator(
        "kl", [](double t) { return t * std::log(t); },
        [](double t) { return ext_real(std::log(t) + 1.0); }, ext_real(0.0),
        ext_real::neg_inf(), ext_real::pos_inf());
}

/// phi(t) = -ln t.
inline generator make_reverse_kl() {
    return generator(
        "rkl", [](double t) { return -std::log(t); },
        [](double t) { return ext_real(-1.0 / t); }, ext_real::pos_inf(),
        ext_real::neg_inf(), ext_real(0.0));
}

/// phi(t) = |t - 1|. At the kink the right-hand derivative is +1.
inline generator make_total_variation() {
    return generator(
        "tv", [](double t) { return std::abs(t - 1.0); },
        [](double t) { return ext_real(t < 1.0 ? -1.0 : 1.0); }, ext_real(1.0),
        ext_real(-1.0), ext_real(1.0));
}

/// phi(t) = (t - 1)^2.
inline generator make_pearson() {
    return generator(
        "pearson", [](double t) { return (t - 1.0) * (t - 1.0); },
        [](double t) { return ext_real(2.0 * (t - 1.0)); }, ext_real(1.0),
        ext_real(-2.0), ext_real::pos_inf());
}

/// phi(t) = (t - 1)^2 / (t + 1).
inline generator make_lecam() {
    return generator(
        "lecam", [](double t) { return (t - 1.0) * (t - 1.0) / (t + 1.0); },
        [](double t) {
            double s = t + 1.0;
            return ext_real((t - 1.0) * (t + 3.0) / (s * s));
        },
        ext_real(1.0), ext_real(-3.0), ext_real(1.0));
}

/// Power generator phi_a(t) = (t^a - 1) / (a(a-1)), a not in {0, 1}.
/// Evaluated through expm1 so the small-|a| and small-|a-1| regimes keep
/// full relative precision.
inline generator make_power(double alpha) {
    if (alpha == 0.0 || alpha == 1.0)
        throw std::domain_error(
            "make_power: alpha in {0,1} is a logarithmic limit; use make_reverse_kl / make_kl");
    const double denom = alpha * (alpha - 1.0);
    ext_real at_zero = alpha > 0.0 ? ext_real(-1.0 / denom) : ext_real::pos_inf();
    ext_real rd_zero = alpha < 1.0 ? ext_real::neg_inf() : ext_real(0.0);
    ext_real adj_zero = alpha < 1.0 ? ext_real(0.0) : ext_real::pos_inf();
    return generator(
        "power:" + std::to_string(alpha),
        [alpha, denom](double t) { return std::expm1(alpha * std::log(t)) / denom; },
        [alpha](double t) {
            return ext_real(std::exp((alpha - 1.0) * std::log(t)) / (alpha - 1.0));
        },
        at_zero, rd_zero, adj_zero);
}

namespace detail {

/// phi*'_+(0) = lim_{s->inf} (phi(s) - s phi'_+(s)). The limit is monotone
/// nonincreasing, so probe it on a decreasing t-grid and map divergence to
/// -inf. Exact for the built-ins; exotic user generators with very slow
/// slope convergence may see the last probed value instead of the limit.
inline ext_real probe_adjoint_rderiv_at_zero(const generator& g) {
    double prev = 0.0;
    bool have_prev = false;
    for (double t : {1e-3, 1e-5, 1e-7, 1e-9, 1e-11}) {
        double s = 1.0 / t;
        ext_real slope = g.rderiv(s);
        if (!slope.finite()) return slope.is_pos_inf() ? ext_real::neg_inf() : ext_real::pos_inf();
        double r = g.eval(s) - s * slope.value();
        if (!std::isfinite(r) || r < -1e10) return ext_real::neg_inf();
        if (have_prev && std::abs(r - prev) <= 1e-9 * (1.0 + std::abs(r))) return ext_real(r);
        prev = r;
        have_prev = true;
    }
    return ext_real(prev);
}

} // namespace detail

/// Adjoint generator phi*(t) = t phi(1/t); phi** = phi. The extended values
/// swap roles: phi*(0) = lim phi(t)/t and (phi*)*(0) = phi(0). Its
/// right-hand derivative is phi(1/t) - phi'(1/t)/t, exact wherever phi is
/// differentiable at 1/t.
inline generator adjoint(const generator& g) {
    ext_real rd_zero = detail::probe_adjoint_rderiv_at_zero(g);
    return generator(
        g.label() + "*", [g](double t) { return t * g.eval(1.0 / t); },
        [g](double t) {
            double s = 1.0 / t;
            return ext_real(g.eval(s)) - ext_real(s) * g.rderiv(s);
        },
        g.adjoint_at_zero(), rd_zero, g.at_zero());
}

/// Sampled feasibility checks for a generator: phi(1) = 0, midpoint
/// convexity, nondecreasing right derivative. Throws std::domain_error
/// naming the first violated property. Sampling is the only generic check
/// available since generators are user-extensible.
inline void validate_generator(const generator& g, int grid_points = 200, double lo = 1e-6,
                               double hi = 1e6) {
    if (std::abs(g.eval(1.0)) > 1e-12)
        throw std::domain_error("generator '" + g.label() + "': phi(1) != 0");
    std::vector<double> ts(static_cast<std::size_t>(grid_points));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < grid_points; ++i)
        ts[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * i / static_cast<double>(grid_points - 1));
    for (std::size_t i = 0; i + 2 < ts.size(); ++i) {
        double a = ts[i], b = ts[i + 1], c = ts[i + 2];
        double fa = g.eval(a), fb = g.eval(b), fc = g.eval(c);
        double chord = ((c - b) * fa + (b - a) * fc) / (c - a);
        if (fb > chord + 1e-12 * (1.0 + std::abs(fa) + std::abs(fc)))
            throw std::domain_error("generator '" + g.label() + "': convexity violated near t=" +
                                    std::to_string(b));
    }
    ext_real prev = g.rderiv(ts.front());
    for (std::size_t i = 1; i < ts.size(); ++i) {
        ext_real cur = g.rderiv(ts[i]);
        if (cur < prev - ext_real(1e-12 * (1.0 + std::abs(prev.value()))))
            throw std::domain_error("generator '" + g.label() +
                                    "': right derivative not nondecreasing");
        prev = cur;
    }
}

/// CLI selection grammar: kl | rkl | tv | pearson | lecam | power:<alpha>.
inline generator parse_generator(std::string_view text) {
    if (text == "kl") return make_kl();
    if (text == "rkl") return make_reverse_kl();
    if (text == "tv") return make_total_variation();
    if (text == "pearson") return make_pearson();
    if (text == "lecam") return make_lecam();
    constexpr std::string_view prefix = "power:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::string arg(text.substr(prefix.size()));
        std::size_t pos = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("unparseable power exponent: '" + arg + "'");
        }
        if (pos != arg.size())
            throw std::invalid_argument("trailing characters in power exponent: '" + arg + "'");
        return make_power(alpha);
    }
    throw std::invalid_argument("unknown generator '" + std::string(text) +
                                "' (expected kl|rkl|tv|pearson|lecam|power:<alpha>)");
}

} // namespace bregman

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bregman/ext_real.hpp"

namespace bregman {

enum class domain_location { interior, boundary, outside };

/// Exponential family given purely by its cumulant function b on a domain
/// Theta = { theta : b(theta) < inf }. Distances between members depend on
/// nothing else, so this is the whole interface the closed forms need.
///
/// Domain membership comes from the family's own classifier, never from
/// numeric probing of b: floating point can make b look finite at invalid
/// points through cancellation.
class exp_family {
public:
    using cumulant_fn = std::function<ext_real(std::span<const double>)>;
    using gradient_fn = std::function<std::vector<double>(std::span<const double>)>;
    using locate_fn = std::function<domain_location(std::span<const double>)>;

    exp_family(std::string label, std::size_t dim, cumulant_fn cumulant, locate_fn locate,
               gradient_fn gradient = nullptr)
        : label_(std::move(label)),
          dim_(dim),
          cumulant_(std::move(cumulant)),
          locate_(std::move(locate)),
          gradient_(std::move(gradient)) {
        if (dim_ == 0) throw std::invalid_argument("exp_family: dimension must be positive");
    }

    const std::string& label() const noexcept { return label_; }
    std::size_t dim() const noexcept { return dim_; }

    ext_real cumulant(std::span<const double> theta) const {
        check_dim(theta);
        return cumulant_(theta);
    }

    domain_location locate(std::span<const double> theta) const {
        check_dim(theta);
        return locate_(theta);
    }

    bool in_domain(std::span<const double> theta) const {
        return locate(theta) != domain_location::outside;
    }

    bool in_interior(std::span<const double> theta) const {
        return locate(theta) == domain_location::interior;
    }

    /// Gradient of the cumulant at an interior point. Falls back to central
    /// finite differences (step max(1e-6, 1e-8 |theta_i|)) when the family
    /// carries no analytic gradient.
    std::vector<double> grad_cumulant(std::span<const double> theta) const {
        check_dim(theta);
        if (!in_interior(theta))
            throw std::domain_error("grad_cumulant: parameter not in the interior of Theta");
        if (gradient_) return gradient_(theta);
        std::vector<double> grad(dim_);
        std::vector<double> probe(theta.begin(), theta.end());
        for (std::size_t i = 0; i < dim_; ++i) {
            const double h = std::max(1e-6, 1e-8 * std::abs(theta[i]));
            probe[i] = theta[i] + h;
            ext_real hi = cumulant_(probe);
            probe[i] = theta[i] - h;
            ext_real lo = cumulant_(probe);
            probe[i] = theta[i];
            if (!hi.finite() || !lo.finite())
                throw std::domain_error("grad_cumulant: finite-difference stencil left Theta");
            grad[i] = (hi.value() - lo.value()) / (2.0 * h);
        }
        return grad;
    }

    bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }

private:
    void check_dim(std::span<const double> theta) const {
        if (theta.size() != dim_)
            throw std::invalid_argument("exp_family '" + label_ + "': parameter length " +
                                        std::to_string(theta.size()) + " != dim " +
                                        std::to_string(dim_));
    }

    std::string label_;
    std::size_t dim_;
    cumulant_fn cumulant_;
    locate_fn locate_;
    gradient_fn gradient_;
};

namespace detail {

inline void require_in_domain(const exp_family& f, std::span<const double> theta,
                              const char* who) {
    if (!f.in_domain(theta))
        throw std::domain_error(std::string(who) + ": outside natural parameter domain");
}

inline std::vector<double> combine(double a, std::span<const double> x, double b,
                                   std::span<const double> y) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

inline double finite_cumulant(const exp_family& f, std::span<const double> theta,
                              const char* who) {
    ext_real b = f.cumulant(theta);
    if (!b.finite())
        throw std::domain_error(std::string(who) + ": cumulant not finite inside Theta");
    return b.value();
}

/// b at a derived parameter point: classified first, evaluated only inside.
inline ext_real cumulant_at(const exp_family& f, std::span<const double> theta) {
    if (f.locate(theta) == domain_location::outside) return ext_real::pos_inf();
    return f.cumulant(theta);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Adds coeff * expm1(x) to a running extended total, mapping the infinite
/// and overflow cases. Negative-signed infinite contributions cannot occur
/// in a nonnegative distance; they mean the representation formula does not
/// cover these inputs.
inline ext_real expm1_term(ext_real x, double coeff) {
    if (x.is_pos_inf() || x.value() > 709.0) {
        if (coeff < 0.0)
            throw std::domain_error("formula outside validity domain (infinite term with negative weight)");
        return ext_real::pos_inf();
    }
    return ext_real(coeff * std::expm1(x.value()));
}

} // namespace detail

/// rho_alpha(th1, th2) = b(a th1 + (1-a) th2) - a b(th1) - (1-a) b(th2).
/// Finite and <= 0 for a in [0,1]; may be +inf outside that range.
inline ext_real rho_alpha(const exp_family& f, double alpha, std::span<const double> th1,
                          std::span<const double> th2) {
    detail::require_in_domain(f, th1, "rho_alpha");
    detail::require_in_domain(f, th2, "rho_alpha");
    const double b1 = detail::finite_cumulant(f, th1, "rho_alpha");
    const double b2 = detail::finite_cumulant(f, th2, "rho_alpha");
    auto comb = detail::combine(alpha, th1, 1.0 - alpha, th2);
    ext_real bc = detail::cumulant_at(f, comb);
    return bc - ext_real(alpha * b1 + (1.0 - alpha) * b2);
}

/// Renyi-divergence accessor: rho_alpha / (alpha (alpha - 1)).
inline ext_real renyi_alpha(const exp_family& f, double alpha, std::span<const double> th1,
                            std::span<const double> th2) {
    if (alpha == 0.0 || alpha == 1.0)
        throw std::domain_error("renyi_alpha: alpha must differ from 0 and 1");
    return rho_alpha(f, alpha, th1, th2) * ext_real(1.0 / (alpha * (alpha - 1.0)));
}

/// sigma_alpha = sigma^I - sigma^II with
///   sigma^I  = b(a th1 + (1-a)[th1 - th2 + th0])   (possibly +inf),
///   sigma^II = a b(th1) + (1-a)[b(th1) - b(th2) + b(th0)]   (finite).
inline ext_real sigma_alpha(const exp_family& f, double alpha, std::span<const double> th0,
                            std::span<const double> th1, std::span<const double> th2) {
    detail::require_in_domain(f, th0, "sigma_alpha");
    detail::require_in_domain(f, th1, "sigma_alpha");
    detail::require_in_domain(f, th2, "sigma_alpha");
    const double b0 = detail::finite_cumulant(f, th0, "sigma_alpha");
    const double b1 = detail::finite_cumulant(f, th1, "sigma_alpha");
    const double b2 = detail::finite_cumulant(f, th2, "sigma_alpha");
    std::vector<double> shifted(f.dim());
    for (std::size_t i = 0; i < f.dim(); ++i) shifted[i] = th1[i] - th2[i] + th0[i];
    auto arg = detail::combine(alpha, th1, 1.0 - alpha, shifted);
    ext_real sigma_one = detail::cumulant_at(f, arg);
    const double sigma_two = alpha * b1 + (1.0 - alpha) * (b1 - b2 + b0);
    return sigma_one - ext_real(sigma_two);
}

/// Classical Bregman distance of the cumulant:
/// D_0(th1, th2) = b(th1) - b(th2) - grad b(th2) . (th1 - th2).
inline double d_zero(const exp_family& f, std::span<const double> th1,
                     std::span<const double> th2) {
    detail::require_in_domain(f, th1, "d_zero");
    if (!f.in_interior(th2))
        throw std::domain_error("d_zero: second parameter must be interior");
    const double b1 = detail::finite_cumulant(f, th1, "d_zero");
    const double b2 = detail::finite_cumulant(f, th2, "d_zero");
    auto grad = f.grad_cumulant(th2);
    auto diff = detail::combine(1.0, th1, -1.0, th2);
    return b1 - b2 - detail::dot(grad, diff);
}

/// D_1(th1, th2) = D_0(th2, th1); the Kullback divergence of the family.
inline double d_one(const exp_family& f, std::span<const double> th1,
                    std::span<const double> th2) {
    return d_zero(f, th2, th1);
}

/// Power divergence D_alpha = (exp rho_alpha - 1) / (alpha (alpha - 1)),
/// evaluated as expm1(rho)/(a(a-1)). Near-singular alpha routes to the exact
/// limit formulas; 1/(a(a-1)) would amplify rounding catastrophically there.
inline ext_real d_alpha(const exp_family& f, double alpha, std::span<const double> th1,
                        std::span<const double> th2) {
    if (std::abs(alpha) < 1e-9) return ext_real(d_zero(f, th1, th2));
    if (std::abs(alpha - 1.0) < 1e-9) return ext_real(d_one(f, th1, th2));
    const double coeff = 1.0 / (alpha * (alpha - 1.0));
    return detail::expm1_term(rho_alpha(f, alpha, th1, th2), coeff);
}

/// Scaled Bregman power distance through the three-exponential cumulant
/// representation, rearranged as
///   expm1(rho_a(th1,th0))/(a(a-1)) + expm1(rho_a(th2,th0))/a
///     + expm1(sigma_a(th0,th1,th2))/(1-a)
/// which is identical because 1/(a(a-1)) + 1/a + 1/(1-a) = 0, and stable
/// near the alpha limits.
inline ext_real b_alpha(const exp_family& f, double alpha, std::span<const double> th1,
                        std::span<const double> th2, std::span<const double> th0);

/// alpha -> 0 limit: D_0-style term against the scale's gradient plus the
/// exp sigma_0 - 1 deviation. Requires th0 interior.
inline ext_real b_zero(const exp_family& f, std::span<const double> th1,
                       std::span<const double> th2, std::span<const double> th0) {
    detail::require_in_domain(f, th1, "b_zero");
    detail::require_in_domain(f, th2, "b_zero");
    if (!f.in_interior(th0)) throw std::domain_error("b_zero: scale parameter must be interior");
    const double b1 = detail::finite_cumulant(f, th1, "b_zero");
    const double b2 = detail::finite_cumulant(f, th2, "b_zero");
    auto grad = f.grad_cumulant(th0);
    auto diff = detail::combine(1.0, th1, -1.0, th2);
    const double linear = b1 - b2 - detail::dot(grad, diff);
    ext_real dev = detail::expm1_term(sigma_alpha(f, 0.0, th0, th1, th2), 1.0);
    return ext_real(linear) + dev;
}

/// alpha -> 1 limit: independent of the scale parameter.
inline double b_one(const exp_family& f, std::span<const double> th1,
                    std::span<const double> th2, std::span<const double> /*th0*/) {
    if (!f.in_interior(th1)) throw std::domain_error("b_one: first parameter must be interior");
    return d_zero(f, th2, th1);
}

inline ext_real b_alpha(const exp_family& f, double alpha, std::span<const double> th1,
                        std::span<const double> th2, std::span<const double> th0) {
    if (std::abs(alpha) < 1e-9) return b_zero(f, th1, th2, th0);
    if (std::abs(alpha - 1.0) < 1e-9) return ext_real(b_one(f, th1, th2, th0));
    ext_real t1 = detail::expm1_term(rho_alpha(f, alpha, th1, th0), 1.0 / (alpha * (alpha - 1.0)));
    ext_real t2 = detail::expm1_term(rho_alpha(f, alpha, th2, th0), 1.0 / alpha);
    ext_real t3 = detail::expm1_term(sigma_alpha(f, alpha, th0, th1, th2), 1.0 / (1.0 - alpha));
    ext_real total = t1 + t2 + t3;
    if (total.is_neg_inf())
        throw std::domain_error("formula outside validity domain (negative infinite total)");
    return total;
}

/// Family with cumulant b(theta) + c + v . theta; every distance above is
/// invariant under this shift.
inline exp_family shift_family(const exp_family& f, double c, std::vector<double> v) {
    if (v.size() != f.dim())
        throw std::invalid_argument("shift_family: shift vector length must match dim");
    auto cum = [f, c, v](std::span<const double> theta) {
        return f.cumulant(theta) + ext_real(c + detail::dot(v, theta));
    };
    auto loc = [f](std::span<const double> theta) { return f.locate(theta); };
    exp_family::gradient_fn grad = nullptr;
    if (f.has_analytic_gradient()) {
        grad = [f, v](std::span<const double> theta) {
            auto g = f.grad_cumulant(theta);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += v[i];
            return g;
        };
    }
    return exp_family(f.label() + "+shift", f.dim(), std::move(cum), std::move(loc),
                      std::move(grad));
}

} // namespace bregman

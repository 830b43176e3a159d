#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "bregman/generator.hpp"
#include "bregman/measure.hpp"
#include "bregman/stable_sum.hpp"

namespace bregman {
namespace detail {

/// One term m phi(p/m) of Eq-div style sums, with the zero-mass limits:
/// p = 0 contributes m phi(0); m = 0 contributes p phi*(0) (the integrand's
/// upper envelope is tight there); p = m = 0 contributes nothing.
inline ext_real dphi_term(const generator& g, double p, double m) {
    if (m > 0.0) {
        if (p > 0.0) return ext_real(m * g.eval(p / m));
        return ext_real(m) * g.at_zero();
    }
    if (p > 0.0) return ext_real(p) * g.adjoint_at_zero();
    return ext_real(0.0);
}

/// One scaled Bregman integrand term
///   m [ phi(p/m) - phi(q/m) - phi'_+(q/m) (p/m - q/m) ],  m > 0.
/// The support line at q/m keeps every term >= 0. Zero-numerator limits:
/// p = q contributes 0 (diagonal); q = 0 < p is +inf when phi'_+(0) = -inf
/// (the support lines at v -> 0 drop without bound) and otherwise evaluates
/// with the finite edge data.
inline ext_real bregman_term(const generator& g, double p, double q, double m) {
    if (!(m > 0.0)) throw std::domain_error("bregman_term: scale mass must be positive");
    if (p == q) return ext_real(0.0);
    const double u = p / m;
    if (q > 0.0) {
        const double v = q / m;
        ext_real phi_u = p > 0.0 ? ext_real(g.eval(u)) : g.at_zero();
        // a support line with finite foot cannot catch an infinite phi(u)
        if (!phi_u.finite()) return ext_real::pos_inf();
        ext_real slope = g.rderiv(v);
        return ext_real(m) * (phi_u - ext_real(g.eval(v)) - slope * ext_real(u - v));
    }
    ext_real slope0 = g.rderiv_at_zero();
    if (!slope0.finite()) return ext_real::pos_inf();
    if (!g.at_zero().finite()) return ext_real::pos_inf();
    return ext_real(m * (g.eval(u) - g.at_zero().value() - slope0.value() * u));
}

/// Unchecked three-measure sum over raw mass spans: used by the homogeneity
/// tests, which scale away from probability normalization on purpose.
inline ext_real scaled_bregman_sum(const generator& g, std::span<const double> p,
                                   std::span<const double> q, std::span<const double> m) {
    ext_accumulator acc;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] > 0.0) {
            acc.add(bregman_term(g, p[i], q[i], m[i]));
        } else if (p[i] != q[i]) {
            // p = q has integrand identically 0 in the m -> 0 limit; anything
            // else has no limit without measure equivalence.
            throw std::domain_error(
                "b_phi: zero scale mass against p != q requires equivalent measures");
        }
    }
    return acc.total();
}

} // namespace detail

/// phi-divergence D_phi(P, M) = sum_i m_i phi(p_i / m_i) over a common
/// support. May be +inf; indeterminate extended sums throw.
inline ext_real d_phi(const generator& g, const discrete_measure& p, const discrete_measure& m) {
    require_common_support(p, m);
    ext_accumulator acc;
    for (std::size_t i = 0; i < p.size(); ++i) acc.add(detail::dphi_term(g, p[i], m[i]));
    return acc.total();
}

/// Scaled Bregman distance B_phi(P, Q | M) for probability measures P, Q and
/// a positive finite scale M on the same support. Always >= 0 (possibly
/// +inf).
inline ext_real b_phi(const generator& g, const discrete_measure& p, const discrete_measure& q,
                      const discrete_measure& m) {
    require_common_support(p, q);
    require_common_support(p, m);
    if (!p.is_probability() || !q.is_probability())
        throw std::domain_error("b_phi: P and Q must be probability measures");
    return detail::scaled_bregman_sum(g, p.masses(), q.masses(), m.masses());
}

/// Universal lower bound M(X) phi(1 / M(X)) of D_phi(., M) over probability
/// measures; attained at p = m / M(X).
inline ext_real divergence_lower_bound(const generator& g, const discrete_measure& m) {
    return ext_real(m.total() * g.eval(1.0 / m.total()));
}

} // namespace bregman

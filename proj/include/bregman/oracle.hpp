#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bregman/discrete.hpp"
#include "bregman/generator.hpp"

namespace bregman {

using density_fn = std::function<double(double)>;

/// Refinement failed to reach the requested tolerance; the best error
/// estimate reached is attached.
class oracle_error : public std::runtime_error {
public:
    oracle_error(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_error(achieved) {}
    double achieved_error;
};

struct integration_options {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_depth = 48;
    /// infinite endpoints are cut where every density falls below
    /// tail_cut * observed peak
    double tail_cut = 1e-16;
};

/// One-dimensional integration interval; endpoints may be infinite.
struct interval {
    double lo;
    double hi;
};

namespace detail {

struct panel_eval {
    double value;
    double error;
};

/// Adaptive Simpson with Richardson control: accept a panel when the
/// two-half refinement moves the estimate by at most 15 * tol, and return
/// the extrapolated value. Fixed recursion order keeps results deterministic.
inline panel_eval adapt_simpson(const std::function<double(double)>& f, double a, double b,
                                double fa, double fm, double fb, double whole, double tol,
                                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw oracle_error("oracle integrand not finite inside the domain", 0.0);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return {left + right + delta / 15.0, std::abs(delta) / 15.0};
    if (depth <= 0)
        throw oracle_error("oracle tolerance not met", std::abs(delta) / 15.0);
    panel_eval l = adapt_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    panel_eval r = adapt_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    return {l.value + r.value, l.error + r.error};
}

} // namespace detail

/// Adaptive quadrature of f over a finite interval. A coarse composite pass
/// sets the scale for the relative part of the tolerance; the error estimate
/// actually reached comes back through err_estimate when requested.
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        const integration_options& opts = {}, double* err_estimate = nullptr) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
        throw std::invalid_argument("integrate: need a finite interval with lo < hi");
    constexpr int panels = 32;
    const double h = (hi - lo) / panels;
    std::vector<double> edges(panels + 1), mids(panels), fe(panels + 1), fm(panels);
    for (int i = 0; i <= panels; ++i) {
        edges[static_cast<std::size_t>(i)] = lo + h * i;
        fe[static_cast<std::size_t>(i)] = f(edges[static_cast<std::size_t>(i)]);
    }
    stable_sum coarse;
    for (int i = 0; i < panels; ++i) {
        auto k = static_cast<std::size_t>(i);
        mids[k] = 0.5 * (edges[k] + edges[k + 1]);
        fm[k] = f(mids[k]);
        if (!std::isfinite(fe[k]) || !std::isfinite(fm[k]) || !std::isfinite(fe[k + 1]))
            throw oracle_error("oracle integrand not finite inside the domain", 0.0);
        coarse.add(h / 6.0 * (fe[k] + 4.0 * fm[k] + fe[k + 1]));
    }
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(coarse.get())) / panels;
    stable_sum total;
    double err = 0.0;
    for (int i = 0; i < panels; ++i) {
        auto k = static_cast<std::size_t>(i);
        double whole = h / 6.0 * (fe[k] + 4.0 * fm[k] + fe[k + 1]);
        detail::panel_eval pe = detail::adapt_simpson(f, edges[k], edges[k + 1], fe[k], fm[k],
                                                      fe[k + 1], whole, tol, opts.max_depth);
        total.add(pe.value);
        err += pe.error;
    }
    if (err_estimate) *err_estimate = err;
    return total.get();
}

/// Replaces infinite endpoints with finite cutoffs where every listed
/// density has decayed below tail_cut times the observed peak.
inline interval truncate_domain(const std::vector<density_fn>& densities, interval dom,
                                double tail_cut = 1e-16) {
    if (densities.empty()) throw std::invalid_argument("truncate_domain: no densities");
    const bool lo_inf = std::isinf(dom.lo);
    const bool hi_inf = std::isinf(dom.hi);
    if (!lo_inf && !hi_inf) return dom;

    double seed_lo = lo_inf ? (hi_inf ? -1.0 : dom.hi - 1.0) : dom.lo;
    double seed_hi = hi_inf ? (lo_inf ? 1.0 : dom.lo + 1.0) : dom.hi;
    auto maxd = [&](double x) {
        double m = 0.0;
        for (const auto& d : densities) m = std::max(m, d(x));
        return m;
    };
    double peak = 0.0;
    for (int i = 0; i <= 64; ++i) peak = std::max(peak, maxd(seed_lo + (seed_hi - seed_lo) * i / 64.0));

    auto expand = [&](double from, double direction) {
        double x = from;
        double step = std::max(1.0, std::abs(seed_hi - seed_lo));
        for (int iter = 0; iter < 400; ++iter) {
            if (maxd(x) < tail_cut * peak) return x;
            peak = std::max(peak, maxd(x));
            x += direction * step;
            step *= 1.5;
        }
        throw oracle_error("domain truncation found no decaying tail", 0.0);
    };
    interval out = dom;
    if (lo_inf) out.lo = expand(seed_lo, -1.0);
    if (hi_inf) out.hi = expand(seed_hi, +1.0);
    return out;
}

/// Reference phi-divergence: integral of m phi(p/m) over the domain by
/// adaptive quadrature. Densities must be positive on the (truncated)
/// domain; the integrand routes through the same extended-value rules as
/// the discrete sums.
inline ext_real oracle_d_phi(const generator& g, const density_fn& p, const density_fn& m,
                             interval dom, const integration_options& opts = {},
                             double* err_estimate = nullptr) {
    interval cut = truncate_domain({p, m}, dom, opts.tail_cut);
    auto f = [&](double x) { return detail::dphi_term(g, p(x), m(x)).value(); };
    return ext_real(integrate(f, cut.lo, cut.hi, opts, err_estimate));
}

/// Reference scaled Bregman distance: the three-term integrand of the
/// defining integral, by adaptive quadrature.
inline ext_real oracle_b_phi(const generator& g, const density_fn& p, const density_fn& q,
                             const density_fn& m, interval dom,
                             const integration_options& opts = {},
                             double* err_estimate = nullptr) {
    interval cut = truncate_domain({p, q, m}, dom, opts.tail_cut);
    auto f = [&](double x) { return detail::bregman_term(g, p(x), q(x), m(x)).value(); };
    return ext_real(integrate(f, cut.lo, cut.hi, opts, err_estimate));
}

/// Counting-measure companions: exact weighted sums through the very same
/// term functions. Point masses are w_i * density_i.
inline ext_real oracle_d_phi(const generator& g, std::span<const double> weights,
                             std::span<const double> p, std::span<const double> m) {
    if (weights.size() != p.size() || p.size() != m.size())
        throw std::invalid_argument("counting oracle: size mismatch");
    ext_accumulator acc;
    for (std::size_t i = 0; i < p.size(); ++i)
        acc.add(detail::dphi_term(g, weights[i] * p[i], weights[i] * m[i]));
    return acc.total();
}

inline ext_real oracle_b_phi(const generator& g, std::span<const double> weights,
                             std::span<const double> p, std::span<const double> q,
                             std::span<const double> m) {
    if (weights.size() != p.size() || p.size() != q.size() || q.size() != m.size())
        throw std::invalid_argument("counting oracle: size mismatch");
    ext_accumulator acc;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double w = weights[i];
        if (w * m[i] > 0.0)
            acc.add(detail::bregman_term(g, w * p[i], w * q[i], w * m[i]));
        else if (w * p[i] != w * q[i])
            throw std::domain_error("counting oracle: zero scale mass against p != q");
    }
    return acc.total();
}

} // namespace bregman

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bregman/exp_family.hpp"

namespace bregman {

using density_fn = std::function<double(double)>;

namespace detail {

/// log(1 + e^x) without overflow for large |x|.
inline double log1pexp(double x) {
    if (x > 30.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace detail

/// Binomial family Bin(n, p) in natural form: theta = ln(p / (1-p)),
/// b(theta) = n ln(1 + e^theta), Theta = R.
inline exp_family binomial(int n) {
    if (n < 1) throw std::invalid_argument("binomial: n must be >= 1");
    const double nn = static_cast<double>(n);
    return exp_family(
        "binomial:" + std::to_string(n), 1,
        [nn](std::span<const double> th) { return ext_real(nn * detail::log1pexp(th[0])); },
        [](std::span<const double>) { return domain_location::interior; },
        [nn](std::span<const double> th) {
            return std::vector<double>{nn * detail::sigmoid(th[0])};
        });
}

/// Natural parameter from the success probability.
inline double binomial_theta(double ptilde) {
    if (!(ptilde > 0.0 && ptilde < 1.0))
        throw std::domain_error("binomial_theta: probability must lie in (0,1)");
    return std::log(ptilde / (1.0 - ptilde));
}

/// The n+1 point masses of Bin(n, sigmoid(theta)), for the exact-sum oracle.
inline std::vector<double> binomial_pmf(int n, double theta) {
    if (n < 1) throw std::invalid_argument("binomial_pmf: n must be >= 1");
    const double p = detail::sigmoid(theta);
    const double q = 1.0 - p;
    std::vector<double> mass(static_cast<std::size_t>(n) + 1);
    double comb = 1.0;
    for (int x = 0; x <= n; ++x) {
        mass[static_cast<std::size_t>(x)] =
            comb * std::pow(p, x) * std::pow(q, n - x);
        comb = comb * static_cast<double>(n - x) / static_cast<double>(x + 1);
    }
    return mass;
}

/// Rayleigh family in natural form: b(theta) = -ln theta on Theta = (0, inf).
/// The transform T(x) = -sqrt(2x) carries the usual Rayleigh densities to
/// theta e^{theta x} on the negative halfline.
inline exp_family rayleigh() {
    return exp_family(
        "rayleigh", 1,
        [](std::span<const double> th) {
            return th[0] > 0.0 ? ext_real(-std::log(th[0])) : ext_real::pos_inf();
        },
        [](std::span<const double> th) {
            return th[0] > 0.0 ? domain_location::interior : domain_location::outside;
        },
        [](std::span<const double> th) { return std::vector<double>{-1.0 / th[0]}; });
}

/// Natural-form Lebesgue density theta e^{theta x} on (-inf, 0).
inline density_fn rayleigh_natural_density(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("rayleigh density: theta must be positive");
    return [theta](double x) { return theta * std::exp(theta * x); };
}

/// Original-form Lebesgue density theta x e^{-theta x^2 / 2} on (0, inf).
inline density_fn rayleigh_original_density(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("rayleigh density: theta must be positive");
    return [theta](double x) { return theta * x * std::exp(-theta * x * x / 2.0); };
}

/// Poisson process observed up to horizon t, parametrized by the process
/// parameter theta (intensity e^theta). Cumulant representative t e^theta
/// = e^{theta + ln t}; the -t constant of b_t(theta) = t(e^theta - 1) is
/// dropped, which the shift invariance makes immaterial.
inline exp_family poisson_process(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("poisson_process: horizon t must be positive");
    return exp_family(
        "poisson-process:" + std::to_string(t), 1,
        [t](std::span<const double> th) { return ext_real(t * std::exp(th[0])); },
        [](std::span<const double>) { return domain_location::interior; },
        [t](std::span<const double> th) { return std::vector<double>{t * std::exp(th[0])}; });
}

/// Poi(t e^theta) masses truncated once the remaining tail is below `tail`.
inline std::vector<double> poisson_pmf(double t, double theta, double tail = 1e-15) {
    const double tau = t * std::exp(theta);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::domain_error("poisson_pmf: intensity out of range");
    std::vector<double> mass;
    double p = std::exp(-tau);
    double cum = 0.0;
    const std::size_t cap = static_cast<std::size_t>(10.0 * tau + 200.0);
    for (std::size_t x = 0; x <= cap; ++x) {
        mass.push_back(p);
        cum += p;
        if (1.0 - cum < tail) return mass;
        p *= tau / static_cast<double>(x + 1);
    }
    throw std::domain_error("poisson_pmf: tail did not fall below threshold");
}

/// Wiener process scale family in its natural parameter vartheta = 1/(2 v^2),
/// v^2 = t theta^2: cumulant -0.5 ln(vartheta) on (0, inf). The 0.5 ln 2t
/// constant is dropped (shift invariance), so the family object itself does
/// not depend on the horizon; t enters through wiener_vartheta.
inline exp_family wiener(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("wiener: horizon t must be positive");
    return exp_family(
        "wiener:" + std::to_string(t), 1,
        [](std::span<const double> th) {
            return th[0] > 0.0 ? ext_real(-0.5 * std::log(th[0])) : ext_real::pos_inf();
        },
        [](std::span<const double> th) {
            return th[0] > 0.0 ? domain_location::interior : domain_location::outside;
        },
        [](std::span<const double> th) { return std::vector<double>{-0.5 / th[0]}; });
}

/// Natural parameter of the Wiener marginal N(0, t theta^2) for scale theta > 0.
inline double wiener_vartheta(double t, double theta) {
    if (!(t > 0.0 && theta > 0.0))
        throw std::domain_error("wiener_vartheta: t and theta must be positive");
    return 1.0 / (2.0 * t * theta * theta);
}

/// Marginal Lebesgue density N(0, 1/(2 vartheta)) on the whole line.
inline density_fn wiener_marginal_density(double vartheta) {
    if (!(vartheta > 0.0)) throw std::domain_error("wiener density: vartheta must be positive");
    const double c = std::sqrt(vartheta / std::acos(-1.0));
    return [c, vartheta](double x) { return c * std::exp(-vartheta * x * x); };
}

/// Geometric Brownian motion with fixed volatility sigma and horizon t,
/// drift theta varying. Natural coordinates (vartheta, tau) = (theta/sigma^2,
/// 1/(2 sigma^2 t)) with cumulant b(vartheta, tau) = -0.5 ln tau
/// + vartheta^2 / (4 tau) on tau > 0. The distances coincide with those of
/// the normal marginals N(theta t, sigma^2 t).
inline exp_family gbm(double t, double sigma) {
    if (!(t > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("gbm: t and sigma must be positive");
    return exp_family(
        "gbm:" + std::to_string(t) + "," + std::to_string(sigma), 2,
        [](std::span<const double> th) {
            const double vt = th[0], tau = th[1];
            if (!(tau > 0.0)) return ext_real::pos_inf();
            return ext_real(-0.5 * std::log(tau) + vt * vt / (4.0 * tau));
        },
        [](std::span<const double> th) {
            return th[1] > 0.0 ? domain_location::interior : domain_location::outside;
        },
        [](std::span<const double> th) {
            const double vt = th[0], tau = th[1];
            return std::vector<double>{vt / (2.0 * tau), -0.5 / tau - vt * vt / (4.0 * tau * tau)};
        });
}

/// Natural coordinates of the drift-theta member.
inline std::array<double, 2> gbm_natural(double t, double sigma, double drift) {
    if (!(t > 0.0) || !(sigma > 0.0))
        throw std::domain_error("gbm_natural: t and sigma must be positive");
    return {drift / (sigma * sigma), 1.0 / (2.0 * sigma * sigma * t)};
}

/// Normal marginal density N(drift t, sigma^2 t) on the whole line.
inline density_fn gbm_marginal_density(double t, double sigma, double drift) {
    const double mu = drift * t;
    const double v2 = sigma * sigma * t;
    const double c = 1.0 / std::sqrt(2.0 * std::acos(-1.0) * v2);
    return [c, mu, v2](double x) { return c * std::exp(-(x - mu) * (x - mu) / (2.0 * v2)); };
}

/// Levy-process family with cumulant b_t(theta) = t (delta theta
/// + sigma^2 theta^2 / 2 + gamma(theta)); the jump cumulant gamma supplies
/// its own derivative and domain classification. gamma == 0 recovers the
/// diffusion case, gamma = e^theta - 1 the Poisson case (up to linear
/// shifts, hence with identical distances).
inline exp_family levy(double t, double delta, double sigma,
                       std::function<ext_real(double)> jump_cumulant,
                       std::function<double(double)> jump_deriv,
                       std::function<domain_location(double)> jump_locate = nullptr) {
    if (!(t > 0.0)) throw std::invalid_argument("levy: horizon t must be positive");
    if (sigma < 0.0) throw std::invalid_argument("levy: sigma must be nonnegative");
    if (!jump_cumulant || !jump_deriv)
        throw std::invalid_argument("levy: jump cumulant and derivative are required");
    auto locate = jump_locate ? std::move(jump_locate)
                              : std::function<domain_location(double)>(
                                    [](double) { return domain_location::interior; });
    const double s2 = sigma * sigma;
    return exp_family(
        "levy", 1,
        [t, delta, s2, jump_cumulant, locate](std::span<const double> th) {
            if (locate(th[0]) == domain_location::outside) return ext_real::pos_inf();
            ext_real g = jump_cumulant(th[0]);
            return ext_real(t) * (ext_real(delta * th[0] + s2 * th[0] * th[0] / 2.0) + g);
        },
        [locate](std::span<const double> th) { return locate(th[0]); },
        [t, delta, s2, jump_deriv](std::span<const double> th) {
            return std::vector<double>{t * (delta + s2 * th[0] + jump_deriv(th[0]))};
        });
}

/// Pure-diffusion convenience instance (gamma == 0).
inline exp_family levy(double t, double delta, double sigma) {
    return levy(
        t, delta, sigma, [](double) { return ext_real(0.0); }, [](double) { return 0.0; });
}

/// CLI selection grammar:
/// binomial:<n> | rayleigh | poisson-process:<t> | wiener:<t> | gbm:<t>,<sigma>.
inline exp_family parse_family(std::string_view text) {
    auto num = [](std::string_view s, const char* what) {
        std::string arg(s);
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("unparseable ") + what + ": '" + arg + "'");
        }
        if (pos != arg.size())
            throw std::invalid_argument(std::string("trailing characters in ") + what + ": '" +
                                        arg + "'");
        return v;
    };
    if (text == "rayleigh") return rayleigh();
    if (text.substr(0, 9) == "binomial:") {
        double n = num(text.substr(9), "binomial n");
        if (n < 1.0 || n != std::floor(n))
            throw std::invalid_argument("binomial n must be a positive integer");
        return binomial(static_cast<int>(n));
    }
    if (text.substr(0, 16) == "poisson-process:") return poisson_process(num(text.substr(16), "horizon"));
    if (text.substr(0, 7) == "wiener:") return wiener(num(text.substr(7), "horizon"));
    if (text.substr(0, 4) == "gbm:") {
        std::string_view rest = text.substr(4);
        auto comma = rest.find(',');
        if (comma == std::string_view::npos)
            throw std::invalid_argument("gbm grammar is gbm:<t>,<sigma>");
        return gbm(num(rest.substr(0, comma), "horizon"), num(rest.substr(comma + 1), "sigma"));
    }
    throw std::invalid_argument(
        "unknown family '" + std::string(text) +
        "' (expected binomial:<n>|rayleigh|poisson-process:<t>|wiener:<t>|gbm:<t>,<sigma>)");
}

} // namespace bregman

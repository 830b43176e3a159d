#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "bregman/discrete.hpp"
#include "bregman/io.hpp"

namespace bregman {

/// A 3D-discrimination sweep: alpha indexes the power generator, beta the
/// mixture scale beta P + (1 - beta) Q. Grid points landing exactly on
/// alpha in {0, 1} use the logarithmic limit generators.
struct grid_spec {
    double alpha_min;
    double alpha_max;
    int alpha_steps;
    double beta_min;
    double beta_max;
    int beta_steps;

    void validate() const {
        if (!(alpha_min < alpha_max) || alpha_steps < 2)
            throw std::domain_error("grid: need alpha_min < alpha_max and alpha_steps >= 2");
        if (!(beta_min < beta_max) || beta_steps < 2)
            throw std::domain_error("grid: need beta_min < beta_max and beta_steps >= 2");
        if (beta_min < 0.0 || beta_max > 1.0)
            throw std::domain_error("grid: beta range must lie within [0,1]");
    }

    double alpha_at(int i) const {
        return alpha_min + (alpha_max - alpha_min) * i / static_cast<double>(alpha_steps - 1);
    }
    double beta_at(int j) const {
        return beta_min + (beta_max - beta_min) * j / static_cast<double>(beta_steps - 1);
    }
};

/// B_alpha(P, Q | beta P + (1-beta) Q) through the exact discrete sums.
inline double power_scaled_bregman(const discrete_measure& p, const discrete_measure& q,
                                   double alpha, double beta) {
    generator g = alpha == 0.0   ? make_reverse_kl()
                  : alpha == 1.0 ? make_kl()
                                 : make_power(alpha);
    ext_real v = b_phi(g, p, q, mixture(p, q, beta));
    if (!v.finite()) throw std::domain_error("grid point evaluated to an infinite distance");
    return v.value();
}

/// Row-major in alpha then beta.
inline std::vector<double> discrimination_grid(const discrete_measure& p,
                                               const discrete_measure& q, const grid_spec& spec) {
    spec.validate();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(spec.alpha_steps) *
                   static_cast<std::size_t>(spec.beta_steps));
    for (int i = 0; i < spec.alpha_steps; ++i)
        for (int j = 0; j < spec.beta_steps; ++j)
            values.push_back(power_scaled_bregman(p, q, spec.alpha_at(i), spec.beta_at(j)));
    return values;
}

/// CSV with header alpha,beta,value; numbers in shortest round-trip form,
/// locale-independent, so identical inputs give byte-identical files.
inline void write_grid_csv(std::ostream& os, const grid_spec& spec,
                           std::span<const double> values) {
    os << "alpha,beta,value\n";
    std::size_t k = 0;
    for (int i = 0; i < spec.alpha_steps; ++i)
        for (int j = 0; j < spec.beta_steps; ++j)
            os << format_shortest(spec.alpha_at(i)) << ',' << format_shortest(spec.beta_at(j))
               << ',' << format_shortest(values[k++]) << '\n';
}

} // namespace bregman

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bregman/stable_sum.hpp"

namespace bregman {

/// Finite nonnegative mass vector over a shared support. The total is
/// cached with compensated summation. Inputs off probability normalization
/// by more than 1e-12 are rejected where a probability is required, never
/// silently renormalized.
class discrete_measure {
public:
    explicit discrete_measure(std::vector<double> masses) : masses_(std::move(masses)) {
        if (masses_.empty()) throw std::invalid_argument("discrete_measure: empty support");
        stable_sum s;
        for (double m : masses_) {
            if (!(m >= 0.0) || !std::isfinite(m))
                throw std::invalid_argument("discrete_measure: masses must be finite and >= 0");
            s.add(m);
        }
        total_ = s.get();
        if (!(total_ > 0.0)) throw std::invalid_argument("discrete_measure: total mass must be positive");
    }

    /// Validating constructor for probability inputs (|total - 1| <= tol).
    static discrete_measure probability(std::vector<double> masses, double tol = 1e-12) {
        discrete_measure m(std::move(masses));
        if (!m.is_probability(tol))
            throw std::invalid_argument("discrete_measure: not normalized to 1 (total " +
                                        std::to_string(m.total()) + ")");
        return m;
    }

    std::size_t size() const noexcept { return masses_.size(); }
    double operator[](std::size_t i) const { return masses_[i]; }
    const std::vector<double>& masses() const noexcept { return masses_; }
    double total() const noexcept { return total_; }
    bool is_probability(double tol = 1e-12) const noexcept { return std::abs(total_ - 1.0) <= tol; }

private:
    std::vector<double> masses_;
    double total_;
};

inline void require_common_support(const discrete_measure& a, const discrete_measure& b) {
    if (a.size() != b.size())
        throw std::domain_error("measures must share a support (sizes " +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

/// beta P + (1 - beta) Q for probability measures on a common support.
inline discrete_measure mixture(const discrete_measure& p, const discrete_measure& q, double beta) {
    require_common_support(p, q);
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::domain_error("mixture: beta must lie in [0,1]");
    if (!p.is_probability() || !q.is_probability())
        throw std::domain_error("mixture: inputs must be probability measures");
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = beta * p[i] + (1.0 - beta) * q[i];
    return discrete_measure(std::move(out));
}

/// Surjective index-merging map {0..d-1} -> {0..k-1}; the discrete instance
/// of a measurable statistic T.
class merge_map {
public:
    explicit merge_map(std::vector<std::size_t> assignment) : assignment_(std::move(assignment)) {
        if (assignment_.empty()) throw std::invalid_argument("merge_map: empty assignment");
        target_size_ = 1 + *std::max_element(assignment_.begin(), assignment_.end());
        std::vector<bool> hit(target_size_, false);
        for (std::size_t j : assignment_) hit[j] = true;
        if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }))
            throw std::invalid_argument("merge_map: assignment must be onto 0..k-1");
    }

    static merge_map identity(std::size_t d) {
        std::vector<std::size_t> a(d);
        std::iota(a.begin(), a.end(), std::size_t{0});
        return merge_map(std::move(a));
    }

    std::size_t source_size() const noexcept { return assignment_.size(); }
    std::size_t target_size() const noexcept { return target_size_; }
    std::size_t operator()(std::size_t i) const { return assignment_[i]; }

private:
    std::vector<std::size_t> assignment_;
    std::size_t target_size_;
};

/// Pushforward of a measure under an index merge; preserves the total.
inline discrete_measure merge(const merge_map& t, const discrete_measure& p) {
    if (t.source_size() != p.size())
        throw std::domain_error("merge: map domain does not match measure support");
    std::vector<stable_sum> acc(t.target_size());
    for (std::size_t i = 0; i < p.size(); ++i) acc[t(i)].add(p[i]);
    std::vector<double> out(t.target_size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = acc[j].get();
    return discrete_measure(std::move(out));
}

/// Discrete sufficiency of T for the triplet {P, Q, M}: p/m and q/m must be
/// constant on every merge class (the factorization reduces to exactly
/// that when masses are positive).
inline bool is_sufficient(const merge_map& t, const discrete_measure& p, const discrete_measure& q,
                          const discrete_measure& m, double rel_tol = 1e-12) {
    require_common_support(p, q);
    require_common_support(p, m);
    if (t.source_size() != p.size())
        throw std::domain_error("is_sufficient: map domain does not match support");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!(m[i] > 0.0)) throw std::domain_error("is_sufficient: masses must be positive");

    auto constant_on_classes = [&](const discrete_measure& num) {
        std::vector<double> ref(t.target_size(), -1.0);
        for (std::size_t i = 0; i < num.size(); ++i) {
            double r = num[i] / m[i];
            double& seen = ref[t(i)];
            if (seen < 0.0)
                seen = r;
            else if (std::abs(r - seen) > rel_tol * std::max(1.0, std::abs(seen)))
                return false;
        }
        return true;
    };
    return constant_on_classes(p) && constant_on_classes(q);
}

} // namespace bregman

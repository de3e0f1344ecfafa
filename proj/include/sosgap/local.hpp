#pragma once

#include <map>
#include <stdexcept>

#include "sosgap/moments.hpp"

// Restrictions of a pseudo-distribution to small coordinate sets.  For any
// subset S with |S| <= t, applying the pseudo-expectation to the point
// indicators over S yields a genuine signed measure on {0,1}^S (or {-1,1}^S)
// whose total mass is exactly 1 and whose moments within S agree with the
// original vector.  For valid vectors the masses are nonnegative up to
// eigenvalue tolerance, so the restriction behaves like a marginal of a real
// distribution.

namespace sosgap {

struct LocalDistribution {
    Subset support_set = 0;            // the coordinate set S
    BasisConvention convention = BasisConvention::ZeroOne;
    std::map<Subset, double> mass;     // keyed by the high coordinates U, a subset of S

    double total() const {
        double acc = 0.0;
        for (const auto& [u, m] : mass) acc += m;
        return acc;
    }

    double operator()(Subset u) const {
        auto it = mass.find(u);
        if (it == mass.end()) throw std::invalid_argument("LocalDistribution: point outside support set");
        return it->second;
    }
};

/// Local distribution induced on the coordinates of S, |S| <= t.
inline LocalDistribution restrict_local(const MomentVector& mv, Subset S) {
    if (S >= (Subset{1} << mv.n())) throw std::invalid_argument("restrict_local: subset outside variable range");
    if (subset_size(S) > mv.half_degree())
        throw std::domain_error("restrict_local: subset larger than half the degree bound");
    LocalDistribution out;
    out.support_set = S;
    out.convention = mv.convention();
    for (Subset u : submasks_of(S))
        out.mass[u] = pseudo_expect(mv, indicator_on_subset(mv.convention(), mv.n(), S, u));
    return out;
}

/// Point masses of the full distribution encoded by a moment vector of full
/// degree (degree bound 2n).  Restricted to n <= 4, where the 2^n point
/// indicators stay cheap.
inline std::map<Subset, double> extract_full_distribution(const MomentVector& mv) {
    if (mv.degree_bound() < 2 * mv.n())
        throw std::domain_error("extract_full_distribution: degree bound below 2n");
    if (mv.n() > 4) throw std::invalid_argument("extract_full_distribution: supported for n <= 4 only");
    std::map<Subset, double> out;
    for (Subset point = 0; point < (Subset{1} << mv.n()); ++point)
        out[point] = pseudo_expect(mv, indicator_point(mv.convention(), mv.n(), point));
    return out;
}

/// Truncated indicator of the event "exactly U among S is selected": the
/// indicator polynomial over S with all terms of degree >= t removed.
inline Polynomial truncated_indicator(const MomentVector& mv, Subset S, Subset U) {
    return truncate(indicator_on_subset(mv.convention(), mv.n(), S, U), mv.half_degree());
}

/// Conditional selection weight of item i given the event "exactly U among S
/// selected", formed with truncated indicators so the degrees stay within
/// bounds for any size of S:
///
///     w = pex(x_i * trunc) / pex(trunc)
///
/// Degenerate denominators (at most eq_tol in absolute value) yield 0.
inline double conditional_weight(const MomentVector& mv, Subset S, Subset U, int i, const Tolerance& tol = {}) {
    if (i < 0 || i >= mv.n()) throw std::invalid_argument("conditional_weight: item index out of range");
    if ((U & ~S) != 0) throw std::invalid_argument("conditional_weight: U must be a subset of S");
    const Polynomial trunc = truncated_indicator(mv, S, U);
    const double denom = pseudo_expect(mv, trunc);
    if (std::abs(denom) <= tol.eq_tol) return 0.0;
    const Polynomial xi = Polynomial::variable(mv.convention(), mv.n(), i);
    return pseudo_expect(mv, xi * trunc) / denom;
}

}  // namespace sosgap

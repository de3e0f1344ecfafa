#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>

#include "sosgap/local.hpp"
#include "sosgap/moments.hpp"

// Structural certificates for pseudo-distributions arising from cardinality-
// bounded selection problems.  Each check returns a report with the measured
// residuals; pass/fail verdicts always refer to the tolerances passed in.

namespace sosgap {

/// Result of scanning the moments gamma_S with k+1 <= |S| <= 2k+2 for a
/// pseudo-distribution that is supposed to select at most k items.  When
/// every feasible point selects at most k items, all these moments vanish
/// for vectors of degree bound at least 2k+2 that are conditioned on the
/// capacity constraint at sufficient depth.
struct VanishingMomentCheck {
    int k = 0;
    int size_lo = 0, size_hi = 0;  // scanned size range (empty when size_lo > size_hi)
    double max_abs = 0.0;
    Subset worst = 0;
    bool vacuous = false;
    bool pass = false;
};

inline VanishingMomentCheck check_vanishing_moments(const MomentVector& mv, int k, const Tolerance& tol = {}) {
    if (k < 0) throw std::invalid_argument("check_vanishing_moments: k must be nonnegative");
    if (mv.degree_bound() < 2 * k + 2)
        throw std::domain_error("check_vanishing_moments: degree bound below 2k+2");
    VanishingMomentCheck out;
    out.k = k;
    out.size_lo = k + 1;
    out.size_hi = std::min(2 * k + 2, mv.n());
    if (out.size_lo > out.size_hi) {
        out.vacuous = true;
        out.pass = true;
        return out;
    }
    for (Subset s : subsets_up_to(mv.n(), out.size_hi)) {
        if (subset_size(s) < out.size_lo) continue;
        const double v = std::abs(mv.moment(s));
        if (v > out.max_abs) {
            out.max_abs = v;
            out.worst = s;
        }
    }
    out.pass = out.max_abs <= tol.eq_tol;
    return out;
}

/// Result of extending a moment vector by zeros to full degree 2n and
/// checking that the extension is a genuine distribution: the full moment
/// matrix must be positive semidefinite and the extracted point masses
/// nonnegative (both up to eig_tol).
struct GlobalExtensionCheck {
    double min_eigenvalue = 0.0;
    double min_mass = 0.0;
    std::map<Subset, double> masses;
    bool pass = false;
};

/// Precondition: the vector must already have vanishing moments at k = t-1
/// (its top degrees), otherwise the zero extension is inconsistent and the
/// call is rejected.  Restricted to n <= 4.
inline GlobalExtensionCheck check_global_extension(const MomentVector& mv, const Tolerance& tol = {}) {
    if (mv.n() > 4) throw std::invalid_argument("check_global_extension: supported for n <= 4 only");
    const int k = mv.half_degree() - 1;
    if (k < 0) throw std::invalid_argument("check_global_extension: degree bound too small");
    if (!check_vanishing_moments(mv, k, tol).pass)
        throw std::invalid_argument("check_global_extension: vanishing-moment precondition not met");

    // Lift to degree 2n, keeping known moments and filling the rest with 0.
    std::map<Subset, double> lifted;
    for (Subset s : subsets_up_to(mv.n(), mv.n()))
        lifted[s] = subset_size(s) <= mv.degree_bound() ? mv.moment(s) : 0.0;
    const MomentVector full(mv.convention(), mv.n(), 2 * mv.n(), std::move(lifted));

    GlobalExtensionCheck out;
    out.min_eigenvalue = min_eigenvalue(moment_matrix(full).mat);
    out.masses = extract_full_distribution(full);
    out.min_mass = out.masses.empty() ? 0.0 : out.masses.begin()->second;
    for (const auto& [p, m] : out.masses) out.min_mass = std::min(out.min_mass, m);
    out.pass = out.min_eigenvalue >= -tol.eig_tol && out.min_mass >= -tol.eig_tol;
    return out;
}

enum class IdentityStatus { Pass, Fail, PremiseUnmet };

/// Report for the two identities obeyed by truncated indicators once the
/// high moments supported on S vanish:
///
///     pex(trunc * x_i) = pex(trunc^2 * x_i)     (weighted)
///     pex(trunc)       = pex(trunc^2)           (plain)
///
/// where trunc is the truncated indicator of "exactly U among S".  The
/// premise scanned here is that every moment of a monomial supported on S
/// with at least t factors (optionally joined with x_i) vanishes; without it
/// the residuals are reported but no verdict is claimed.
struct TruncatedIndicatorCheck {
    double premise_residual = 0.0;
    bool premise_ok = false;
    double residual_weighted = 0.0;
    double residual_plain = 0.0;
    IdentityStatus status = IdentityStatus::PremiseUnmet;
};

inline TruncatedIndicatorCheck check_truncated_indicator_identities(const MomentVector& mv, Subset S, Subset U,
                                                                    int i, const Tolerance& tol = {}) {
    if (i < 0 || i >= mv.n()) throw std::invalid_argument("check_truncated_indicator_identities: index out of range");
    if ((U & ~S) != 0) throw std::invalid_argument("check_truncated_indicator_identities: U must be a subset of S");
    const int t = mv.half_degree();
    TruncatedIndicatorCheck out;

    const Subset xi = Subset{1} << i;
    for (Subset m : submasks_of(S)) {
        if (subset_size(m) < t) continue;
        if (subset_size(m) <= mv.degree_bound())
            out.premise_residual = std::max(out.premise_residual, std::abs(mv.moment(m)));
        const Subset mi = mv.combine(m, xi);
        if (subset_size(mi) <= mv.degree_bound())
            out.premise_residual = std::max(out.premise_residual, std::abs(mv.moment(mi)));
    }
    out.premise_ok = out.premise_residual <= tol.eq_tol;

    const Polynomial trunc = truncated_indicator(mv, S, U);
    const Polynomial sq = trunc * trunc;
    const Polynomial var = Polynomial::variable(mv.convention(), mv.n(), i);
    out.residual_weighted = std::abs(pseudo_expect(mv, trunc * var) - pseudo_expect(mv, sq * var));
    out.residual_plain = std::abs(pseudo_expect(mv, trunc) - pseudo_expect(mv, sq));

    if (!out.premise_ok) {
        out.status = IdentityStatus::PremiseUnmet;
    } else if (out.residual_weighted <= tol.eq_tol && out.residual_plain <= tol.eq_tol) {
        out.status = IdentityStatus::Pass;
    } else {
        out.status = IdentityStatus::Fail;
    }
    return out;
}

}  // namespace sosgap

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "sosgap/linalg.hpp"
#include "sosgap/polynomial.hpp"

// Pseudo-distributions represented by their moment sequences.  A moment
// vector of degree bound 2t assigns a value gamma_S to every monomial subset
// S with |S| <= 2t; the linear functional it induces on polynomials of degree
// at most 2t is the pseudo-expectation.  Validity (the moment matrix being
// positive semidefinite) is a property checked here, not an invariant of the
// container: solvers and tests routinely hold not-yet-valid vectors.

namespace sosgap {

struct Tolerance {
    double eig_tol = 1e-7;  // slack allowed below zero for eigenvalue certificates
    double eq_tol = 1e-6;   // slack allowed for affine identities

    Tolerance() = default;
    Tolerance(double eig, double eq) : eig_tol(eig), eq_tol(eq) {
        if (!(eig > 0.0) || !(eq > 0.0)) throw std::invalid_argument("Tolerance: tolerances must be positive");
    }
};

class MomentVector {
  public:
    MomentVector(BasisConvention convention, int n, int degree_bound, std::map<Subset, double> values)
        : convention_(convention), n_(n), degree_bound_(degree_bound), gamma_(std::move(values)) {
        if (n < 0 || n > kMaxItems) throw std::invalid_argument("MomentVector: n out of range");
        if (degree_bound < 0 || degree_bound % 2 != 0)
            throw std::invalid_argument("MomentVector: degree bound must be even and nonnegative");
        const Subset limit = Subset{1} << n;
        for (auto it = gamma_.begin(); it != gamma_.end();) {
            if (it->first != 0 && it->first >= limit)
                throw std::invalid_argument("MomentVector: subset outside variable range");
            if (subset_size(it->first) > degree_bound_)
                throw std::invalid_argument("MomentVector: subset beyond degree bound");
            it = it->second == 0.0 ? gamma_.erase(it) : std::next(it);
        }
        // Normalization: the empty-set moment is pinned to exactly one.
        auto empty = gamma_.find(0);
        const double g0 = empty == gamma_.end() ? 0.0 : empty->second;
        if (std::abs(g0 - 1.0) > 1e-9)
            throw std::invalid_argument("MomentVector: empty-set moment must equal 1");
        gamma_[0] = 1.0;
    }

    BasisConvention convention() const { return convention_; }
    int n() const { return n_; }
    int degree_bound() const { return degree_bound_; }
    int half_degree() const { return degree_bound_ / 2; }

    /// Moment of the monomial subset s.  Subsets beyond the degree bound are
    /// an error, never a silent zero.
    double moment(Subset s) const {
        if (subset_size(s) > degree_bound_)
            throw std::domain_error("MomentVector: moment lookup beyond degree bound");
        auto it = gamma_.find(s);
        return it == gamma_.end() ? 0.0 : it->second;
    }

    const std::map<Subset, double>& entries() const { return gamma_; }

    /// Monomial product in the vector's basis: union for ZeroOne, symmetric
    /// difference for PlusMinus.
    Subset combine(Subset s, Subset t) const {
        return convention_ == BasisConvention::ZeroOne ? (s | t) : (s ^ t);
    }

  private:
    BasisConvention convention_;
    int n_;
    int degree_bound_;
    std::map<Subset, double> gamma_;
};

inline double pseudo_expect(const MomentVector& mv, const Polynomial& p) {
    if (p.convention() != mv.convention()) throw std::invalid_argument("pseudo_expect: basis convention mismatch");
    if (p.n() != mv.n()) throw std::invalid_argument("pseudo_expect: variable count mismatch");
    if (p.degree() > mv.degree_bound()) throw std::domain_error("pseudo_expect: polynomial degree exceeds bound");
    double acc = 0.0;
    for (const auto& [s, c] : p.terms()) acc += c * mv.moment(s);
    return acc;
}

/// A symmetric matrix together with the ordered subset basis labelling its
/// rows and columns.
struct MomentMatrix {
    std::vector<Subset> basis;
    Matrix mat;
};

/// Moment matrix of order t = degree_bound/2: rows and columns run over the
/// canonically ordered subsets of size at most t, and the (S,T) entry is the
/// moment of the combined monomial of X_S X_T.
inline MomentMatrix moment_matrix(const MomentVector& mv) {
    MomentMatrix out;
    out.basis = subsets_up_to(mv.n(), mv.half_degree());
    const int d = static_cast<int>(out.basis.size());
    out.mat.resize(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
            const double v = mv.moment(mv.combine(out.basis[r], out.basis[c]));
            out.mat(r, c) = v;
            out.mat(c, r) = v;
        }
    return out;
}

/// Localizing matrix of the constraint polynomial q: rows and columns run
/// over subsets of size at most t - ceil(deg(q)/2), and the (S,T) entry is
/// the pseudo-expectation of q * X_S * X_T.
inline MomentMatrix localizing_matrix(const MomentVector& mv, const Polynomial& q) {
    if (q.convention() != mv.convention()) throw std::invalid_argument("localizing_matrix: basis convention mismatch");
    if (q.n() != mv.n()) throw std::invalid_argument("localizing_matrix: variable count mismatch");
    const int dq = q.degree();
    const int cap = mv.half_degree() - (dq + 1) / 2;
    if (cap < 0) throw std::domain_error("localizing_matrix: constraint degree exceeds moment degree bound");
    MomentMatrix out;
    out.basis = subsets_up_to(mv.n(), cap);
    const int d = static_cast<int>(out.basis.size());
    out.mat.resize(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
            const Subset st = mv.combine(out.basis[r], out.basis[c]);
            double v = 0.0;
            for (const auto& [m, coeff] : q.terms()) v += coeff * mv.moment(mv.combine(st, m));
            out.mat(r, c) = v;
            out.mat(c, r) = v;
        }
    return out;
}

/// True iff the moment matrix is positive semidefinite up to eig_tol, i.e.
/// the vector is a valid pseudo-distribution at its degree bound.
inline bool is_valid_degree(const MomentVector& mv, const Tolerance& tol = {}) {
    return min_eigenvalue(moment_matrix(mv).mat) >= -tol.eig_tol;
}

/// True iff the pseudo-distribution satisfies the inequality q >= 0, meaning
/// the localizing matrix of q is positive semidefinite up to eig_tol.
inline bool satisfies_inequality(const MomentVector& mv, const Polynomial& q, const Tolerance& tol = {}) {
    return min_eigenvalue(localizing_matrix(mv, q).mat) >= -tol.eig_tol;
}

/// True iff the pseudo-distribution satisfies the equality q = 0: the
/// pseudo-expectation of q * X_S vanishes (up to eq_tol) for every subset S
/// with |S| + deg(q) within the degree bound.
inline bool satisfies_equality(const MomentVector& mv, const Polynomial& q, const Tolerance& tol = {}) {
    if (q.convention() != mv.convention()) throw std::invalid_argument("satisfies_equality: basis convention mismatch");
    if (q.n() != mv.n()) throw std::invalid_argument("satisfies_equality: variable count mismatch");
    const int dq = q.degree();
    if (dq > mv.degree_bound()) throw std::domain_error("satisfies_equality: constraint degree exceeds bound");
    for (Subset s : subsets_up_to(mv.n(), mv.degree_bound() - dq)) {
        double v = 0.0;
        for (const auto& [m, coeff] : q.terms()) v += coeff * mv.moment(mv.combine(s, m));
        if (std::abs(v) > tol.eq_tol) return false;
    }
    return true;
}

/// Cauchy-Schwarz slack sqrt(pex f^2) * sqrt(pex g^2) - pex(f g) for f and g
/// of degree at most t.  For a valid pseudo-distribution the slack is
/// nonnegative up to eigenvalue tolerance.  Squared pseudo-expectations that
/// come out slightly negative (within rounding of zero) are clamped before
/// the square root.
inline double cauchy_schwarz_slack(const MomentVector& mv, const Polynomial& f, const Polynomial& g) {
    const int t = mv.half_degree();
    if (f.degree() > t || g.degree() > t)
        throw std::domain_error("cauchy_schwarz_slack: factor degree exceeds half the moment degree bound");
    const double ff = std::max(0.0, pseudo_expect(mv, f * f));
    const double gg = std::max(0.0, pseudo_expect(mv, g * g));
    const double fg = pseudo_expect(mv, f * g);
    return std::sqrt(ff) * std::sqrt(gg) - fg;
}

}  // namespace sosgap

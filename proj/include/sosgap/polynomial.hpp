#pragma once

#include <cmath>
#include <map>
#include <stdexcept>

#include "sosgap/subsets.hpp"

// Multilinear polynomials over the Boolean hypercube.  A polynomial is a
// sparse map from monomials (subsets of variables) to real coefficients and
// is always kept in reduced canonical form:
//
//   ZeroOne   basis: variables take values in {0,1},  x_i^2 = x_i,
//             so monomial products combine by set union.
//   PlusMinus basis: variables take values in {-1,+1}, x_i^2 = 1,
//             so monomial products combine by symmetric difference.
//
// Coefficients that are exactly zero are never stored.

namespace sosgap {

enum class BasisConvention { ZeroOne, PlusMinus };

class Polynomial {
  public:
    Polynomial(BasisConvention convention, int n) : convention_(convention), n_(n) {
        if (n < 0 || n > kMaxItems) throw std::invalid_argument("Polynomial: n out of range");
    }

    static Polynomial constant(BasisConvention convention, int n, double c) {
        Polynomial p(convention, n);
        p.add_term(0, c);
        return p;
    }

    static Polynomial variable(BasisConvention convention, int n, int i) {
        return monomial(convention, n, Subset{1} << check_index(i, n));
    }

    static Polynomial monomial(BasisConvention convention, int n, Subset s, double coeff = 1.0) {
        Polynomial p(convention, n);
        if (s >= (Subset{1} << n)) throw std::invalid_argument("Polynomial: monomial outside variable range");
        p.add_term(s, coeff);
        return p;
    }

    BasisConvention convention() const { return convention_; }
    int n() const { return n_; }
    bool is_zero() const { return coeffs_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [s, c] : coeffs_) d = std::max(d, subset_size(s));
        return d;
    }

    double coefficient(Subset s) const {
        auto it = coeffs_.find(s);
        return it == coeffs_.end() ? 0.0 : it->second;
    }

    const std::map<Subset, double>& terms() const { return coeffs_; }

    void add_term(Subset s, double coeff) {
        if (coeff == 0.0) return;
        auto [it, inserted] = coeffs_.try_emplace(s, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0.0) coeffs_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        require_same_ring(rhs);
        for (const auto& [s, c] : rhs.coeffs_) add_term(s, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& rhs) {
        require_same_ring(rhs);
        for (const auto& [s, c] : rhs.coeffs_) add_term(s, -c);
        return *this;
    }

    Polynomial& operator*=(double scale) {
        if (scale == 0.0) {
            coeffs_.clear();
        } else {
            for (auto& [s, c] : coeffs_) c *= scale;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(Polynomial p, double scale) { return p *= scale; }
    friend Polynomial operator*(double scale, Polynomial p) { return p *= scale; }
    friend Polynomial operator-(Polynomial p) { return p *= -1.0; }

    /// Product with reduction to canonical multilinear form: union of
    /// monomials in the ZeroOne basis, symmetric difference in PlusMinus.
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
        lhs.require_same_ring(rhs);
        Polynomial out(lhs.convention_, lhs.n_);
        for (const auto& [s, cs] : lhs.coeffs_)
            for (const auto& [t, ct] : rhs.coeffs_) {
                const Subset st = lhs.convention_ == BasisConvention::ZeroOne ? (s | t) : (s ^ t);
                out.add_term(st, cs * ct);
            }
        return out;
    }

    friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) {
        return lhs.convention_ == rhs.convention_ && lhs.n_ == rhs.n_ && lhs.coeffs_ == rhs.coeffs_;
    }

  private:
    static int check_index(int i, int n) {
        if (i < 0 || i >= n) throw std::invalid_argument("Polynomial: variable index out of range");
        return i;
    }

    void require_same_ring(const Polynomial& rhs) const {
        if (convention_ != rhs.convention_) throw std::invalid_argument("Polynomial: basis convention mismatch");
        if (n_ != rhs.n_) throw std::invalid_argument("Polynomial: variable count mismatch");
    }

    BasisConvention convention_;
    int n_;
    std::map<Subset, double> coeffs_;
};

/// Keeps only the terms of degree strictly below cutoff.
inline Polynomial truncate(const Polynomial& p, int cutoff) {
    Polynomial out(p.convention(), p.n());
    for (const auto& [s, c] : p.terms())
        if (subset_size(s) < cutoff) out.add_term(s, c);
    return out;
}

/// Evaluates p at a hypercube point given as the set of coordinates equal to
/// 1 (ZeroOne) or +1 (PlusMinus).
inline double evaluate(const Polynomial& p, Subset point) {
    double acc = 0.0;
    for (const auto& [s, c] : p.terms()) {
        if (p.convention() == BasisConvention::ZeroOne) {
            if ((s & point) == s) acc += c;  // monomial is 1 iff s is all-ones at point
        } else {
            acc += (subset_size(s & ~point) % 2 == 0) ? c : -c;  // (-1)^{|s minus point|}
        }
    }
    return acc;
}

/// Indicator of a single hypercube point: evaluates to 1 at `point` and to 0
/// at every other point.  Coefficients are +/-1 in the ZeroOne basis and
/// +/-2^{-n} in PlusMinus, so the expansion is exact in floating point.
inline Polynomial indicator_point(BasisConvention convention, int n, Subset point) {
    Polynomial out(convention, n);
    if (n > 0 && point >= (Subset{1} << n)) throw std::invalid_argument("indicator_point: point outside cube");
    if (n == 0 && point != 0) throw std::invalid_argument("indicator_point: point outside cube");
    const Subset full = n == 0 ? 0 : ((Subset{1} << n) - 1);
    if (convention == BasisConvention::ZeroOne) {
        // prod_{i in point} x_i * prod_{j not in point} (1 - x_j)
        for (Subset t : submasks_of(full & ~point))
            out.add_term(point | t, subset_size(t) % 2 == 0 ? 1.0 : -1.0);
    } else {
        // prod_i (1 + y_i x_i) / 2 with y_i = +/-1 according to `point`
        const double scale = std::ldexp(1.0, -n);
        for (Subset s : submasks_of(full))
            out.add_term(s, subset_size(s & ~point) % 2 == 0 ? scale : -scale);
    }
    return out;
}

/// Indicator of the event "within the coordinate set S, exactly the
/// coordinates in U are high".  U must be a subset of S; variables outside S
/// are unconstrained.  With S the full set this reduces to indicator_point.
inline Polynomial indicator_on_subset(BasisConvention convention, int n, Subset S, Subset U) {
    if (n > 0 && S >= (Subset{1} << n)) throw std::invalid_argument("indicator_on_subset: S outside variable range");
    if ((U & ~S) != 0) throw std::invalid_argument("indicator_on_subset: U must be a subset of S");
    Polynomial out(convention, n);
    if (convention == BasisConvention::ZeroOne) {
        for (Subset t : submasks_of(S & ~U))
            out.add_term(U | t, subset_size(t) % 2 == 0 ? 1.0 : -1.0);
    } else {
        const double scale = std::ldexp(1.0, -subset_size(S));
        for (Subset s : submasks_of(S))
            out.add_term(s, subset_size(s & ~U) % 2 == 0 ? scale : -scale);
    }
    return out;
}

}  // namespace sosgap

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sosgap/linalg.hpp"
#include "sosgap/subsets.hpp"

// Semidefinite programs over moment variables, and a first-order solver.
//
// A problem holds a list of scalar variables (labelled by subset keys), a
// linear objective to MAXIMIZE, affine equality constraints, a family of
// symmetric blocks whose entries are affine in the variables and which must
// be positive semidefinite, and an optional box |x_i| <= bound on every
// variable.
//
// The solver is an over-relaxed ADMM (operator splitting): a consensus copy
// of each block (and of the boxed variable vector) is kept, the variable
// step solves an equality-constrained least-squares system through a cached
// KKT factorization, the consensus step projects each block onto the PSD
// cone spectrally and clamps the box copy, and scaled dual variables tie the
// two together.  The penalty parameter is rebalanced from the ratio of
// primal and dual residuals.  Convergence is declared on audit-grade
// quantities measured on the variable iterate itself: equality residual,
// most negative block eigenvalue, box violation, and the consensus and dual
// residuals.  Everything is deterministic for a fixed config.

namespace sosgap {

struct SolverConfig {
    double tol = 1e-7;       // absolute residual target
    int max_iters = 50000;
    double rho = 1.0;        // initial penalty parameter; adapted during the run
    double alpha = 1.6;      // over-relaxation factor, in (0, 2)
    std::uint64_t seed = 0;  // nonzero: jitter the initial iterate (deterministically)
};

enum class SolveStatus { Converged, IterationCap };

inline constexpr int kConstTerm = -1;

/// One additive contribution to a block entry: coeff * variable, or a
/// constant when var == kConstTerm.  Blocks must be given symmetrically.
struct SdpTerm {
    int row = 0, col = 0;
    int var = kConstTerm;
    double coeff = 0.0;
};

struct SdpBlock {
    std::string name;
    int dim = 0;
    std::vector<SdpTerm> terms;
};

struct SdpEquality {
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    double rhs = 0.0;
};

struct SdpProblem {
    std::vector<Subset> variable_keys;
    std::vector<std::pair<int, double>> objective;  // maximize sum coeff * x_var
    std::vector<SdpBlock> blocks;
    std::vector<SdpEquality> equalities;
    double box_bound = 0.0;  // > 0 enables |x_i| <= box_bound for all variables
};

struct SdpSolution {
    std::vector<double> values;  // aligned with variable_keys
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::IterationCap;
    int iterations = 0;
    double equality_residual = 0.0;
    double box_violation = 0.0;
    double min_block_eigenvalue = 0.0;  // most negative block eigenvalue, 0 when all are PSD
    double consistency_residual = 0.0;  // ADMM consensus residual at exit
    double dual_residual = 0.0;

    /// Worst primal infeasibility across equalities, box and consensus copies.
    double primal_residual() const {
        return std::max({equality_residual, box_violation, consistency_residual});
    }
};

/// Independent feasibility audit of a value assignment: rebuilds every block
/// from the problem data and reports the worst eigenvalue and residuals.
struct AuditReport {
    double min_block_eigenvalue = 0.0;
    double equality_residual = 0.0;
    double box_violation = 0.0;
    double objective = 0.0;
};

namespace detail {

/// Canonical affine form of one block: constant matrix plus per-cell
/// variable terms with duplicates merged and exact symmetry verified.
struct BlockForm {
    int dim = 0;
    Matrix constant;
    std::vector<SdpTerm> terms;  // every cell, merged, sorted by (row, col, var)
};

inline std::vector<BlockForm> canonical_blocks(const SdpProblem& p) {
    const int m = static_cast<int>(p.variable_keys.size());
    std::vector<BlockForm> out;
    out.reserve(p.blocks.size());
    for (const SdpBlock& blk : p.blocks) {
        if (blk.dim <= 0) throw std::invalid_argument("sdp: block '" + blk.name + "' has nonpositive dimension");
        BlockForm form;
        form.dim = blk.dim;
        form.constant = Matrix::Zero(blk.dim, blk.dim);
        std::map<std::tuple<int, int, int>, double> cells;
        for (const SdpTerm& term : blk.terms) {
            if (term.row < 0 || term.row >= blk.dim || term.col < 0 || term.col >= blk.dim)
                throw std::invalid_argument("sdp: entry outside block '" + blk.name + "'");
            if (term.var != kConstTerm && (term.var < 0 || term.var >= m))
                throw std::invalid_argument("sdp: entry in block '" + blk.name + "' references undeclared variable");
            cells[{term.row, term.col, term.var}] += term.coeff;
        }
        for (const auto& [key, coeff] : cells) {
            const auto [r, c, v] = key;
            if (r != c) {
                auto mirror = cells.find({c, r, v});
                if (mirror == cells.end() || mirror->second != coeff)
                    throw std::invalid_argument("sdp: block '" + blk.name + "' is not symmetric");
            }
            if (v == kConstTerm) {
                form.constant(r, c) += coeff;
            } else if (coeff != 0.0) {
                form.terms.push_back({r, c, v, coeff});
            }
        }
        out.push_back(std::move(form));
    }
    return out;
}

inline void validate_problem(const SdpProblem& p) {
    const int m = static_cast<int>(p.variable_keys.size());
    if (m == 0) throw std::invalid_argument("sdp: problem has no variables");
    std::map<Subset, int> seen;
    for (int i = 0; i < m; ++i)
        if (!seen.emplace(p.variable_keys[i], i).second)
            throw std::invalid_argument("sdp: duplicate variable key " + subset_name(p.variable_keys[i]));
    for (const auto& [var, coeff] : p.objective)
        if (var < 0 || var >= m) throw std::invalid_argument("sdp: objective references undeclared variable");
    for (const SdpEquality& eq : p.equalities)
        for (const auto& [var, coeff] : eq.coeffs)
            if (var < 0 || var >= m) throw std::invalid_argument("sdp: equality references undeclared variable");
    if (p.box_bound < 0.0) throw std::invalid_argument("sdp: negative box bound");
    canonical_blocks(p);  // validates block structure as a side effect
}

inline void apply_block(const BlockForm& form, const Vector& x, Matrix& out) {
    out = form.constant;
    for (const SdpTerm& term : form.terms) out(term.row, term.col) += term.coeff * x(term.var);
}

}  // namespace detail

/// Validates and returns a problem assembled from its parts.
inline SdpProblem assemble(std::vector<Subset> variable_keys, std::vector<std::pair<int, double>> objective,
                           std::vector<SdpBlock> blocks, std::vector<SdpEquality> equalities,
                           double box_bound = 0.0) {
    SdpProblem p;
    p.variable_keys = std::move(variable_keys);
    p.objective = std::move(objective);
    p.blocks = std::move(blocks);
    p.equalities = std::move(equalities);
    p.box_bound = box_bound;
    detail::validate_problem(p);
    return p;
}

inline AuditReport audit(const SdpProblem& p, const std::vector<double>& values) {
    detail::validate_problem(p);
    const int m = static_cast<int>(p.variable_keys.size());
    if (static_cast<int>(values.size()) != m) throw std::invalid_argument("audit: value count mismatch");
    Vector x = Eigen::Map<const Vector>(values.data(), m);

    AuditReport report;
    report.min_block_eigenvalue = std::numeric_limits<double>::infinity();
    Matrix buf;
    for (const detail::BlockForm& form : detail::canonical_blocks(p)) {
        detail::apply_block(form, x, buf);
        report.min_block_eigenvalue = std::min(report.min_block_eigenvalue, min_eigenvalue(buf));
    }
    if (p.blocks.empty()) report.min_block_eigenvalue = 0.0;
    for (const SdpEquality& eq : p.equalities) {
        double lhs = 0.0;
        for (const auto& [var, coeff] : eq.coeffs) lhs += coeff * x(var);
        report.equality_residual = std::max(report.equality_residual, std::abs(lhs - eq.rhs));
    }
    if (p.box_bound > 0.0)
        report.box_violation = std::max(0.0, x.cwiseAbs().maxCoeff() - p.box_bound);
    for (const auto& [var, coeff] : p.objective) report.objective += coeff * x(var);
    return report;
}

/// Frozen sparse text form, one line per entry:
///   <block> <row> <col> <variable_key> <coefficient>
///   <block> <row> <col> CONST <value>
/// preceded by variable, objective and equality declarations.
inline void dump_problem(const SdpProblem& p, std::ostream& os) {
    detail::validate_problem(p);
    const auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "sdp variables " << p.variable_keys.size() << " blocks " << p.blocks.size() << " equalities "
       << p.equalities.size() << " box " << fmt(p.box_bound) << "\n";
    for (std::size_t i = 0; i < p.variable_keys.size(); ++i)
        os << "var " << i << " " << subset_name(p.variable_keys[i]) << "\n";
    for (const auto& [var, coeff] : p.objective)
        os << "objective " << subset_name(p.variable_keys[var]) << " " << fmt(coeff) << "\n";
    for (std::size_t j = 0; j < p.equalities.size(); ++j) {
        os << "equality " << j << " " << fmt(p.equalities[j].rhs);
        for (const auto& [var, coeff] : p.equalities[j].coeffs)
            os << " " << subset_name(p.variable_keys[var]) << " " << fmt(coeff);
        os << "\n";
    }
    const auto forms = detail::canonical_blocks(p);
    for (std::size_t j = 0; j < forms.size(); ++j) {
        for (int r = 0; r < forms[j].dim; ++r)
            for (int c = 0; c < forms[j].dim; ++c)
                if (forms[j].constant(r, c) != 0.0)
                    os << j << " " << r << " " << c << " CONST " << fmt(forms[j].constant(r, c)) << "\n";
        for (const SdpTerm& term : forms[j].terms)
            os << j << " " << term.row << " " << term.col << " " << subset_name(p.variable_keys[term.var]) << " "
               << fmt(term.coeff) << "\n";
    }
}

inline SdpSolution solve(const SdpProblem& p, const SolverConfig& cfg = {}) {
    detail::validate_problem(p);
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("solve: tolerance must be positive");
    if (cfg.max_iters < 1) throw std::invalid_argument("solve: max_iters must be at least 1");
    if (!(cfg.rho > 0.0)) throw std::invalid_argument("solve: penalty parameter must be positive");

    const int m = static_cast<int>(p.variable_keys.size());
    const int e = static_cast<int>(p.equalities.size());
    const bool boxed = p.box_bound > 0.0;
    const auto forms = detail::canonical_blocks(p);
    const int nblocks = static_cast<int>(forms.size());

    Vector c_obj = Vector::Zero(m);
    for (const auto& [var, coeff] : p.objective) c_obj(var) += coeff;
    double obj_scale = 1.0 + c_obj.cwiseAbs().maxCoeff();

    Matrix A = Matrix::Zero(e, m);
    Vector b = Vector::Zero(e);
    for (int j = 0; j < e; ++j) {
        for (const auto& [var, coeff] : p.equalities[j].coeffs) A(j, var) += coeff;
        b(j) = p.equalities[j].rhs;
    }

    // Gram matrix of the stacked affine operator (blocks plus optional box).
    Matrix H = Matrix::Zero(m, m);
    for (const detail::BlockForm& form : forms) {
        std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> cells;
        for (const SdpTerm& term : form.terms) cells[{term.row, term.col}].push_back({term.var, term.coeff});
        for (const auto& [cell, vars] : cells)
            for (const auto& [v1, c1] : vars)
                for (const auto& [v2, c2] : vars) H(v1, v2) += c1 * c2;
    }
    if (boxed) H += Matrix::Identity(m, m);

    // Variables touched by no block, box or equality get a unit proximal
    // entry pinning them to zero; with a nonzero objective coefficient such a
    // variable would make the problem unbounded.
    for (int i = 0; i < m; ++i) {
        if (H(i, i) != 0.0) continue;
        if (A.rows() > 0 && A.col(i).cwiseAbs().maxCoeff() != 0.0) continue;
        if (c_obj(i) != 0.0) throw std::invalid_argument("solve: unconstrained variable with nonzero objective");
        H(i, i) = 1.0;
    }

    // Rank-deficient equality rows (duplicated or contradictory constraints)
    // make the KKT system singular yet can stay consistent for particular
    // right-hand sides, so an LU probe alone cannot be trusted to notice.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    if (e > 0) {
        cod.compute(A);
        if (cod.rank() < e)
            throw std::invalid_argument("solve: redundant or inconsistent equality constraints");
    }

    double rho = cfg.rho;
    const double alpha = cfg.alpha;
    const int kkt_dim = m + e;
    Matrix kkt = Matrix::Zero(kkt_dim, kkt_dim);
    Eigen::PartialPivLU<Matrix> lu;
    const auto refactor = [&] {
        kkt.topLeftCorner(m, m) = rho * H;
        kkt.topRightCorner(m, e) = A.transpose();
        kkt.bottomLeftCorner(e, m) = A;
        kkt.bottomRightCorner(e, e).setZero();
        lu.compute(kkt);
        Vector probe = Vector::Ones(kkt_dim);
        const double residual = (kkt * lu.solve(probe) - probe).cwiseAbs().maxCoeff();
        if (!(residual <= 1e-6 * kkt_dim))  // negated so NaN from a singular factor also trips
            throw std::invalid_argument("solve: singular KKT system (degenerate problem)");
    };
    refactor();

    // Initial iterate: minimum-norm solution of the equalities (for moment
    // problems this is the point mass at the origin), optionally jittered.
    Vector gamma = Vector::Zero(m);
    if (e > 0) gamma = cod.solve(b);
    if (cfg.seed != 0) {
        std::mt19937_64 rng(cfg.seed);
        const auto unit = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
        for (int i = 0; i < m; ++i) gamma(i) += 0.01 * (unit() - 0.5);
        if (e > 0) gamma -= cod.solve(A * gamma - b);  // restore feasibility
    }

    std::vector<Matrix> Z(nblocks), U(nblocks), V(nblocks), scratch(nblocks);
    for (int j = 0; j < nblocks; ++j) {
        detail::apply_block(forms[j], gamma, V[j]);
        Z[j] = project_psd(V[j]);
        U[j] = Matrix::Zero(forms[j].dim, forms[j].dim);
    }
    Vector zbox, ubox, vbox;
    if (boxed) {
        zbox = gamma.cwiseMax(-p.box_bound).cwiseMin(p.box_bound);
        ubox = Vector::Zero(m);
        vbox = gamma;
    }

    const auto omega_t = [&](const std::vector<Matrix>& W, const Vector* wbox) {
        Vector out = Vector::Zero(m);
        for (int j = 0; j < nblocks; ++j)
            for (const SdpTerm& term : forms[j].terms) out(term.var) += term.coeff * W[j](term.row, term.col);
        if (boxed && wbox != nullptr) out += *wbox;
        return out;
    };

    SdpSolution sol;
    sol.values.assign(m, 0.0);
    std::vector<Matrix> diff(nblocks);
    Vector diff_box;
    const int check_every = 25;
    int iter = 0;
    bool converged = false;

    const auto measure = [&](SdpSolution& out) {
        out.equality_residual = e > 0 ? (A * gamma - b).cwiseAbs().maxCoeff() : 0.0;
        out.box_violation = boxed ? std::max(0.0, gamma.cwiseAbs().maxCoeff() - p.box_bound) : 0.0;
        out.min_block_eigenvalue = 0.0;
        double consistency = 0.0;
        for (int j = 0; j < nblocks; ++j) {
            detail::apply_block(forms[j], gamma, scratch[j]);
            out.min_block_eigenvalue = std::min(out.min_block_eigenvalue, min_eigenvalue(scratch[j]));
            consistency = std::max(consistency, (scratch[j] - Z[j]).cwiseAbs().maxCoeff());
        }
        if (boxed) consistency = std::max(consistency, (gamma - zbox).cwiseAbs().maxCoeff());
        out.consistency_residual = consistency;
    };

    while (iter < cfg.max_iters) {
        ++iter;

        // Variable step: equality-constrained least squares with objective ascent.
        Vector rhs(kkt_dim);
        {
            std::vector<Matrix>& target = scratch;
            for (int j = 0; j < nblocks; ++j) target[j] = Z[j] - U[j] - forms[j].constant;
            Vector top = c_obj;
            if (boxed) {
                vbox = zbox - ubox;
                top += rho * omega_t(target, &vbox);
            } else {
                top += rho * omega_t(target, nullptr);
            }
            rhs.head(m) = top;
            rhs.tail(e) = b;
        }
        Vector sol_vec = lu.solve(rhs);
        gamma = sol_vec.head(m);

        // Consensus step: over-relaxed PSD projection per block, clamp for the box.
        for (int j = 0; j < nblocks; ++j) {
            detail::apply_block(forms[j], gamma, V[j]);
            diff[j] = Z[j];  // previous consensus copy
            scratch[j] = alpha * V[j] + (1.0 - alpha) * Z[j] + U[j];
            Z[j] = project_psd(scratch[j]);
            U[j] = scratch[j] - Z[j];
            diff[j] = Z[j] - diff[j];
        }
        if (boxed) {
            diff_box = zbox;
            vbox = alpha * gamma + (1.0 - alpha) * zbox + ubox;
            zbox = vbox.cwiseMax(-p.box_bound).cwiseMin(p.box_bound);
            ubox = vbox - zbox;
            diff_box = zbox - diff_box;
        }

        if (iter == 1 || iter % check_every == 0 || iter == cfg.max_iters) {
            measure(sol);
            const Vector dual_vec = boxed ? omega_t(diff, &diff_box) : omega_t(diff, nullptr);
            sol.dual_residual = rho * dual_vec.cwiseAbs().maxCoeff();
            const double primal = std::max({sol.equality_residual, sol.box_violation,
                                            std::max(0.0, -sol.min_block_eigenvalue)});
            if (primal <= cfg.tol && sol.consistency_residual <= 10.0 * cfg.tol &&
                sol.dual_residual <= 10.0 * cfg.tol * obj_scale) {
                converged = true;
                break;
            }
            // Penalty rebalancing keeps the two residuals comparable.
            if (sol.consistency_residual > 10.0 * sol.dual_residual / obj_scale && rho < 1e6) {
                rho *= 2.0;
                for (Matrix& u : U) u *= 0.5;
                if (boxed) ubox *= 0.5;
                refactor();
            } else if (sol.dual_residual / obj_scale > 10.0 * sol.consistency_residual && rho > 1e-4) {
                rho *= 0.5;
                for (Matrix& u : U) u *= 2.0;
                if (boxed) ubox *= 2.0;
                refactor();
            }
        }
    }

    measure(sol);
    sol.status = converged ? SolveStatus::Converged : SolveStatus::IterationCap;
    sol.iterations = iter;
    Eigen::Map<Vector>(sol.values.data(), m) = gamma;
    sol.objective_value = c_obj.dot(gamma);
    return sol;
}

}  // namespace sosgap

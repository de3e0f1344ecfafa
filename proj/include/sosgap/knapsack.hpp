#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sosgap/moments.hpp"
#include "sosgap/sdp.hpp"
#include "sosgap/subsets.hpp"

// Knapsack instances, exact and fractional oracles, and the compiler from an
// instance plus a degree parameter t to the moment-relaxation SDP: maximize
// the pseudo-expectation of the value subject to the moment matrix and the
// capacity localizing matrix being PSD.

namespace sosgap {

struct KnapsackInstance {
    double capacity = 0.0;                // budget C
    std::vector<double> values;           // v_i >= 0
    std::vector<double> item_capacities;  // c_i >= 0

    int size() const { return static_cast<int>(values.size()); }
};

inline void validate(const KnapsackInstance& inst) {
    if (inst.values.size() != inst.item_capacities.size())
        throw std::invalid_argument("knapsack: value/capacity length mismatch");
    if (inst.size() > kMaxItems) throw std::invalid_argument("knapsack: more than 30 items");
    if (!std::isfinite(inst.capacity) || inst.capacity < 0.0)
        throw std::invalid_argument("knapsack: budget must be finite and non-negative");
    for (int i = 0; i < inst.size(); ++i) {
        if (!std::isfinite(inst.values[i]) || inst.values[i] < 0.0)
            throw std::invalid_argument("knapsack: values must be finite and non-negative");
        if (!std::isfinite(inst.item_capacities[i]) || inst.item_capacities[i] < 0.0)
            throw std::invalid_argument("knapsack: item capacities must be finite and non-negative");
    }
}

/// Stable 64-bit digest of the exact instance data (FNV-1a over a canonical
/// decimal rendering), used to key report files.
inline std::string instance_digest(const KnapsackInstance& inst) {
    validate(inst);
    std::string canon = "knapsack";
    char buf[64];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        canon += buf;
        canon += ';';
    };
    put(static_cast<double>(inst.size()));
    put(inst.capacity);
    for (int i = 0; i < inst.size(); ++i) {
        put(inst.values[i]);
        put(inst.item_capacities[i]);
    }
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

// Positive-value items that can individually fit, sorted by value density.
struct PackedItems {
    double base = 0.0;  // value of items with zero capacity, always taken
    std::vector<double> v, c;
};

inline PackedItems pack_items(const KnapsackInstance& inst) {
    PackedItems out;
    std::vector<int> order;
    for (int i = 0; i < inst.size(); ++i) {
        if (inst.item_capacities[i] == 0.0) {
            out.base += inst.values[i];
        } else if (inst.values[i] > 0.0 && inst.item_capacities[i] <= inst.capacity) {
            order.push_back(i);
        }
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double da = inst.values[a] / inst.item_capacities[a];
        const double db = inst.values[b] / inst.item_capacities[b];
        if (da != db) return da > db;
        return a < b;
    });
    for (int i : order) {
        out.v.push_back(inst.values[i]);
        out.c.push_back(inst.item_capacities[i]);
    }
    return out;
}

}  // namespace detail

/// Exact 0/1 optimum.  Branch-and-bound with a fractional upper bound for
/// n <= 24; larger instances fall back to a value-indexed dynamic program and
/// therefore require integer values.
inline double opt_exact(const KnapsackInstance& inst) {
    validate(inst);
    if (inst.size() == 0) return 0.0;
    const detail::PackedItems items = detail::pack_items(inst);
    const int m = static_cast<int>(items.v.size());

    if (inst.size() <= 24) {
        double best = 0.0;
        // Pruning uses a small safety margin so float rounding in the bound
        // can never discard the true optimum.
        std::function<void(int, double, double)> dfs = [&](int idx, double rem, double cur) {
            best = std::max(best, cur);
            if (idx == m) return;
            double bound = cur, r = rem;
            for (int j = idx; j < m; ++j) {
                if (items.c[j] <= r) {
                    bound += items.v[j];
                    r -= items.c[j];
                } else {
                    bound += items.v[j] * (r / items.c[j]);
                    break;
                }
            }
            if (bound <= best - 1e-9 * (1.0 + std::abs(best))) return;
            if (items.c[idx] <= rem) dfs(idx + 1, rem - items.c[idx], cur + items.v[idx]);
            dfs(idx + 1, rem, cur);
        };
        dfs(0, inst.capacity, 0.0);
        return items.base + best;
    }

    long long total = 0;
    for (int j = 0; j < m; ++j) {
        if (items.v[j] != std::floor(items.v[j]))
            throw std::invalid_argument("opt_exact: instances beyond 24 items need integer values");
        total += static_cast<long long>(items.v[j]);
    }
    if (total > 20'000'000) throw std::invalid_argument("opt_exact: value range too large for the dynamic program");
    // dp[val] = least capacity achieving combined value exactly val.
    std::vector<double> dp(static_cast<std::size_t>(total) + 1, std::numeric_limits<double>::infinity());
    dp[0] = 0.0;
    for (int j = 0; j < m; ++j) {
        const auto vj = static_cast<long long>(items.v[j]);
        for (long long val = total; val >= vj; --val)
            dp[val] = std::min(dp[val], dp[val - vj] + items.c[j]);
    }
    for (long long val = total; val >= 0; --val)
        if (dp[val] <= inst.capacity) return items.base + static_cast<double>(val);
    return items.base;
}

/// Optimum of the fractional relaxation max sum v_i x_i subject to
/// sum c_i x_i <= budget and 0 <= x_i <= cap_i, by density greedy with a
/// single fractional item (exact for this LP).  Zero-capacity items are taken
/// to their caps first.
inline double lp_value(const KnapsackInstance& inst, const std::vector<double>& upper_bounds = {},
                       std::optional<double> budget_override = std::nullopt) {
    validate(inst);
    const int n = inst.size();
    if (!upper_bounds.empty() && static_cast<int>(upper_bounds.size()) != n)
        throw std::invalid_argument("lp_value: cap list length mismatch");
    for (double u : upper_bounds)
        if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("lp_value: caps must lie in [0,1]");
    const double budget = budget_override.value_or(inst.capacity);
    if (!std::isfinite(budget) || budget < 0.0)
        throw std::invalid_argument("lp_value: budget must be finite and non-negative");

    const auto cap_of = [&](int i) { return upper_bounds.empty() ? 1.0 : upper_bounds[i]; };
    double value = 0.0;
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        if (inst.item_capacities[i] == 0.0)
            value += cap_of(i) * inst.values[i];
        else if (inst.values[i] > 0.0 && cap_of(i) > 0.0)
            order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double da = inst.values[a] / inst.item_capacities[a];
        const double db = inst.values[b] / inst.item_capacities[b];
        if (da != db) return da > db;
        return a < b;
    });
    double rem = budget;
    for (int i : order) {
        const double want = cap_of(i) * inst.item_capacities[i];
        if (want <= rem) {
            value += cap_of(i) * inst.values[i];
            rem -= want;
        } else {
            value += inst.values[i] * (rem / inst.item_capacities[i]);
            break;
        }
    }
    return value;
}

/// Largest number of items any budget-feasible selection can contain
/// (smallest capacities first).  This is the tightest k for which the budget
/// constraint implies "at most k items chosen".
inline int max_feasible_cardinality(const KnapsackInstance& inst) {
    validate(inst);
    std::vector<double> caps = inst.item_capacities;
    std::sort(caps.begin(), caps.end());
    int k = 0;
    double used = 0.0;
    for (double ci : caps) {
        if (used + ci > inst.capacity) break;
        used += ci;
        ++k;
    }
    return k;
}

struct SosOptions {
    // Pin x_i = 0 for items that individually exceed the budget.  Off by
    // default: oversized items stay in the model.
    bool drop_oversized_items = false;
    double box_bound = 1.0;  // |gamma_S| <= bound safeguard (valid for 0/1 moments); 0 disables
};

/// Compiles the degree-2t moment relaxation: variables gamma_S for all
/// |S| <= 2t in canonical order, the moment block over |S| <= t, one
/// localizing block for C - sum c_i x_i over |S| <= t-1, the normalization
/// gamma_empty = 1, and objective sum v_i gamma_{i}.
inline SdpProblem build_sos(const KnapsackInstance& inst, int t, const SosOptions& opts = {}) {
    validate(inst);
    if (t < 1) throw std::invalid_argument("build_sos: degree parameter must be at least 1");
    const int n = inst.size();
    const std::vector<Subset> vars = subsets_up_to(n, std::min(2 * t, n));
    const std::vector<Subset> basis = subsets_up_to(n, std::min(t, n));
    const std::vector<Subset> loc_basis = subsets_up_to(n, std::min(t - 1, n));
    if (basis.size() > 1024) throw std::invalid_argument("build_sos: moment block exceeds the desk-scale size cap");

    std::unordered_map<Subset, int> index;
    index.reserve(vars.size());
    for (int i = 0; i < static_cast<int>(vars.size()); ++i) index.emplace(vars[i], i);
    const auto var_of = [&](Subset s) { return index.at(s); };

    SdpBlock moment{"moment", static_cast<int>(basis.size()), {}};
    for (int r = 0; r < moment.dim; ++r)
        for (int c = r; c < moment.dim; ++c) {
            const int var = var_of(basis[r] | basis[c]);
            moment.terms.push_back({r, c, var, 1.0});
            if (r != c) moment.terms.push_back({c, r, var, 1.0});
        }

    SdpBlock localizing{"capacity", static_cast<int>(loc_basis.size()), {}};
    for (int r = 0; r < localizing.dim; ++r)
        for (int c = r; c < localizing.dim; ++c) {
            const Subset u = loc_basis[r] | loc_basis[c];
            std::map<int, double> entry;  // merged affine entry: pex((C - sum c_i x_i) X_u)
            entry[var_of(u)] += inst.capacity;
            for (int i = 0; i < n; ++i) entry[var_of(u | (Subset{1} << i))] -= inst.item_capacities[i];
            for (const auto& [var, coeff] : entry) {
                if (coeff == 0.0) continue;
                localizing.terms.push_back({r, c, var, coeff});
                if (r != c) localizing.terms.push_back({c, r, var, coeff});
            }
        }

    std::vector<SdpEquality> equalities;
    equalities.push_back({{{var_of(Subset{0}), 1.0}}, 1.0});
    if (opts.drop_oversized_items) {
        for (int i = 0; i < n; ++i) {
            if (inst.item_capacities[i] <= inst.capacity) continue;
            for (int j = 0; j < static_cast<int>(vars.size()); ++j)
                if (subset_contains(vars[j], i)) equalities.push_back({{{j, 1.0}}, 0.0});
        }
    }

    std::vector<std::pair<int, double>> objective;
    for (int i = 0; i < n; ++i)
        if (inst.values[i] != 0.0) objective.push_back({var_of(Subset{1} << i), inst.values[i]});

    return assemble(vars, std::move(objective), {std::move(moment), std::move(localizing)},
                    std::move(equalities), opts.box_bound);
}

struct SosRun {
    double value = 0.0;
    MomentVector moments;
    SdpSolution solution;
};

/// Packages a solved relaxation as a pseudo-expectation plus the raw solver
/// output.  `problem` must be the one the solution came from.
inline SosRun make_sos_run(const KnapsackInstance& inst, int t, const SdpProblem& problem,
                           SdpSolution sol) {
    std::map<Subset, double> gamma;
    for (std::size_t i = 0; i < problem.variable_keys.size(); ++i)
        gamma[problem.variable_keys[i]] = sol.values[i];
    MomentVector mv(BasisConvention::ZeroOne, inst.size(), 2 * t, std::move(gamma));
    return SosRun{sol.objective_value, std::move(mv), std::move(sol)};
}

/// Builds and solves the degree-2t relaxation, returning the objective and
/// the solved moments packaged as a pseudo-expectation.
inline SosRun sos_value(const KnapsackInstance& inst, int t, const SolverConfig& cfg = {},
                        const SosOptions& opts = {}) {
    const SdpProblem problem = build_sos(inst, t, opts);
    return make_sos_run(inst, t, problem, solve(problem, cfg));
}

/// Items whose value reaches opt/(t-1); boundary ties are included.
inline Subset high_value_set(const KnapsackInstance& inst, double opt, int t) {
    validate(inst);
    if (t < 2) throw std::invalid_argument("high_value_set: threshold needs t >= 2");
    if (!(opt > 0.0)) throw std::invalid_argument("high_value_set: needs a positive optimum");
    const double threshold = opt / (t - 1);
    Subset s = 0;
    for (int i = 0; i < inst.size(); ++i)
        if (inst.values[i] >= threshold) s |= Subset{1} << i;
    return s;
}

}  // namespace sosgap

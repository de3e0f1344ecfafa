#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

// Subsets of an index ground set {0, ..., n-1} encoded as bitmasks.
// Bit i set means index i is a member.  All basis enumeration in the library
// uses the canonical order defined here: subsets sorted by size first, and by
// ascending bit pattern within each size.  Serialized matrices depend on this
// order, so it must not change.

namespace sosgap {

using Subset = std::uint32_t;

inline constexpr int kMaxItems = 30;

inline int subset_size(Subset s) { return std::popcount(s); }

inline bool subset_contains(Subset s, int i) { return (s >> i) & 1u; }

inline Subset subset_of(std::initializer_list<int> indices) {
    Subset s = 0;
    for (int i : indices) {
        if (i < 0 || i >= kMaxItems) throw std::invalid_argument("subset_of: index out of range");
        s |= (Subset{1} << i);
    }
    return s;
}

inline std::vector<int> subset_indices(Subset s) {
    std::vector<int> out;
    for (int i = 0; s >> i; ++i)
        if ((s >> i) & 1u) out.push_back(i);
    return out;
}

/// Human-readable set notation with 1-based indices, e.g. "{1,3}".
inline std::string subset_name(Subset s) {
    std::string out = "{";
    bool first = true;
    for (int i : subset_indices(s)) {
        if (!first) out += ',';
        out += std::to_string(i + 1);
        first = false;
    }
    return out + "}";
}

/// True if a precedes b in canonical order (size ascending, then bit pattern
/// ascending).
inline bool subset_less(Subset a, Subset b) {
    const int sa = subset_size(a), sb = subset_size(b);
    return sa != sb ? sa < sb : a < b;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

/// All subsets of {0,...,n-1} with at most max_size elements, in canonical
/// order.  Enumerates combinations size by size (Gosper's hack), so the cost
/// is proportional to the output, not to 2^n.
inline std::vector<Subset> subsets_up_to(int n, int max_size) {
    if (n < 0 || n > kMaxItems) throw std::invalid_argument("subsets_up_to: n out of range");
    if (max_size > n) max_size = n;
    std::vector<Subset> out;
    out.push_back(0);
    for (int k = 1; k <= max_size; ++k) {
        Subset s = (Subset{1} << k) - 1;           // smallest k-subset
        const Subset limit = Subset{1} << n;
        while (s < limit) {
            out.push_back(s);
            const Subset low = s & (~s + 1);       // lowest set bit
            const Subset ripple = s + low;
            s = ripple | (((s ^ ripple) >> 2) / low);
            if (ripple >= limit) break;
        }
    }
    return out;
}

/// All submasks of s (including 0 and s itself) in ascending numeric order.
inline std::vector<Subset> submasks_of(Subset s) {
    std::vector<Subset> out;
    Subset u = 0;
    do {
        out.push_back(u);
        u = (u - s) & s;
    } while (u != 0);
    return out;
}

}  // namespace sosgap

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "sosgap/knapsack.hpp"

// Seeded desk-scale instance families.  The same spec always produces the
// same instance, bit for bit; the draw order per family is frozen.
//
//   Uniform:      v_i and c_i i.i.d. uniform in [value_min, value_max],
//                 budget = budget_fraction * total capacity.
//   UnitCapacity: c_i = 1, budget = k + 1/2 (so any feasible selection has at
//                 most k items), values uniform in the range.
//   Correlated:   c_i uniform in the range, v_i = c_i + noise * u with
//                 u uniform in [-1, 1] (clamped to stay non-negative),
//                 budget = budget_fraction * total capacity.

namespace sosgap {

enum class Family { Uniform, UnitCapacity, Correlated };

struct GeneratorSpec {
    Family family = Family::Uniform;
    int n = 6;
    std::uint64_t seed = 1;
    double value_min = 1.0;
    double value_max = 10.0;
    double budget_fraction = 0.4;  // Uniform / Correlated
    int k = 1;                     // UnitCapacity
    double noise = 1.0;            // Correlated
};

inline KnapsackInstance generate(const GeneratorSpec& spec) {
    if (spec.n < 0 || spec.n > kMaxItems) throw std::invalid_argument("generate: n out of range");
    if (!(spec.value_min >= 0.0) || !(spec.value_max >= spec.value_min))
        throw std::invalid_argument("generate: bad value range");
    if (!(spec.budget_fraction >= 0.0)) throw std::invalid_argument("generate: negative budget fraction");
    if (spec.k < 0) throw std::invalid_argument("generate: negative k");
    if (!(spec.noise >= 0.0)) throw std::invalid_argument("generate: negative noise");

    // Decorrelate the stream across families and sizes sharing a seed.
    std::uint64_t mixed = spec.seed;
    mixed ^= 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(spec.family) + 1);
    mixed ^= 0xBF58476D1CE4E5B9ULL * (static_cast<std::uint64_t>(spec.n) + 1);
    std::mt19937_64 rng(mixed);
    const auto unit = [&rng] { return (rng() >> 11) * 0x1.0p-53; };  // uniform in [0, 1)
    const auto in_range = [&] { return spec.value_min + (spec.value_max - spec.value_min) * unit(); };

    KnapsackInstance inst;
    switch (spec.family) {
        case Family::Uniform:
            for (int i = 0; i < spec.n; ++i) {
                inst.values.push_back(in_range());
                inst.item_capacities.push_back(in_range());
            }
            break;
        case Family::UnitCapacity:
            for (int i = 0; i < spec.n; ++i) {
                inst.values.push_back(in_range());
                inst.item_capacities.push_back(1.0);
            }
            inst.capacity = spec.k + 0.5;
            break;
        case Family::Correlated:
            for (int i = 0; i < spec.n; ++i) {
                const double c = in_range();
                const double u = 2.0 * unit() - 1.0;
                inst.item_capacities.push_back(c);
                inst.values.push_back(std::max(0.0, c + spec.noise * u));
            }
            break;
    }
    if (spec.family != Family::UnitCapacity) {
        double total = 0.0;
        for (double c : inst.item_capacities) total += c;
        inst.capacity = spec.budget_fraction * total;
    }
    validate(inst);
    return inst;
}

}  // namespace sosgap

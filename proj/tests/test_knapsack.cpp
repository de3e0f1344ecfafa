// Knapsack oracles (exact optimum, fractional relaxation) and the compiler
// from instances to moment-relaxation SDPs.  Exact values are cross-checked
// against full enumeration and an independent duality certificate.
#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "sosgap/knapsack.hpp"
#include "support/oracles.hpp"

using namespace sosgap;

namespace {

KnapsackInstance random_instance(std::mt19937_64& rng, int n) {
    KnapsackInstance inst;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        inst.values.push_back(10.0 * oracle::uniform_unit(rng));
        inst.item_capacities.push_back(0.1 + 4.9 * oracle::uniform_unit(rng));
        total += inst.item_capacities.back();
    }
    inst.capacity = 1.2 * total * oracle::uniform_unit(rng);
    return inst;
}

}  // namespace

TEST_CASE("exact optimum on pinned instances") {
    REQUIRE(opt_exact({5.0, {6.0, 10.0, 12.0}, {1.0, 2.0, 3.0}}) == 22.0);
    REQUIRE(opt_exact({0.0, {}, {}}) == 0.0);
    // Zero-capacity items are free value; oversized items never fit.
    REQUIRE(opt_exact({1.0, {5.0, 3.0}, {0.0, 2.0}}) == 5.0);
    REQUIRE(opt_exact({5.0, {7.0}, {9.0}}) == 0.0);
}

TEST_CASE("exact optimum agrees with full enumeration") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const KnapsackInstance inst = random_instance(rng, n);
        const double expected = oracle::brute_opt(inst);
        REQUIRE(opt_exact(inst) == Catch::Approx(expected).margin(1e-9 * (1.0 + expected)));
    }
}

TEST_CASE("exact optimum switches to the dynamic program past 24 items") {
    KnapsackInstance inst;
    inst.capacity = 10.0;
    inst.values.assign(25, 1.0);
    inst.item_capacities.assign(25, 1.0);
    REQUIRE(opt_exact(inst) == 10.0);

    inst.values[3] = 1.5;  // the dynamic program indexes by integer value
    REQUIRE_THROWS_AS(opt_exact(inst), std::invalid_argument);
}

TEST_CASE("fractional relaxation on pinned instances") {
    const KnapsackInstance inst{5.0, {6.0, 4.0}, {3.0, 4.0}};
    REQUIRE(lp_value(inst) == Catch::Approx(8.0).margin(1e-12));
    // Caps shrink the available fraction of each item.
    REQUIRE(lp_value(inst, {0.5, 1.0}) == Catch::Approx(6.5).margin(1e-12));
    // A budget override replaces the instance budget.
    REQUIRE(lp_value(inst, {}, 3.0) == Catch::Approx(6.0).margin(1e-12));

    REQUIRE_THROWS_AS(lp_value(inst, {0.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(lp_value(inst, {0.5, 1.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(lp_value(inst, {}, -1.0), std::invalid_argument);
}

TEST_CASE("fractional relaxation matches its duality certificate") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const KnapsackInstance inst = random_instance(rng, n);

        std::vector<double> caps;
        std::optional<double> budget;
        if (trial % 3 == 1) {
            for (int i = 0; i < n; ++i) caps.push_back(oracle::uniform_unit(rng));
        } else if (trial % 3 == 2) {
            budget = 0.5 * inst.capacity;
        }
        const double primal = lp_value(inst, caps, budget);
        const double dual = oracle::lp_dual_value(inst, caps, budget);
        REQUIRE(primal == Catch::Approx(dual).margin(1e-9 * (1.0 + std::abs(primal))));
        if (caps.empty() && !budget.has_value())
            REQUIRE(opt_exact(inst) <= primal + 1e-9 * (1.0 + primal));
    }
}

TEST_CASE("maximum feasible cardinality") {
    REQUIRE(max_feasible_cardinality({2.5, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}) == 2);
    REQUIRE(max_feasible_cardinality({0.5, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}) == 0);
    // Zero-capacity items always count.
    REQUIRE(max_feasible_cardinality({0.5, {1.0, 1.0, 1.0}, {0.0, 0.0, 1.0}}) == 2);
}

TEST_CASE("instance validation") {
    REQUIRE_THROWS_AS(validate({1.0, {1.0, 2.0}, {1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate({1.0, {-1.0}, {1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate({std::nan(""), {1.0}, {1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate({-1.0, {1.0}, {1.0}}), std::invalid_argument);
    KnapsackInstance wide;
    wide.capacity = 1.0;
    wide.values.assign(31, 1.0);
    wide.item_capacities.assign(31, 1.0);
    REQUIRE_THROWS_AS(validate(wide), std::invalid_argument);
}

TEST_CASE("instance digest is a stable order-sensitive fingerprint") {
    const KnapsackInstance inst{5.0, {6.0, 10.0}, {1.0, 2.0}};
    const std::string digest = instance_digest(inst);
    REQUIRE(digest.size() == 16);
    REQUIRE(digest.find_first_not_of("0123456789abcdef") == std::string::npos);
    REQUIRE(digest == instance_digest(inst));

    const KnapsackInstance swapped{5.0, {10.0, 6.0}, {2.0, 1.0}};
    REQUIRE(instance_digest(swapped) != digest);
    const KnapsackInstance rebudgeted{4.0, {6.0, 10.0}, {1.0, 2.0}};
    REQUIRE(instance_digest(rebudgeted) != digest);
}

TEST_CASE("relaxation compiler produces the expected shape") {
    const SdpProblem tiny = build_sos({1.0, {1.0}, {1.0}}, 1);
    REQUIRE(tiny.variable_keys == std::vector<Subset>{0, 1});
    REQUIRE(tiny.blocks.size() == 2);
    REQUIRE(tiny.blocks[0].name == "moment");
    REQUIRE(tiny.blocks[0].dim == 2);
    REQUIRE(tiny.blocks[1].name == "capacity");
    REQUIRE(tiny.blocks[1].dim == 1);
    REQUIRE(tiny.equalities.size() == 1);
    REQUIRE(tiny.box_bound == 1.0);

    KnapsackInstance eight;
    eight.capacity = 4.0;
    eight.values.assign(8, 1.0);
    eight.item_capacities.assign(8, 1.0);
    const SdpProblem p = build_sos(eight, 2);
    REQUIRE(p.variable_keys.size() == 163);  // subsets of size <= 4 out of 8
    REQUIRE(p.blocks[0].dim == 37);          // size <= 2
    REQUIRE(p.blocks[1].dim == 9);           // size <= 1

    REQUIRE_THROWS_AS(build_sos(eight, 0), std::invalid_argument);
}

TEST_CASE("relaxation value is exact at full depth") {
    // At t = 3 with n = 2 the localizing basis spans all point indicators,
    // which forces the mass of every over-budget selection to zero, so the
    // relaxation collapses to the exact optimum.
    const KnapsackInstance inst{4.0, {3.0, 4.0}, {2.0, 3.0}};
    const SosRun run = sos_value(inst, 3);
    REQUIRE(run.solution.status == SolveStatus::Converged);
    REQUIRE(run.value == Catch::Approx(4.0).margin(1e-5));
    REQUIRE(run.value == run.solution.objective_value);
    // The packaged moments mirror the raw solution values.
    REQUIRE(run.moments.n() == 2);
    REQUIRE(run.moments.degree_bound() == 6);
    REQUIRE(run.moments.moment(0b10) == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("relaxation upper-bounds the exact optimum") {
    const KnapsackInstance inst{5.0, {6.0, 10.0, 12.0}, {1.0, 2.0, 3.0}};
    const SosRun run = sos_value(inst, 2);
    REQUIRE(run.solution.status == SolveStatus::Converged);
    REQUIRE(run.value >= opt_exact(inst) - 1e-6);
}

TEST_CASE("dropping oversized items pins their moments to zero") {
    const KnapsackInstance inst{2.0, {5.0, 3.0}, {9.0, 1.0}};
    SosOptions opts;
    opts.drop_oversized_items = true;
    const SosRun dropped = sos_value(inst, 1, {}, opts);
    REQUIRE(dropped.solution.status == SolveStatus::Converged);
    REQUIRE(dropped.moments.moment(0b01) == Catch::Approx(0.0).margin(1e-6));
    REQUIRE(dropped.value == Catch::Approx(3.0).margin(1e-5));

    // Left in the model, the oversized item is still worth a fraction.
    const SosRun kept = sos_value(inst, 1);
    REQUIRE(kept.value > 3.5);
}

TEST_CASE("scaling all values scales the bounds linearly") {
    const KnapsackInstance inst{3.0, {2.0, 5.0, 4.0}, {1.0, 3.0, 2.0}};
    KnapsackInstance scaled = inst;
    for (double& v : scaled.values) v *= 2.0;

    REQUIRE(opt_exact(scaled) == Catch::Approx(2.0 * opt_exact(inst)).margin(1e-9));
    REQUIRE(lp_value(scaled) == Catch::Approx(2.0 * lp_value(inst)).margin(1e-9));
    const double sos1 = sos_value(inst, 1).value;
    const double sos2 = sos_value(scaled, 1).value;
    REQUIRE(sos2 == Catch::Approx(2.0 * sos1).margin(1e-4));
}

TEST_CASE("high-value item set") {
    const KnapsackInstance inst{1.0, {10.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
    REQUIRE(high_value_set(inst, 10.0, 2) == 0b001);
    // Boundary ties are included.
    const KnapsackInstance ties{2.0, {4.0, 4.0, 2.0}, {1.0, 1.0, 1.0}};
    REQUIRE(high_value_set(ties, 8.0, 3) == 0b011);
    REQUIRE(high_value_set(ties, 8.0, 2) == 0);

    REQUIRE_THROWS_AS(high_value_set(inst, 10.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(high_value_set(inst, 0.0, 2), std::invalid_argument);
}

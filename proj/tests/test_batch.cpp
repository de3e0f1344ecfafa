// Batch runner: input-order results, per-degree worst ratios, isolated
// per-instance failures, and thread-count independence of the output.
#include <catch2/catch_amalgamated.hpp>

#include "sosgap/batch.hpp"
#include "sosgap/io.hpp"

using namespace sosgap;

namespace {

std::vector<KnapsackInstance> small_suite() {
    return {
        {1.0, {1.0}, {1.0}},
        {1.5, {10.0, 1.0, 1.0}, {1.0, 1.0, 1.0}},
        {4.0, {3.0, 4.0}, {2.0, 3.0}},
    };
}

}  // namespace

TEST_CASE("empty batch") {
    const BatchResult result = run_batch({}, {2});
    REQUIRE(result.reports.empty());
    REQUIRE(result.failures.empty());
    REQUIRE(result.worst_ratio_per_degree.empty());
}

TEST_CASE("batch keeps input order and aggregates worst ratios") {
    const std::vector<KnapsackInstance> suite = small_suite();
    const BatchResult result = run_batch(suite, {1, 2});
    REQUIRE(result.failures.empty());
    REQUIRE(result.reports.size() == suite.size());
    for (std::size_t i = 0; i < suite.size(); ++i) {
        REQUIRE(result.reports[i].instance_digest == instance_digest(suite[i]));
        REQUIRE(result.reports[i].runs.size() == 2);
    }

    // Recompute the aggregate from the reports themselves.
    std::map<int, double> expected;
    for (const GapReport& report : result.reports)
        for (const GapRunEntry& e : report.runs) {
            if (e.inconclusive || !e.has_ratio) continue;
            auto [it, inserted] = expected.try_emplace(e.t, e.ratio);
            if (!inserted && e.ratio > it->second) it->second = e.ratio;
        }
    REQUIRE(result.worst_ratio_per_degree == expected);
    REQUIRE(result.worst_ratio_per_degree.count(2) == 1);
}

TEST_CASE("one failing instance does not poison the batch") {
    std::vector<KnapsackInstance> suite = small_suite();
    // 25 items with fractional values: the exact oracle rejects this, and the
    // batch must capture the error in-place.
    KnapsackInstance bad;
    bad.capacity = 10.0;
    bad.values.assign(25, 1.5);
    bad.item_capacities.assign(25, 1.0);
    suite[1] = bad;

    const BatchResult result = run_batch(suite, {1});
    REQUIRE(result.failures.size() == 1);
    REQUIRE(result.failures[0].rfind("instance 1: ", 0) == 0);
    REQUIRE(result.reports[1].runs.empty());
    REQUIRE(result.reports[0].runs.size() == 1);
    REQUIRE(result.reports[2].runs.size() == 1);
}

TEST_CASE("batch output does not depend on the thread count") {
    const std::vector<KnapsackInstance> suite = small_suite();
    const BatchResult serial = run_batch(suite, {1, 2}, {}, {}, 1e-4, 1);
    const BatchResult parallel = run_batch(suite, {1, 2}, {}, {}, 1e-4, 2);

    REQUIRE(serial.worst_ratio_per_degree == parallel.worst_ratio_per_degree);
    for (std::size_t i = 0; i < suite.size(); ++i)
        REQUIRE(report_to_json(serial.reports[i]).dump() ==
                report_to_json(parallel.reports[i]).dump());
}

#pragma once

#include <atomic>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sosgap/gap.hpp"
#include "sosgap/knapsack.hpp"

// Batch experiment runner.  Instances run concurrently (each solve owns its
// workspace), results keep input order, and a per-instance failure never
// aborts the batch: the failing slot gets an empty report and an entry in the
// failure list.

namespace sosgap {

struct BatchResult {
    std::vector<GapReport> reports;               // one per instance, input order
    std::map<int, double> worst_ratio_per_degree; // max ratio over converged entries carrying a ratio
    std::vector<std::string> failures;            // "instance <index>: <reason>", ascending index
};

inline BatchResult run_batch(const std::vector<KnapsackInstance>& instances, const std::vector<int>& degrees,
                             const SolverConfig& cfg = {}, const Tolerance& tol = {}, double ratio_tol = 1e-4,
                             int threads = 0) {
    const int count = static_cast<int>(instances.size());
    BatchResult result;
    result.reports.resize(count);
    std::vector<std::string> errors(count);

    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = static_cast<int>(hw == 0 ? 1 : hw);
    }
    threads = std::min({threads, count, 8});

    std::atomic<int> next{0};
    const auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                result.reports[i] = gap_report(instances[i], degrees, cfg, tol, ratio_tol);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (threads <= 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    for (int i = 0; i < count; ++i)
        if (!errors[i].empty()) result.failures.push_back("instance " + std::to_string(i) + ": " + errors[i]);
    for (const GapReport& report : result.reports)
        for (const GapRunEntry& e : report.runs) {
            if (e.inconclusive || !e.has_ratio) continue;
            auto [it, inserted] = result.worst_ratio_per_degree.try_emplace(e.t, e.ratio);
            if (!inserted && e.ratio > it->second) it->second = e.ratio;
        }
    return result;
}

}  // namespace sosgap

// Gap-experiment plumbing: per-degree entries with the 1 + 1/(t-1) bound
// verdict, the lemma-level summaries on solved moments, and whole-instance
// reports.
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "sosgap/gap.hpp"
#include "support/oracles.hpp"

using namespace sosgap;

TEST_CASE("gap entries carry the bound only for t >= 2") {
    const KnapsackInstance inst{4.0, {3.0, 4.0}, {2.0, 3.0}};
    const double opt = opt_exact(inst);
    REQUIRE(opt == 4.0);

    const GapRunEntry shallow = run_gap_entry(inst, 1, opt);
    REQUIRE(shallow.t == 1);
    REQUIRE_FALSE(shallow.has_bound);
    REQUIRE_FALSE(shallow.bound_pass);  // no bound to pass
    REQUIRE(shallow.has_ratio);
    REQUIRE(shallow.ratio == Catch::Approx(shallow.sos / opt).margin(1e-12));
    REQUIRE(shallow.elapsed_seconds >= 0.0);

    const GapRunEntry deep = run_gap_entry(inst, 2, opt);
    REQUIRE(deep.has_bound);
    REQUIRE(deep.bound == 2.0);
    REQUIRE_FALSE(deep.inconclusive);
    REQUIRE(deep.bound_pass);
    REQUIRE(deep.residuals.iterations > 0);
}

TEST_CASE("zero-optimum instances report no ratio and never pass the bound") {
    const KnapsackInstance inst{1.0, {0.0, 0.0}, {1.0, 1.0}};
    const GapRunEntry entry = run_gap_entry(inst, 2, opt_exact(inst));
    REQUIRE_FALSE(entry.has_ratio);
    REQUIRE_FALSE(entry.bound_pass);
    REQUIRE_FALSE(entry.inconclusive);
    // Local distributions are still checked; conditional weights need a
    // positive optimum and are skipped.
    REQUIRE(entry.lemmas.local.sets_checked == 4);
    REQUIRE(entry.lemmas.local.pass);
    REQUIRE(entry.lemmas.y.windows_checked == 0);
    REQUIRE(entry.lemmas.reduction.pass_count + entry.lemmas.reduction.fail_count +
                entry.lemmas.reduction.premise_unmet ==
            0);
}

TEST_CASE("a dominant item exercises the conditional-weight machinery") {
    // opt = 10 is reached by item 1 alone; at t = 2 the high-value set is
    // exactly that item, giving two conditioning windows over three outside
    // items.
    const KnapsackInstance inst{1.0, {10.0, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}};
    const GapRunEntry entry = run_gap_entry(inst, 2, opt_exact(inst));
    REQUIRE_FALSE(entry.inconclusive);

    const YSummary& y = entry.lemmas.y;
    REQUIRE(y.windows_checked + y.skipped == 2);
    REQUIRE(y.windows_checked >= 1);
    REQUIRE(y.pass);
    REQUIRE(y.y_min >= -kYTol);
    REQUIRE(y.y_max <= 1.0 + kYTol);
    REQUIRE(y.transfer_allowance == Catch::Approx(5e-4).margin(1e-15));
    REQUIRE(y.worst_transfer <= y.transfer_allowance);

    const ReductionSummary& red = entry.lemmas.reduction;
    REQUIRE(red.pass_count + red.fail_count + red.premise_unmet == 6);
    REQUIRE(red.fail_count == 0);
    REQUIRE(red.pass);
}

TEST_CASE("vanishing moments hold at a vertex optimum") {
    // Budget 1.5 with unit item capacities bounds every selection to one
    // item, and the value spread makes the single-item vertex optimal, so
    // the solved moments of pairs and triples must vanish.
    const KnapsackInstance inst{1.5, {10.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
    const double opt = opt_exact(inst);
    REQUIRE(opt == 10.0);

    const GapRunEntry entry = run_gap_entry(inst, 2, opt);
    REQUIRE_FALSE(entry.inconclusive);
    REQUIRE(entry.sos == Catch::Approx(10.0).margin(1e-4));
    REQUIRE(entry.bound_pass);
    REQUIRE(entry.lemmas.vanishing.applicable);
    REQUIRE(entry.lemmas.vanishing.k == 1);
    REQUIRE(entry.lemmas.vanishing.pass);
    REQUIRE(entry.lemmas.local.sets_checked == 7);
    REQUIRE(entry.lemmas.all_pass());
}

TEST_CASE("reports aggregate one entry per requested degree") {
    const KnapsackInstance inst{1.5, {10.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
    const GapReport report = gap_report(inst, {2, 3});
    REQUIRE(report.instance_digest == instance_digest(inst));
    REQUIRE(report.opt == 10.0);
    REQUIRE(report.lp == Catch::Approx(10.5).margin(1e-12));
    REQUIRE(report.runs.size() == 2);
    REQUIRE(report.runs[0].t == 2);
    REQUIRE(report.runs[1].t == 3);
    // Deeper relaxations can only tighten the value.
    if (report.runs[0].status == SolveStatus::Converged &&
        report.runs[1].status == SolveStatus::Converged)
        REQUIRE(report.runs[1].sos <= report.runs[0].sos + 1e-4);
}

TEST_CASE("capped runs are inconclusive and skip the lemma battery") {
    SolverConfig cfg;
    cfg.max_iters = 5;
    const KnapsackInstance inst{4.0, {3.0, 4.0}, {2.0, 3.0}};
    const GapRunEntry entry = run_gap_entry(inst, 2, opt_exact(inst), cfg);
    REQUIRE(entry.status == SolveStatus::IterationCap);
    REQUIRE(entry.inconclusive);
    REQUIRE_FALSE(entry.bound_pass);
    REQUIRE(entry.residuals.iterations == 5);
    REQUIRE_FALSE(entry.lemmas.vanishing.applicable);
    REQUIRE(entry.lemmas.local.sets_checked == 0);
    REQUIRE(entry.lemmas.y.windows_checked == 0);
}

TEST_CASE("bound verdict applies the relative ratio tolerance") {
    const KnapsackInstance inst{4.0, {3.0, 4.0}, {2.0, 3.0}};
    SosRun run = sos_value(inst, 2);
    REQUIRE(run.solution.status == SolveStatus::Converged);

    // Inflate the reported value past bound * opt: the verdict must flip.
    run.value = 8.2;  // ratio 2.05 against bound 2
    const GapRunEntry entry = evaluate_gap_entry(inst, 2, 4.0, run);
    REQUIRE_FALSE(entry.bound_pass);
    REQUIRE(entry.ratio == Catch::Approx(2.05).margin(1e-12));

    REQUIRE_THROWS_AS(evaluate_gap_entry(inst, 0, 4.0, run), std::invalid_argument);
}

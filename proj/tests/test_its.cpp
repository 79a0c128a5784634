#include <doctest.h>
#include <vector>

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/its.hpp"
#include "jdpew/model.hpp"

using namespace jdpew;

TEST_CASE("one subsystem: the alternation lands on the certified optimum") {
    ScenarioSpec spec = default_scenario(1, 3);
    spec.m = 3;
    spec.l = 3;
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(1);

    ItsResult its = its_solve(inst, cat);
    CertifiedSolution opt = solve_exact(inst, cat);
    CHECK(its.termination == "converged");
    CHECK(its.profit == doctest::Approx(opt.profit).epsilon(1e-12));
    CHECK(its.decision == opt.decision);
}

TEST_CASE("trace is non-decreasing and reported profit matches the model") {
    for (uint64_t seed : {1ULL, 7ULL, 19ULL}) {
        ScenarioSpec spec = default_scenario(3, seed);
        Instance inst = generate_instance(spec);
        Catalog cat = Catalog::make(inst.w);

        ItsResult its = its_solve(inst, cat);
        REQUIRE_FALSE(its.trace.empty());
        CHECK(its.trace.size() <= static_cast<size_t>(kItsMaxIterations));

        double prev = -1e300;
        for (size_t t = 0; t < its.trace.size(); ++t) {
            const ItsIteration& it = its.trace[t];
            CHECK(it.iteration == static_cast<int>(t) + 1);
            CHECK(it.profit_after_design >= prev - profit_tol(it.profit_after_design, prev));
            CHECK(it.profit_after_pricing >=
                  it.profit_after_design - profit_tol(it.profit_after_pricing, it.profit_after_design));
            prev = it.profit_after_pricing;
        }
        CHECK(its.profit == doctest::Approx(prev).epsilon(1e-12));
        CHECK(expected_profit(inst, cat, its.decision) ==
              doctest::Approx(its.profit).epsilon(1e-12));
        CHECK(its.profit <= solve_exact(inst, cat).profit + 1e-9);
    }
}

TEST_CASE("at convergence neither block re-solve improves the incumbent") {
    ScenarioSpec spec = default_scenario(3, 23);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);

    ItsResult its = its_solve(inst, cat);
    REQUIRE(its.termination == "converged");

    // Design block: optimal design at the converged levels.
    CertifiedSolution design = solve_fixed_levels(inst, cat, levels_from_z(its.decision));
    CHECK(design.profit <= its.profit + profit_tol(design.profit, its.profit));

    // Pricing block: optimal monotone levels at the converged design.
    PricingStep pricing = pricing_step(inst, cat, wt, its.decision);
    CHECK(pricing.complete);
    CHECK(pricing.profit <= its.profit + profit_tol(pricing.profit, its.profit));
}

TEST_CASE("pricing step never drops below the decision it was seeded with") {
    ScenarioSpec spec = default_scenario(3, 29);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);

    // Start from the design stage at the canonical levels.
    CertifiedSolution start = solve_fixed_levels(inst, cat, initial_levels(cat, inst.l));
    double before = expected_profit(inst, cat, start.decision);
    PricingStep step = pricing_step(inst, cat, wt, start.decision);
    CHECK(step.profit >= before - profit_tol(step.profit, before));
    CHECK(expected_profit(inst, cat, step.decision) ==
          doctest::Approx(step.profit).epsilon(1e-12));
    // Holding the design fixed, only discount rows may change.
    CHECK(step.decision.x == start.decision.x);
    CHECK(step.decision.y == start.decision.y);
}

TEST_CASE("budget validation and expiry behavior") {
    ScenarioSpec spec = default_scenario(3, 31);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);

    CHECK_THROWS_AS(its_solve(inst, cat, 0.0) /* discarded */, Error);
    CHECK_THROWS_AS(its_solve(inst, cat, -5.0) /* discarded */, Error);
    CHECK_THROWS_AS(its_solve(inst, cat, 10.0, kItsMaxIterations, 0.0) /* discarded */, Error);
    CHECK_THROWS_AS(its_solve(inst, cat, 10.0, 0) /* discarded */, Error);
}

TEST_CASE("iteration cap is honored and labeled") {
    ScenarioSpec spec = default_scenario(3, 37);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    ItsResult full = its_solve(inst, cat);
    if (full.trace.size() > 1) {
        ItsResult capped = its_solve(inst, cat, kDefaultBudgetSec, 1);
        CHECK(capped.termination == "iteration-cap");
        CHECK(capped.trace.size() == 1);
        // The capped run still returns a valid decision and matching profit.
        CHECK(expected_profit(inst, cat, capped.decision) ==
              doctest::Approx(capped.profit).epsilon(1e-12));
    }
}

TEST_CASE("per-step budget truncation keeps the trace monotone and never claims convergence") {
    ScenarioSpec spec = default_scenario(4, 41);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);

    // A step cap tight enough to truncate w=4 block solves.
    ItsResult its = its_solve(inst, cat, 2.0, 6, 1e-4);
    CHECK(its.termination != "converged");
    double prev = -1e300;
    for (const ItsIteration& it : its.trace) {
        CHECK(it.profit_after_design >= prev - profit_tol(it.profit_after_design, prev));
        CHECK(it.profit_after_pricing >=
              it.profit_after_design - profit_tol(it.profit_after_pricing, it.profit_after_design));
        prev = it.profit_after_pricing;
    }
    CHECK(expected_profit(inst, cat, its.decision) == doctest::Approx(its.profit).epsilon(1e-12));
}

TEST_CASE("repeated runs are bit-identical") {
    ScenarioSpec spec = default_scenario(3, 43);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    ItsResult a = its_solve(inst, cat);
    ItsResult b = its_solve(inst, cat);
    CHECK(a.decision == b.decision);
    CHECK(a.profit == b.profit);
    CHECK(a.termination == b.termination);
    CHECK(a.trace.size() == b.trace.size());
}

#include <doctest.h>
#include <vector>

#include "jdpew/baselines.hpp"
#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/its.hpp"
#include "jdpew/model.hpp"
#include "jdpew/rng.hpp"
#include "test_helpers.hpp"

using namespace jdpew;

TEST_CASE("baseline kinds round-trip through their parser") {
    for (BaselineKind k : {BaselineKind::kBm1, BaselineKind::kBm2, BaselineKind::kBm3}) {
        CHECK(baseline_from_string(to_string(k)) == k);
    }
    CHECK(to_string(BaselineKind::kBm1) == "bm1");
    CHECK_THROWS_AS(baseline_from_string("bm4") /* discarded */, Error);
}

TEST_CASE("restriction hierarchy holds on every seed tried") {
    for (uint64_t seed : {2ULL, 5ULL, 8ULL, 13ULL}) {
        ScenarioSpec spec = default_scenario(3, seed);
        spec.theta = 4.0;
        Instance inst = generate_instance(spec);
        Catalog cat = Catalog::make(inst.w);

        CertifiedSolution exact = solve_exact(inst, cat);
        ItsResult its = its_solve(inst, cat);
        GaConfig cfg;
        cfg.seed = seed;
        GaResult ga = ga_solve(inst, cat, cfg);
        CertifiedSolution bm1 = solve_baseline(inst, cat, BaselineKind::kBm1);
        CertifiedSolution bm2 = solve_baseline(inst, cat, BaselineKind::kBm2);
        CertifiedSolution bm3 = solve_baseline(inst, cat, BaselineKind::kBm3);

        auto leq = [](double a, double b) { return a <= b + profit_tol(a, b); };
        // The full optimum dominates every restricted or heuristic method.
        CHECK(leq(its.profit, exact.profit));
        CHECK(leq(ga.profit, exact.profit));
        CHECK(leq(bm3.profit, exact.profit));
        CHECK(leq(bm2.profit, exact.profit));
        CHECK(leq(bm1.profit, exact.profit));
        // Freeing one axis can only help.
        CHECK(leq(bm1.profit, bm3.profit));
        CHECK(leq(bm1.profit, bm2.profit));

        // Every reported profit is the model's valuation of its decision.
        for (const CertifiedSolution* s : {&exact, &bm1, &bm2, &bm3}) {
            CHECK(expected_profit(inst, cat, s->decision) ==
                  doctest::Approx(s->profit).epsilon(1e-12));
        }
        CHECK(expected_profit(inst, cat, ga.decision) ==
              doctest::Approx(ga.profit).epsilon(1e-12));
    }
}

TEST_CASE("personalized-design baseline is exactly the design stage at the starting discounts") {
    for (uint64_t seed : {3ULL, 11ULL}) {
        ScenarioSpec spec = default_scenario(3, seed);
        Instance inst = generate_instance(spec);
        Catalog cat = Catalog::make(inst.w);
        CertifiedSolution bm2 = solve_baseline(inst, cat, BaselineKind::kBm2);
        CertifiedSolution stage = solve_fixed_levels(inst, cat, initial_levels(cat, inst.l));
        CHECK(bm2.profit == doctest::Approx(stage.profit).epsilon(1e-12));
        CHECK(bm2.decision == stage.decision);
        CHECK(levels_from_z(bm2.decision) == initial_levels(cat, inst.l));
    }
}

TEST_CASE("shared-set baselines recommend the same contracts to every group") {
    ScenarioSpec spec = default_scenario(3, 17);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    for (BaselineKind kind : {BaselineKind::kBm1, BaselineKind::kBm3}) {
        CertifiedSolution sol = solve_baseline(inst, cat, kind);
        for (int i = 0; i < inst.n; ++i) {
            for (int j = 1; j < inst.m; ++j) {
                CHECK(sol.decision.recommended(i, j) == sol.decision.recommended(i, 0));
            }
            // Advertised means recommended under the shared-set restriction.
            CHECK((sol.decision.y[i] != 0) == sol.decision.recommended(i, 0));
        }
        if (kind == BaselineKind::kBm1) {
            CHECK(levels_from_z(sol.decision) == initial_levels(cat, inst.l));
        }
    }
}

TEST_CASE("repair always yields a valid decision and is idempotent") {
    for (uint64_t seed : {7ULL, 15ULL}) {
        ScenarioSpec spec = default_scenario(3, seed);
        spec.theta = 2.0;
        Instance inst = generate_instance(spec);
        Catalog cat = Catalog::make(inst.w);
        WeightTables wt = WeightTables::build(inst, cat);
        SeqRng rng(100 + seed);
        for (int t = 0; t < 2000; ++t) {
            // Raw patterns: arbitrary bits everywhere, including empty and
            // multi-set discount rows.
            Decision raw = Decision::zeros(inst.n, inst.m, inst.l);
            for (auto& b : raw.y) b = rng.bernoulli(0.4) ? 1 : 0;
            for (auto& b : raw.x) b = rng.bernoulli(0.4) ? 1 : 0;
            for (auto& b : raw.z) b = rng.bernoulli(0.3) ? 1 : 0;

            Decision fixed = ga_repair(inst, cat, wt, raw);
            CHECK(validate_decision(inst, cat, fixed).ok());
            CHECK(ga_repair(inst, cat, wt, fixed) == fixed);
        }
    }
}

TEST_CASE("repair reports unrepairable instances") {
    Instance inst = testutil::tiny21();
    inst.beta = {50.0};  // even the discounted full bundle has negative weight
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    Decision raw = Decision::zeros(inst.n, inst.m, inst.l);
    try {
        ga_repair(inst, cat, wt, raw);
        FAIL("expected the repair pipeline to give up");
    } catch (const Error& e) {
        CHECK(e.kind() == "repair");
    }
}

TEST_CASE("genetic algorithm is deterministic per seed") {
    ScenarioSpec spec = default_scenario(3, 19);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    GaConfig cfg;
    cfg.seed = 5;
    GaResult a = ga_solve(inst, cat, cfg);
    GaResult b = ga_solve(inst, cat, cfg);
    CHECK(a.decision == b.decision);
    CHECK(a.profit == b.profit);
    CHECK(a.generations_run == b.generations_run);
    CHECK(a.evaluations == b.evaluations);

    cfg.seed = 6;
    GaResult c = ga_solve(inst, cat, cfg);
    // A different seed explores differently (profits may coincide, the
    // search effort almost surely does not).
    CHECK((c.evaluations != a.evaluations || c.decision != a.decision || c.profit == a.profit));
}

TEST_CASE("genetic algorithm stops early when progress stalls") {
    ScenarioSpec spec = default_scenario(2, 9);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    GaConfig cfg;
    cfg.seed = 2;
    cfg.n_gen = 2000;
    cfg.stagnation_limit = 5;
    GaResult r = ga_solve(inst, cat, cfg);
    CHECK(r.generations_run < cfg.n_gen);
    CHECK(validate_decision(inst, cat, r.decision).ok());
}

#include <cmath>
#include <doctest.h>

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/eval.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/model.hpp"
#include "jdpew/rng.hpp"
#include "test_helpers.hpp"

using namespace jdpew;

TEST_CASE("contract price is the undiscounted bundle price times the row multiplier") {
    Instance inst = testutil::tiny21();
    Catalog cat = Catalog::make(inst.w);

    Decision d = testutil::tiny21_bundle(0);
    CHECK(contract_price(inst, cat, 2, 0, d) == doctest::Approx(300.0).epsilon(1e-15));

    set_z_from_levels(d, {0, 0, 1});  // multiplier 0.9
    CHECK(contract_price(inst, cat, 2, 0, d) == doctest::Approx(270.0).epsilon(1e-15));

    // Single-subsystem contracts price at their own subsystem only.
    CHECK(contract_price(inst, cat, 0, 0, d) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(contract_price(inst, cat, 1, 0, d) == doctest::Approx(200.0).epsilon(1e-15));
}

TEST_CASE("discount rows: multiplier sums set levels, extraction demands one-hot") {
    Instance inst = testutil::tiny21();
    Decision d = testutil::tiny21_bundle(0);
    CHECK(contract_multiplier(inst, d, 2) == 1.0);

    d.z[2 * 3 + 0] = 0;  // bundle row now all-zero
    CHECK(contract_multiplier(inst, d, 2) == 0.0);
    CHECK_THROWS_AS(levels_from_z(d) /* discarded */, Error);

    d.z[2 * 3 + 0] = 1;
    d.z[2 * 3 + 2] = 1;  // two levels selected
    CHECK(contract_multiplier(inst, d, 2) == doctest::Approx(1.8).epsilon(1e-15));
    CHECK_THROWS_AS(levels_from_z(d) /* discarded */, Error);
}

TEST_CASE("preference weight: attraction sum minus price sensitivity") {
    Instance inst = testutil::tiny21();
    inst.v = {22.0, 30.0};
    Catalog cat = Catalog::make(inst.w);

    CHECK(preference_weight(inst, cat, 0, 0, 100.0) == doctest::Approx(17.0).epsilon(1e-15));
    // Zero price: weight equals the raw attraction sum.
    CHECK(preference_weight(inst, cat, 0, 0, 0.0) == doctest::Approx(22.0).epsilon(1e-15));
    // Weights may go negative; the caller decides policy.
    CHECK(preference_weight(inst, cat, 0, 0, 1000.0) < 0.0);
}

TEST_CASE("diminishing mode equals linear mode on single-subsystem contracts") {
    Instance lin = testutil::tiny21();
    Instance dim = testutil::tiny21();
    dim.utility_mode = UtilityMode::kDiminishing;
    Catalog cat = Catalog::make(lin.w);
    CHECK(preference_weight(lin, cat, 0, 0, 80.0) ==
          doctest::Approx(preference_weight(dim, cat, 0, 0, 80.0)).epsilon(1e-15));
    // On the two-subsystem bundle the diminishing factor bites: 1 - ln(2)/6.
    double raw = 20.0 + 30.0;
    double expect = (1.0 - std::log(2.0) / 6.0) * raw - 0.05 * 300.0;
    CHECK(preference_weight(dim, cat, 2, 0, 300.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("choice probabilities follow the attraction-share rule") {
    Instance inst = testutil::tiny21();
    inst.u0 = {300.0};
    inst.v = {25.0, 40.0};  // bundle weight at price 300: 65 - 15 = 50
    Catalog cat = Catalog::make(inst.w);
    Decision d = testutil::tiny21_bundle(0);

    std::vector<double> q = choice_probabilities(inst, cat, d, 0);
    REQUIRE(q.size() == 4);  // three contracts + outside option
    CHECK(q[2] == doctest::Approx(50.0 / 350.0).epsilon(1e-15));
    CHECK(q[3] == doctest::Approx(300.0 / 350.0).epsilon(1e-15));
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 0.0);

    SUBCASE("empty assortment sends everyone to the outside option") {
        d.x[2] = 0;
        q = choice_probabilities(inst, cat, d, 0);
        CHECK(q[3] == 1.0);
        CHECK(q[0] + q[1] + q[2] == 0.0);
    }

    SUBCASE("equal weights get equal probabilities") {
        // Recommend both singletons; make their weights equal.
        Instance eq = inst;
        eq.v = {30.0, 35.0};  // weights at prices 100/200: 25 and 25
        Decision both = Decision::zeros(3, 1, 3);
        both.y[0] = both.y[1] = 1;
        both.x[0] = both.x[1] = 1;
        set_z_from_levels(both, {0, 0, 0});
        q = choice_probabilities(eq, cat, both, 0);
        CHECK(q[0] == doctest::Approx(q[1]).epsilon(1e-15));
    }

    SUBCASE("recommended contract with negative weight is rejected") {
        Instance bad = inst;
        bad.beta = {5.0};  // bundle weight far negative
        try {
            choice_probabilities(bad, cat, d, 0);
            FAIL("expected an error for a negative recommended weight");
        } catch (const Error& e) {
            CHECK(e.kind() == "negative-weight");
        }
    }
}

TEST_CASE("expected profit of the hand instance is 21") {
    Instance inst = testutil::tiny21();
    Catalog cat = Catalog::make(inst.w);
    Decision d = testutil::tiny21_bundle(0);
    CHECK(expected_profit(inst, cat, d) == doctest::Approx(21.0).epsilon(1e-12));
}

TEST_CASE("profit is linear in the advertising cost") {
    ScenarioSpec spec = default_scenario(3, 7);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    SeqRng rng(11);
    for (int t = 0; t < 50; ++t) {
        Decision d = testutil::random_feasible(inst, cat, wt, rng);
        Instance hi = inst;
        hi.theta = inst.theta + 5.0;
        double lo_p = expected_profit(inst, cat, d);
        double hi_p = expected_profit(hi, cat, d);
        CHECK(lo_p - hi_p == doctest::Approx(5.0 * d.advertised_count()).epsilon(1e-12));
    }
}

TEST_CASE("uncovered groups make a decision invalid rather than zero-profit") {
    Instance inst = testutil::tiny21();
    inst.theta = 4.0;
    Catalog cat = Catalog::make(inst.w);
    Decision d = Decision::zeros(3, 1, 3);
    set_z_from_levels(d, {0, 0, 0});
    // Nothing advertised: coverage is violated, not priced as zero profit.
    CHECK_FALSE(validate_decision(inst, cat, d).ok());
    CHECK_THROWS_AS(expected_profit(inst, cat, d) /* discarded */, Error);
}

TEST_CASE("validator catches each constraint family") {
    ScenarioSpec spec = default_scenario(3, 5);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);

    auto has_rule = [](const ValidationReport& r, const char* rule) {
        for (const auto& v : r.violations) {
            if (v.rule == rule) return true;
        }
        return false;
    };

    // Feasible base: full bundle advertised and recommended everywhere.
    Decision base = Decision::zeros(inst.n, inst.m, inst.l);
    base.y[inst.n - 1] = 1;
    for (int j = 0; j < inst.m; ++j) base.x[(inst.n - 1) * inst.m + j] = 1;
    set_z_from_levels(base, std::vector<int>(inst.n, 0));
    REQUIRE(validate_decision(inst, cat, base).ok());

    SUBCASE("recommendation without advertising") {
        Decision d = base;
        d.x[0 * inst.m + 0] = 1;  // contract 1 is not advertised
        ValidationReport r = validate_decision(inst, cat, d);
        CHECK(has_rule(r, "advertising-link"));
    }
    SUBCASE("missing subsystem coverage") {
        Decision d = base;
        d.x[(inst.n - 1) * inst.m + 1] = 0;  // group 2 recommends nothing
        ValidationReport r = validate_decision(inst, cat, d);
        CHECK(has_rule(r, "subsystem-coverage"));
    }
    SUBCASE("discount row not one-hot") {
        Decision d = base;
        d.z[0 * inst.l + 0] = 0;
        ValidationReport r = validate_decision(inst, cat, d);
        CHECK(has_rule(r, "one-discount"));
    }
    SUBCASE("size-monotone multipliers") {
        // Larger contract at a shallower level than a smaller one violates;
        // the reverse satisfies.
        Decision good = base;
        set_z_from_levels(good, {1, 1, 1, 1, 1, 1, 2});  // bundle deepest
        CHECK_FALSE(has_rule(validate_decision(inst, cat, good), "monotone-discount"));
        Decision bad = base;
        set_z_from_levels(bad, {1, 0, 0, 0, 0, 0, 0});  // singleton deeper than bundle
        CHECK(has_rule(validate_decision(inst, cat, bad), "monotone-discount"));
    }
    SUBCASE("negative recommended weight") {
        Instance hot = inst;
        for (double& b : hot.beta) b *= 400.0;  // all weights far negative
        ValidationReport r = validate_decision(hot, cat, base);
        CHECK(has_rule(r, "negative-weight"));
    }
}

TEST_CASE("monotone-discount validation agrees with the pairwise brute check") {
    ScenarioSpec spec = default_scenario(3, 9);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    SeqRng rng(17);
    for (int t = 0; t < 1000; ++t) {
        std::vector<int> lv(inst.n);
        for (int i = 0; i < inst.n; ++i) lv[i] = static_cast<int>(rng.below(inst.l));
        Decision d = Decision::zeros(inst.n, inst.m, inst.l);
        d.y[inst.n - 1] = 1;
        for (int j = 0; j < inst.m; ++j) d.x[(inst.n - 1) * inst.m + j] = 1;
        set_z_from_levels(d, lv);

        bool brute_ok = true;
        for (int a = 0; a < inst.n; ++a) {
            for (int b = 0; b < inst.n; ++b) {
                if (cat.size[a] > cat.size[b] &&
                    contract_multiplier(inst, d, a) > contract_multiplier(inst, d, b)) {
                    brute_ok = false;
                }
            }
        }
        bool validator_ok = true;
        for (const auto& viol : validate_decision(inst, cat, d).violations) {
            if (viol.rule == "monotone-discount") validator_ok = false;
        }
        CHECK(validator_ok == brute_ok);
        CHECK(brute_ok == levels_monotone(cat, lv));
    }
}

TEST_CASE("choice probabilities sit on the simplex for random feasible decisions") {
    ScenarioSpec spec = default_scenario(3, 13);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    SeqRng rng(23);
    for (int t = 0; t < 200; ++t) {
        Decision d = testutil::random_feasible(inst, cat, wt, rng);
        for (int j = 0; j < inst.m; ++j) {
            std::vector<double> q = choice_probabilities(inst, cat, d, j);
            double sum = 0.0;
            for (size_t idx = 0; idx < q.size(); ++idx) {
                CHECK(q[idx] >= 0.0);
                if (idx + 1 < q.size() && !d.recommended(static_cast<int>(idx), j)) {
                    CHECK(q[idx] == 0.0);
                }
                sum += q[idx];
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("prices are a pure function of instance and decision") {
    ScenarioSpec spec = default_scenario(3, 21);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    Decision d = Decision::zeros(inst.n, inst.m, inst.l);
    d.y[inst.n - 1] = 1;
    for (int j = 0; j < inst.m; ++j) d.x[(inst.n - 1) * inst.m + j] = 1;
    set_z_from_levels(d, {0, 0, 1, 0, 1, 1, 2});
    for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j < inst.m; ++j) {
            double a = contract_price(inst, cat, i, j, d);
            double b = contract_price(inst, cat, i, j, d);
            CHECK(a == b);  // bitwise
        }
    }
}

TEST_CASE("choice probabilities are invariant to rescaling a group's weights") {
    Instance inst = testutil::tiny21();
    inst.u0 = {300.0};
    inst.v = {25.0, 40.0};
    Catalog cat = Catalog::make(inst.w);
    Decision d = testutil::tiny21_bundle(0);

    std::vector<double> q0 = choice_probabilities(inst, cat, d, 0);
    for (double kappa : {3.7, 0.25, 117.0}) {
        Instance scaled = inst;
        scaled.u0[0] *= kappa;
        scaled.beta[0] *= kappa;
        for (double& v : scaled.v) v *= kappa;
        std::vector<double> q1 = choice_probabilities(scaled, cat, d, 0);
        for (size_t idx = 0; idx < q0.size(); ++idx) {
            CHECK(q1[idx] == doctest::Approx(q0[idx]).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear-mode weights are additive over singleton subsystems") {
    ScenarioSpec spec = default_scenario(3, 33);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    for (double mult : {1.0, 0.95, 0.9}) {
        for (int j = 0; j < inst.m; ++j) {
            for (int i = 0; i < inst.n; ++i) {
                double bundle_price = 0.0;
                double singles = 0.0;
                for (int k = 0; k < inst.w; ++k) {
                    if (!cat.contains(i, k)) continue;
                    double share = inst.at(inst.p0, k, j) * mult;
                    bundle_price += share;
                    int singleton = (1 << k) - 1;  // contract covering only k
                    singles += preference_weight(inst, cat, singleton, j, share);
                }
                double whole = preference_weight(inst, cat, i, j, bundle_price);
                CHECK(whole == doctest::Approx(singles).epsilon(1e-12));
            }
        }
    }
}

#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <set>
#include <vector>

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/model.hpp"
#include "jdpew/rng.hpp"
#include "test_helpers.hpp"

using namespace jdpew;

namespace {

// Independent monotone filter: all l^n level vectors, pairwise size rule.
std::vector<std::vector<int>> brute_monotone(const Catalog& cat, int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> lv(cat.n, 0);
    while (true) {
        bool ok = true;
        for (int a = 0; a < cat.n && ok; ++a)
            for (int b = 0; b < cat.n && ok; ++b)
                if (cat.size[a] > cat.size[b] && lv[a] < lv[b]) ok = false;
        if (ok) out.push_back(lv);
        int pos = cat.n - 1;
        while (pos >= 0 && lv[pos] == l - 1) lv[pos--] = 0;
        if (pos < 0) break;
        ++lv[pos];
    }
    return out;
}

}  // namespace

TEST_CASE("monotone assignment counts at desk scale") {
    // One subsystem, three levels: the single contract picks any level.
    CHECK(count_monotone_levels(Catalog::make(1), 3) == 3);

    // Two subsystems, two levels: levels (a, b) for the singletons and c for
    // the bundle, with c >= a and c >= b; 5 of the 8 vectors qualify.
    Catalog cat2 = Catalog::make(2);
    CHECK(count_monotone_levels(cat2, 2) == 5);
    CHECK(static_cast<long long>(brute_monotone(cat2, 2).size()) == 5);

    for (int w = 1; w <= 3; ++w) {
        Catalog cat = Catalog::make(w);
        for (int l = 1; l <= 3; ++l) {
            CHECK(count_monotone_levels(cat, l) ==
                  static_cast<long long>(brute_monotone(cat, l).size()));
        }
    }
}

TEST_CASE("enumeration matches the independent filter, order is canonical") {
    for (int w = 2; w <= 3; ++w) {
        Catalog cat = Catalog::make(w);
        for (int l = 2; l <= 3; ++l) {
            std::vector<std::vector<int>> ours = enumerate_monotone_levels(cat, l);
            std::vector<std::vector<int>> ref = brute_monotone(cat, l);
            REQUIRE(ours.size() == ref.size());
            // Same set.
            std::set<std::vector<int>> a(ours.begin(), ours.end());
            std::set<std::vector<int>> b(ref.begin(), ref.end());
            CHECK(a == b);
            // No duplicates, all monotone.
            CHECK(a.size() == ours.size());
            for (const auto& lv : ours) CHECK(levels_monotone(cat, lv));
        }
    }
}

TEST_CASE("streaming enumeration replays the materialized order exactly") {
    Catalog cat = Catalog::make(3);
    const uint32_t all_contracts = (1u << cat.n) - 1u;
    std::vector<std::vector<int>> mat = enumerate_monotone_levels(cat, 3);
    std::vector<std::vector<int>> seen;
    bool complete = for_each_monotone_levels(cat, 3, all_contracts,
                                             [&](const std::vector<int>& lv) {
                                                 seen.push_back(lv);
                                                 return true;
                                             });
    CHECK(complete);
    CHECK(seen == mat);

    // Early abort stops the walk and reports it.
    int count = 0;
    bool finished = for_each_monotone_levels(cat, 3, all_contracts,
                                             [&](const std::vector<int>&) {
                                                 return ++count < 5;
                                             });
    CHECK_FALSE(finished);
    CHECK(count == 5);
}

TEST_CASE("subset enumeration equals the filtered full enumeration") {
    Catalog cat = Catalog::make(3);
    int l = 3;
    SeqRng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t subset = static_cast<uint32_t>(rng.below(1 << cat.n));
        // Project full assignments onto the subset and dedupe.
        std::set<std::vector<int>> expect;
        std::vector<int> lv(cat.n, 0);
        while (true) {
            bool ok = true;
            for (int a = 0; a < cat.n && ok; ++a) {
                if (!((subset >> a) & 1u)) continue;
                for (int b = 0; b < cat.n && ok; ++b) {
                    if (!((subset >> b) & 1u)) continue;
                    if (cat.size[a] > cat.size[b] && lv[a] < lv[b]) ok = false;
                }
            }
            if (ok) {
                std::vector<int> proj(cat.n, 0);
                for (int i = 0; i < cat.n; ++i)
                    if ((subset >> i) & 1u) proj[i] = lv[i];
                expect.insert(proj);
            }
            int pos = cat.n - 1;
            while (pos >= 0 && lv[pos] == l - 1) lv[pos--] = 0;
            if (pos < 0) break;
            ++lv[pos];
        }

        std::vector<std::vector<int>> got = enumerate_monotone_levels(cat, l, subset, 1 << 20);
        CHECK(count_monotone_levels(cat, l, subset) == static_cast<long long>(got.size()));
        std::set<std::vector<int>> gotset(got.begin(), got.end());
        CHECK(gotset.size() == got.size());
        CHECK(gotset == expect);
    }
}

TEST_CASE("enumeration refuses to materialize beyond its cap") {
    Catalog cat = Catalog::make(3);
    const uint32_t all_contracts = (1u << cat.n) - 1u;
    long long total = count_monotone_levels(cat, 3);
    CHECK_THROWS_AS(enumerate_monotone_levels(cat, 3, all_contracts, total - 1) /* discarded */,
                    Error);
    CHECK_NOTHROW(enumerate_monotone_levels(cat, 3, all_contracts, total));
}

TEST_CASE("single-group assortment: hand values") {
    SUBCASE("one item covering everything") {
        // weight 35, margin 210, u0 315: revenue = 35*210/350 = 21.
        std::vector<AssortmentItem> items = {{0, 0b11u, 35.0, 210.0}};
        AssortmentResult r = best_assortment(items, 315.0, 0b11u);
        REQUIRE(r.feasible);
        CHECK(r.mask == 0b1u);
        CHECK(r.revenue == doctest::Approx(21.0).epsilon(1e-12));
    }
    SUBCASE("zero-margin item joins only when it does not dilute") {
        // A second item with margin 0 adds weight but no revenue; taking it
        // strictly lowers the ratio, so the optimum excludes it.
        std::vector<AssortmentItem> items = {{0, 0b11u, 35.0, 210.0}, {1, 0b01u, 10.0, 0.0}};
        AssortmentResult r = best_assortment(items, 315.0, 0b11u);
        REQUIRE(r.feasible);
        CHECK(r.mask == 0b1u);
        CHECK(r.revenue == doctest::Approx(21.0).epsilon(1e-12));
    }
    SUBCASE("coverage can force revenue-diluting items in") {
        // Only the pair covers both subsystems.
        std::vector<AssortmentItem> items = {{0, 0b01u, 35.0, 210.0}, {1, 0b10u, 10.0, 0.0}};
        AssortmentResult r = best_assortment(items, 315.0, 0b11u);
        REQUIRE(r.feasible);
        CHECK(r.mask == 0b11u);
        CHECK(r.revenue == doctest::Approx(35.0 * 210.0 / 360.0).epsilon(1e-12));
    }
    SUBCASE("uncoverable groups are reported infeasible") {
        std::vector<AssortmentItem> items = {{0, 0b01u, 35.0, 210.0}};
        AssortmentResult r = best_assortment(items, 315.0, 0b11u);
        CHECK_FALSE(r.feasible);
    }
}

TEST_CASE("assortment scan equals an independent exhaustive ratio check") {
    SeqRng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        int w = 2 + static_cast<int>(rng.below(2));
        Catalog cat = Catalog::make(w);
        int count = 2 + static_cast<int>(rng.below(cat.n - 1));
        std::vector<int> order(cat.n);
        for (int i = 0; i < cat.n; ++i) order[i] = i;
        for (int i = cat.n - 1; i > 0; --i)
            std::swap(order[i], order[rng.below(i + 1)]);
        std::vector<AssortmentItem> items;
        for (int t = 0; t < count; ++t) {
            int contract = order[t];
            items.push_back({contract, cat.mask[contract], 5.0 + 40.0 * rng.u01(),
                             -50.0 + 300.0 * rng.u01()});
        }
        double u0 = 50.0 + 400.0 * rng.u01();
        AssortmentResult r = best_assortment(items, u0, cat.full_mask());

        bool any = false;
        double best = 0.0;
        for (uint32_t pick = 1; pick < (1u << items.size()); ++pick) {
            uint32_t covered = 0;
            double wsum = 0.0, wm = 0.0;
            for (size_t t = 0; t < items.size(); ++t) {
                if (!((pick >> t) & 1u)) continue;
                covered |= items[t].mask;
                wsum += items[t].weight;
                wm += items[t].weight * items[t].margin;
            }
            if (covered != cat.full_mask()) continue;
            double rev = wm / (u0 + wsum);
            if (!any || rev > best) best = rev, any = true;
        }
        REQUIRE(r.feasible == any);
        if (any) CHECK(r.revenue == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("exact solve on one subsystem has a closed form") {
    // n = 1: the bundle must be advertised and recommended to every group;
    // only the discount level is free.
    ScenarioSpec spec = default_scenario(1, 99);
    spec.m = 3;
    spec.l = 3;
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(1);
    WeightTables wt = WeightTables::build(inst, cat);

    double best = -1e300;
    int arg = -1;
    for (int h = 0; h < inst.l; ++h) {
        double profit = -inst.theta;
        bool ok = true;
        for (int j = 0; j < inst.m; ++j) {
            double u = wt.wgt(0, j, h);
            if (u < 0.0) ok = false;
            profit += inst.lambda[j] * u * wt.mrg(0, j, h) / (inst.u0[j] + u);
        }
        if (ok && profit > best) best = profit, arg = h;
    }
    REQUIRE(arg >= 0);

    CertifiedSolution sol = solve_exact(inst, cat);
    CHECK(sol.certificate == "proven-optimal");
    CHECK(sol.profit == doctest::Approx(best).epsilon(1e-12));
    CHECK(levels_from_z(sol.decision)[0] == arg);
    CHECK(sol.decision.y[0] == 1);
}

TEST_CASE("certified search equals the exhaustive reference") {
    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        ScenarioSpec spec = default_scenario(2, seed);
        spec.theta = 4.0;
        Instance inst = generate_instance(spec);
        Catalog cat = Catalog::make(inst.w);
        CertifiedSolution fast = solve_exact(inst, cat);
        CertifiedSolution slow = brute_force(inst, cat);
        CHECK(fast.certificate == "proven-optimal");
        CHECK(slow.certificate == "proven-optimal");
        CHECK(fast.profit == doctest::Approx(slow.profit).epsilon(1e-12));
        CHECK(fast.decision == slow.decision);
    }
    // One three-subsystem case for depth.
    ScenarioSpec spec = default_scenario(3, 5);
    spec.theta = 8.0;
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(3);
    CertifiedSolution fast = solve_exact(inst, cat);
    CertifiedSolution slow = brute_force(inst, cat);
    CHECK(fast.profit == doctest::Approx(slow.profit).epsilon(1e-12));
    CHECK(fast.decision == slow.decision);
}

TEST_CASE("optimum dominates random feasible decisions") {
    ScenarioSpec spec = default_scenario(3, 77);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    CertifiedSolution sol = solve_exact(inst, cat);
    SeqRng rng(53);
    for (int t = 0; t < 1000; ++t) {
        Decision d = testutil::random_feasible(inst, cat, wt, rng);
        CHECK(expected_profit(inst, cat, d) <= sol.profit + profit_tol(sol.profit, sol.profit));
    }
    // The reported profit is the model's own valuation of the decision.
    CHECK(expected_profit(inst, cat, sol.decision) == doctest::Approx(sol.profit).epsilon(1e-12));
}

TEST_CASE("node bound dominates every completion of a partial advertised set") {
    ScenarioSpec spec = default_scenario(3, 11);
    spec.theta = 6.0;
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    std::vector<int> levels = initial_levels(cat, inst.l);

    SeqRng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        uint32_t in_mask = static_cast<uint32_t>(rng.below(1 << cat.n));
        uint32_t und_mask = static_cast<uint32_t>(rng.below(1 << cat.n)) & ~in_mask;
        double bound = design_node_bound(inst, cat, wt, levels, in_mask, und_mask);

        // Exhaustive closure: every advertised superset of in within in|und.
        uint32_t free = und_mask;
        uint32_t sub = free;
        while (true) {
            uint32_t y_mask = in_mask | sub;
            DesignEval ev = evaluate_design(inst, cat, wt, levels, y_mask);
            if (ev.feasible) {
                CHECK(ev.profit <= bound + 1e-9);
            }
            if (sub == 0) break;
            sub = (sub - 1) & free;
        }
    }
}

TEST_CASE("champion pool picks the same winner in any insertion order") {
    Instance inst = testutil::tiny21();
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    SeqRng rng(61);
    std::vector<std::pair<double, Decision>> cands;
    for (int t = 0; t < 40; ++t) {
        Decision d = testutil::random_feasible(inst, cat, wt, rng);
        cands.push_back({expected_profit(inst, cat, d), d});
    }
    // Inject exact ties of the best candidate with different tie-break keys.
    ChampionSet fwd;
    for (const auto& [p, d] : cands) fwd.add(p, d);
    ChampionSet rev;
    for (auto it = cands.rbegin(); it != cands.rend(); ++it) rev.add(it->first, it->second);
    REQUIRE_FALSE(fwd.empty());
    CHECK(fwd.winner_profit() == rev.winner_profit());
    CHECK(fwd.winner() == rev.winner());

    // Merging two halves gives the same winner as one pool.
    ChampionSet left, right;
    for (size_t t = 0; t < cands.size(); ++t)
        (t % 2 ? left : right).add(cands[t].first, cands[t].second);
    left.merge(right);
    CHECK(left.winner() == fwd.winner());
    CHECK(left.winner_profit() == fwd.winner_profit());
}

TEST_CASE("fixed-level design stage: exactness and input checking") {
    ScenarioSpec spec = default_scenario(3, 13);
    spec.theta = 4.0;
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    WeightTables wt = WeightTables::build(inst, cat);
    std::vector<int> levels = initial_levels(cat, inst.l);

    CertifiedSolution sol = solve_fixed_levels(inst, cat, levels);
    CHECK(sol.certificate == "proven-optimal");

    // Exhaustive reference over all advertised sets at these levels.
    double best = -1e300;
    for (uint32_t y_mask = 1; y_mask < (1u << cat.n); ++y_mask) {
        DesignEval ev = evaluate_design(inst, cat, wt, levels, y_mask);
        if (ev.feasible && ev.profit > best) best = ev.profit;
    }
    CHECK(sol.profit == doctest::Approx(best).epsilon(1e-12));
    // The decision keeps the requested levels verbatim.
    CHECK(levels_from_z(sol.decision) == levels);

    // Non-monotone input levels are rejected.
    std::vector<int> bad(cat.n, 0);
    bad[0] = inst.l - 1;  // singleton deeper than the bundle
    CHECK_THROWS_AS(solve_fixed_levels(inst, cat, bad) /* discarded */, Error);
    // Out-of-range levels are rejected.
    std::vector<int> oob(cat.n, inst.l);
    CHECK_THROWS_AS(solve_fixed_levels(inst, cat, oob) /* discarded */, Error);
}

TEST_CASE("budget handling: error on nonpositive, best-found on expiry") {
    ScenarioSpec spec = default_scenario(5, 21);
    Instance inst = generate_instance(spec);
    Catalog cat = Catalog::make(inst.w);
    CHECK_THROWS_AS(solve_exact(inst, cat, 0.0) /* discarded */, Error);
    CHECK_THROWS_AS(solve_exact(inst, cat, -1.0) /* discarded */, Error);

    CertifiedSolution sol = solve_exact(inst, cat, 0.02);
    CHECK(sol.certificate == "best-found");
    // Whatever came back is a valid decision matching its reported profit.
    CHECK(expected_profit(inst, cat, sol.decision) == doctest::Approx(sol.profit).epsilon(1e-12));
}

#include <doctest.h>
#include <vector>

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/instance.hpp"
#include "jdpew/rng.hpp"

using namespace jdpew;

TEST_CASE("starting rule: level of the highest covered subsystem") {
    Catalog cat = Catalog::make(3);
    std::vector<int> z0 = z0_levels(cat, 3);
    // Contract covering only the first subsystem (mask 0b001, index 0).
    CHECK(z0[0] == 0);
    // Contract covering the first and third subsystems (mask 0b101, index 4).
    CHECK(z0[4] == 2);
    // Full bundle: deepest level; default ladder multiplier 0.90.
    CHECK(z0[6] == 2);
    CHECK(default_ladder(3)[z0[6]] == doctest::Approx(0.90).epsilon(1e-15));

    // Fewer levels than subsystems: clamped to the ladder.
    std::vector<int> clamped = z0_levels(cat, 2);
    CHECK(clamped[4] == 1);
    CHECK(clamped[6] == 1);
}

TEST_CASE("starting rule alone can violate monotonicity; the fixed start never does") {
    // {1,2} (size 2) gets level 1 while {3} (size 1) gets level 2.
    Catalog cat = Catalog::make(3);
    std::vector<int> z0 = z0_levels(cat, 3);
    CHECK(z0[2] == 1);  // mask 0b011
    CHECK(z0[3] == 2);  // mask 0b100
    CHECK_FALSE(levels_monotone(cat, z0));

    for (int w = 1; w <= 6; ++w) {
        Catalog c = Catalog::make(w);
        for (int l = 1; l <= w + 2; ++l) {
            CHECK(levels_monotone(c, initial_levels(c, l)));
        }
    }
}

TEST_CASE("raise-smaller repair: monotone, never deepens, minimal") {
    SeqRng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        int w = 2 + static_cast<int>(rng.below(4));
        int l = 2 + static_cast<int>(rng.below(3));
        Catalog cat = Catalog::make(w);
        std::vector<int> before(cat.n);
        for (int& v : before) v = static_cast<int>(rng.below(l));
        std::vector<int> after = before;
        repair_raise_smaller(cat, after);

        CHECK(levels_monotone(cat, after));
        // Levels only fall (multipliers only rise), and an already-monotone
        // assignment is untouched.
        for (int i = 0; i < cat.n; ++i) CHECK(after[i] <= before[i]);
        if (levels_monotone(cat, before)) CHECK(after == before);
        // Idempotent.
        std::vector<int> again = after;
        repair_raise_smaller(cat, again);
        CHECK(again == after);
        // Minimal: raising any single changed row back by one step breaks
        // monotonicity (each row moved no further than necessary).
        for (int i = 0; i < cat.n; ++i) {
            if (after[i] == before[i]) continue;
            std::vector<int> tweak = after;
            tweak[i] += 1;
            CHECK_FALSE(levels_monotone(cat, tweak));
        }
    }
}

TEST_CASE("lower-larger repair: monotone, never shallows, minimal") {
    SeqRng rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        int w = 2 + static_cast<int>(rng.below(4));
        int l = 2 + static_cast<int>(rng.below(3));
        Catalog cat = Catalog::make(w);
        std::vector<int> before(cat.n);
        for (int& v : before) v = static_cast<int>(rng.below(l));
        std::vector<int> after = before;
        repair_lower_larger(cat, after);

        CHECK(levels_monotone(cat, after));
        for (int i = 0; i < cat.n; ++i) CHECK(after[i] >= before[i]);
        if (levels_monotone(cat, before)) CHECK(after == before);
        std::vector<int> again = after;
        repair_lower_larger(cat, again);
        CHECK(again == after);
        for (int i = 0; i < cat.n; ++i) {
            if (after[i] == before[i]) continue;
            std::vector<int> tweak = after;
            tweak[i] -= 1;
            CHECK_FALSE(levels_monotone(cat, tweak));
        }
    }
}

TEST_CASE("canonical completion rewrites only non-advertised rows") {
    SeqRng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        int w = 2 + static_cast<int>(rng.below(4));
        int l = 2 + static_cast<int>(rng.below(3));
        Catalog cat = Catalog::make(w);

        // Monotone advertised skeleton: draw full monotone levels, mark a
        // random subset of contracts advertised, then scramble the rest.
        std::vector<int> levels(cat.n);
        for (int& v : levels) v = static_cast<int>(rng.below(l));
        repair_lower_larger(cat, levels);
        std::vector<uint8_t> adv(cat.n, 0);
        for (int i = 0; i < cat.n; ++i) adv[i] = rng.bernoulli(0.4) ? 1 : 0;
        std::vector<int> advertised_copy = levels;
        for (int i = 0; i < cat.n; ++i)
            if (!adv[i]) levels[i] = static_cast<int>(rng.below(l));

        std::vector<int> completed = levels;
        complete_levels(cat, l, adv, completed);

        CHECK(levels_monotone(cat, completed));
        for (int i = 0; i < cat.n; ++i)
            if (adv[i]) CHECK(completed[i] == advertised_copy[i]);

        // Canonical: any two inputs with the same advertised rows complete
        // to the same assignment.
        std::vector<int> other = levels;
        for (int i = 0; i < cat.n; ++i)
            if (!adv[i]) other[i] = static_cast<int>(rng.below(l));
        complete_levels(cat, l, adv, other);
        CHECK(other == completed);
    }
}

TEST_CASE("completion rejects an advertised skeleton that pinches the window shut") {
    Catalog cat = Catalog::make(3);
    // Advertise {1} at the deepest level and the bundle at the shallowest:
    // no level remains for the size-2 rows.
    std::vector<uint8_t> adv(7, 0);
    adv[0] = adv[6] = 1;
    std::vector<int> levels = {2, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(complete_levels(cat, 3, adv, levels), Error);
}

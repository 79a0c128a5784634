// Shared fixtures for the unit tests: tiny hand-checkable instances and a
// generator for random feasible decisions.
#pragma once

#include <vector>

#include "jdpew/baselines.hpp"
#include "jdpew/eval.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/instance.hpp"
#include "jdpew/rng.hpp"

namespace testutil {

// One group, two subsystems, hand-set numbers:
//   v = (20, 30), p0 = (100, 200), c = (600, 1200) [gamma = 6], f = 0.05,
//   beta = 0.05, u0 = 315, ladder (1.0, 0.9, 0.8), theta = 0.
// The full bundle at level 0 then has price 300, weight 50 - 15 = 35,
// margin 300 - 90 = 210, and recommending only it yields profit
// (35 / 350) * 210 = 21.
inline jdpew::Instance tiny21() {
    jdpew::Instance inst;
    inst.m = 1;
    inst.w = 2;
    inst.n = 3;
    inst.l = 3;
    inst.lambda = {1.0};
    inst.u0 = {315.0};
    inst.beta = {0.05};
    inst.discounts = {1.0, 0.9, 0.8};
    inst.v = {20.0, 30.0};
    inst.p0 = {100.0, 200.0};
    inst.f = {0.05, 0.05};
    inst.c = {600.0, 1200.0};
    inst.theta = 0.0;
    return inst;
}

// Decision on tiny21: advertise and recommend only the full bundle, all
// discount rows at the given level for the bundle, level 0 for the rest.
inline jdpew::Decision tiny21_bundle(int level = 0) {
    jdpew::Decision d = jdpew::Decision::zeros(3, 1, 3);
    d.y[2] = 1;
    d.x[2] = 1;
    jdpew::set_z_from_levels(d, {0, 0, level});
    return d;
}

// A random decision pattern (uniform bits, uniform one-hot z rows) pushed
// through the repair pipeline, hence feasible by construction.
inline jdpew::Decision random_feasible(const jdpew::Instance& inst, const jdpew::Catalog& cat,
                                       const jdpew::WeightTables& wt, jdpew::SeqRng& rng) {
    jdpew::Decision d = jdpew::Decision::zeros(cat.n, inst.m, inst.l);
    for (int i = 0; i < cat.n; ++i) d.y[i] = rng.bernoulli(0.5) ? 1 : 0;
    for (int i = 0; i < cat.n; ++i) {
        for (int j = 0; j < inst.m; ++j) d.x[i * inst.m + j] = rng.bernoulli(0.5) ? 1 : 0;
    }
    for (int i = 0; i < cat.n; ++i) d.z[i * inst.l + rng.below(inst.l)] = 1;
    return jdpew::ga_repair(inst, cat, wt, d);
}

}  // namespace testutil

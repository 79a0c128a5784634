// Iterative two-stage heuristic: alternate an exact design step (advertised
// set + per-group assortments for the current discounts) with an exact
// pricing step (best monotone discount assignment for the current design)
// until a full cycle leaves the decision unchanged.
//
// Each step re-optimizes one block while the pool is seeded with the current
// decision, so the profit trace is non-decreasing step over step, and both
// steps use the shared canonical tie-breaking, so runs are deterministic.
#pragma once

#include <string>
#include <vector>

#include "jdpew/eval.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/instance.hpp"

namespace jdpew {

inline constexpr int kItsMaxIterations = 50;

// Pricing step: best monotone discount assignment holding recommendations and
// advertising fixed.  Pinned rows are the union of recommended contracts over
// the groups; the remaining rows are canonically completed, so equal-profit
// assignments compare bit-exactly.  Seeded with `current`, hence the result
// never has lower profit than `current` evaluates to.  complete == false when
// the time budget interrupted the enumeration.
struct PricingStep {
    Decision decision;
    double profit = 0.0;
    long long assignments = 0;  // assignments evaluated
    bool complete = true;
};
PricingStep pricing_step(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                         const Decision& current, double budget_sec = kDefaultBudgetSec);

struct ItsIteration {
    int iteration = 0;  // 1-based
    double profit_after_design = 0.0;
    double profit_after_pricing = 0.0;
};

struct ItsResult {
    Decision decision;
    double profit = 0.0;
    std::string termination;  // converged | iteration-cap | budget
    std::vector<ItsIteration> trace;
    long long nodes = 0;  // design-step nodes plus pricing assignments
    double elapsed_sec = 0.0;
};

// Runs the alternation from the canonical starting discounts.  Throws
// Error("budget") when the budget expires before the first design step
// finishes; afterwards a budget expiry returns the best decision so far with
// termination == "budget".
//
// step_budget_sec additionally caps each individual block solve.  A cycle in
// which a block was cut short by the step cap keeps iterating (its result is
// only a lower bound, so a non-improving cycle proves nothing) and never
// reports "converged"; only whole-budget expiry reports "budget".
ItsResult its_solve(const Instance& inst, const Catalog& cat,
                    double budget_sec = kDefaultBudgetSec,
                    int max_iterations = kItsMaxIterations,
                    double step_budget_sec = kDefaultBudgetSec);

}  // namespace jdpew

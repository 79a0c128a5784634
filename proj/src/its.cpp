#include "jdpew/its.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"

namespace jdpew {
namespace {

struct StepClock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

PricingStep pricing_step(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                         const Decision& current, double budget_sec) {
    if (budget_sec <= 0.0) throw Error("budget", "time budget must be positive");
    const int n = cat.n;
    const int m = inst.m;

    uint32_t pinned = 0;
    std::vector<uint32_t> xmasks(static_cast<size_t>(m), 0u);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (current.recommended(i, j)) {
                pinned |= 1u << i;
                xmasks[static_cast<size_t>(j)] |= 1u << i;
            }
        }
    }
    std::vector<uint8_t> pinned_rows(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) pinned_rows[static_cast<size_t>(i)] = (pinned >> i) & 1u;
    const double ad_cost = inst.theta * current.advertised_count();

    ChampionSet pool;
    {
        // Seed with the incoming decision (profit-irrelevant rows completed)
        // so the step can only hold or improve.
        std::vector<int> lv = levels_from_z(current);
        double seed_profit = -ad_cost;
        for (int j = 0; j < m; ++j) {
            double num = 0.0, den = inst.u0[static_cast<size_t>(j)];
            uint32_t s = xmasks[static_cast<size_t>(j)];
            while (s != 0) {
                const uint32_t low = s & (~s + 1u);
                const int i = std::countr_zero(low);
                num += wt.wgt(i, j, lv[static_cast<size_t>(i)]) *
                       wt.mrg(i, j, lv[static_cast<size_t>(i)]);
                den += wt.wgt(i, j, lv[static_cast<size_t>(i)]);
                s ^= low;
            }
            seed_profit += inst.lambda[static_cast<size_t>(j)] * (num / den);
        }
        Decision seeded = current;
        complete_levels(cat, inst.l, pinned_rows, lv);
        set_z_from_levels(seeded, lv);
        pool.add(seed_profit, seeded);
    }

    const bool budgeted = budget_sec < kDefaultBudgetSec;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(budget_sec));
    long long assignments = 0;
    const bool complete =
        for_each_monotone_levels(cat, inst.l, pinned, [&](const std::vector<int>& lv) {
            ++assignments;
            if (budgeted && (assignments & 0x3FF) == 0 &&
                std::chrono::steady_clock::now() >= deadline) {
                return false;
            }
            double profit = -ad_cost;
            for (int j = 0; j < m; ++j) {
                double num = 0.0, den = inst.u0[static_cast<size_t>(j)];
                uint32_t s = xmasks[static_cast<size_t>(j)];
                while (s != 0) {
                    const uint32_t low = s & (~s + 1u);
                    const int i = std::countr_zero(low);
                    const double u = wt.wgt(i, j, lv[static_cast<size_t>(i)]);
                    if (u < 0.0) return true;  // recommended weight must stay nonnegative
                    num += u * wt.mrg(i, j, lv[static_cast<size_t>(i)]);
                    den += u;
                    s ^= low;
                }
                profit += inst.lambda[static_cast<size_t>(j)] * (num / den);
            }
            if (!pool.admissible(profit)) return true;
            Decision cand = current;
            std::vector<int> completed = lv;
            complete_levels(cat, inst.l, pinned_rows, completed);
            set_z_from_levels(cand, completed);
            pool.add(profit, cand);
            return true;
        });

    PricingStep out;
    out.decision = pool.winner();
    out.profit = pool.winner_profit();
    out.assignments = assignments;
    out.complete = complete;
    return out;
}

ItsResult its_solve(const Instance& inst, const Catalog& cat, double budget_sec,
                    int max_iterations, double step_budget_sec) {
    if (budget_sec <= 0.0) throw Error("budget", "time budget must be positive");
    if (step_budget_sec <= 0.0) throw Error("budget", "step time budget must be positive");
    if (max_iterations < 1) throw Error("invalid-argument", "need at least one iteration");
    validate_instance(inst);
    const StepClock clock;
    const WeightTables wt = WeightTables::build(inst, cat);

    ItsResult res;
    std::vector<int> levels = initial_levels(cat, inst.l);
    Decision prev;
    double prev_profit = 0.0;
    bool have_prev = false;

    for (int iter = 1; iter <= max_iterations; ++iter) {
        double remaining = budget_sec - clock.seconds();
        if (remaining <= 0.0) {
            if (!have_prev) throw Error("budget", "time budget expired before the first design step");
            res.termination = "budget";
            break;
        }
        CertifiedSolution design;
        try {
            design = solve_fixed_levels(inst, cat, levels, std::min(remaining, step_budget_sec));
        } catch (const Error& err) {
            if (err.kind() == "budget" && have_prev) {
                res.termination = "budget";
                break;
            }
            throw;
        }
        res.nodes += design.nodes;
        bool cycle_exact = design.certificate == "proven-optimal";
        // A truncated step stops the run only when the whole-run budget (not
        // the per-step cap) was the binding limit.
        bool budget_stop = !cycle_exact && step_budget_sec >= remaining;
        // The incumbent is feasible for the step (same levels), so an exact
        // step can never come back worse; a truncated one can, and then the
        // incumbent is held to keep the profit trace non-decreasing.
        if (have_prev && design.profit < prev_profit &&
            !profit_close(design.profit, prev_profit)) {
            design.decision = prev;
            design.profit = prev_profit;
        }

        remaining = budget_sec - clock.seconds();
        PricingStep pricing;
        if (remaining <= 0.0) {
            budget_stop = true;
            cycle_exact = false;
            // No time left: treat the design-step decision as the pricing
            // result so the trace stays well formed.
            pricing.decision = design.decision;
            pricing.profit = design.profit;
        } else {
            pricing = pricing_step(inst, cat, wt, design.decision,
                                   std::min(remaining, step_budget_sec));
            res.nodes += pricing.assignments;
            if (!pricing.complete) {
                cycle_exact = false;
                if (step_budget_sec >= remaining) budget_stop = true;
            }
        }

        res.trace.push_back(ItsIteration{iter, design.profit, pricing.profit});

        // A full exact cycle that fails to improve the incumbent is a fixpoint
        // of both blocks (each step is seeded with the incumbent), so stop.
        // Truncated cycles prove nothing and keep iterating.
        if (have_prev && cycle_exact &&
            !candidate_better(pricing.profit, pricing.decision, prev_profit, prev)) {
            res.termination = "converged";
            break;
        }
        prev = pricing.decision;
        prev_profit = pricing.profit;
        have_prev = true;

        if (budget_stop) {
            res.termination = "budget";
            break;
        }
        levels = levels_from_z(prev);
    }

    if (!have_prev) throw Error("budget", "time budget expired before any decision");
    if (res.termination.empty()) res.termination = "iteration-cap";
    res.decision = prev;
    res.profit = prev_profit;
    res.elapsed_sec = clock.seconds();
    return res;
}

}  // namespace jdpew

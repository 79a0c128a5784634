// Benchmark strategies and the genetic-algorithm baseline.
//
// The three benchmarks restrict the joint problem along the two axes the full
// solver optimizes together:
//   bm1 — one recommendation set shared by every group, discounts fixed at
//         the canonical starting assignment;
//   bm2 — per-group recommendations, discounts fixed at the starting
//         assignment (the design stage on its own);
//   bm3 — one shared recommendation set, discounts optimized jointly.
// All three are solved exactly at desk scale, with a best-found fallback when
// a time budget interrupts bm3's discount sweep.
//
// The genetic algorithm evolves raw bit patterns and funnels every variation
// through a repair pipeline, so each evaluated individual is a valid decision.
#pragma once

#include <cstdint>
#include <string>

#include "jdpew/eval.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/gen.hpp"  // GaConfig
#include "jdpew/instance.hpp"

namespace jdpew {

enum class BaselineKind { kBm1, kBm2, kBm3 };

std::string to_string(BaselineKind kind);
BaselineKind baseline_from_string(const std::string& s);

CertifiedSolution solve_baseline(const Instance& inst, const Catalog& cat, BaselineKind kind,
                                 double budget_sec = kDefaultBudgetSec);

// Elites carried over unchanged each generation: round(fraction * size).
int ga_elite_count(const GaConfig& cfg);

struct GaResult {
    Decision decision;
    double profit = 0.0;
    int generations_run = 0;
    long long evaluations = 0;  // repair + fitness evaluations
    double elapsed_sec = 0.0;
};

// Repairs an arbitrary bit pattern into a valid decision:
//   1. advertising link: any recommended contract becomes advertised;
//   2. one level per contract: keep the lowest set level, or fall back to the
//      starting rule for empty rows;
//   3. size-monotone discounts: lift larger contracts' levels minimally;
//   4. per-group coverage: recommend the cheapest-claim advertised contract
//      with nonnegative weight that covers missing subsystems, else advertise
//      and recommend the full bundle;
//   5. nonnegative recommended weights: deepen the contract's discount to the
//      shallowest level that restores the weight (re-lifting larger
//      contracts), else drop the recommendation and re-cover via the full
//      bundle.
// Steps 4-5 loop to a fixpoint; levels only deepen, so the loop terminates.
// Idempotent; throws Error("repair") only when even the full bundle at the
// deepest discount has a negative weight for some group (no valid decision
// can cover that group).
Decision ga_repair(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                   Decision d);

// Seeded run: random population, tournament-of-2 selection, per-gene uniform
// crossover, bit-flip / row-reassignment mutation, repair after every
// variation, elitism, and an early stop after `stagnation_limit` generations
// without improvement (improvement = best profit rises beyond the shared
// comparison tolerance).  Deterministic per (instance, config incl. seed).
GaResult ga_solve(const Instance& inst, const Catalog& cat, const GaConfig& cfg);

}  // namespace jdpew

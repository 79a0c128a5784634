// Certified-optimal search for the joint design-and-pricing problem.
//
// Strategy: the profit of an integer decision is a closed-form function, so
// the solver enumerates the discount assignments that satisfy the
// size-monotone rule (outer loop), runs a branch-and-bound over the advertised
// set for each assignment (middle), and solves each group's assortment choice
// exactly at the leaves (inner).  A cheap per-assignment upper bound lets the
// outer loop skip most assignments once a good incumbent is known.
//
// Canonical answers: every candidate decision is completed (profit-irrelevant
// discount rows pinned by complete_levels) before comparison, and winners are
// chosen by a pruning-order-independent rule (max profit, then the shared
// tie-break among candidates within tolerance of it), so results are
// bit-identical across thread counts and across independent solvers.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jdpew/eval.hpp"
#include "jdpew/instance.hpp"

namespace jdpew {

struct CertifiedSolution {
    Decision decision;
    double profit = 0.0;
    std::string certificate;  // proven-optimal | best-found
    long long nodes = 0;      // branch-and-bound node visits
    long long z_explored = 0;
    long long z_skipped = 0;
    double elapsed_sec = 0.0;
};

// All discount assignments satisfying the size-monotone rule, one 0-based
// level per contract, in a fixed canonical order (size classes ascending,
// within a class contracts in index order, levels counted up from the
// smallest admissible).  Throws Error("cap") when the count exceeds `cap`.
long long count_monotone_levels(const Catalog& cat, int l);
std::vector<std::vector<int>> enumerate_monotone_levels(const Catalog& cat, int l,
                                                        long long cap = 20'000'000);

// Same, restricted to the contracts in `subset_mask`: assignments where every
// pair of subset contracts with strictly different sizes satisfies the
// monotone rule.  Rows outside the subset are returned as 0 and carry no
// meaning; callers canonicalize them (complete_levels) before use.
long long count_monotone_levels(const Catalog& cat, int l, uint32_t subset_mask);
std::vector<std::vector<int>> enumerate_monotone_levels(const Catalog& cat, int l,
                                                        uint32_t subset_mask, long long cap);

// Streaming variant: visits the same assignments in the same order without
// materializing them.  The visitor returns false to abort; the function
// returns false iff the walk was aborted.
bool for_each_monotone_levels(const Catalog& cat, int l, uint32_t subset_mask,
                              const std::function<bool(const std::vector<int>&)>& visit);

// Order-independent incumbent pool: keeps every candidate within profit
// tolerance of the best profit seen, and picks the tie-break minimum among
// those within tolerance of the final best.  Candidates must already be in
// canonical (completed) form.
class ChampionSet {
  public:
    void add(double profit, const Decision& dec);
    void merge(const ChampionSet& other);
    bool empty() const { return ties_.empty(); }
    double best_profit() const { return best_; }
    // True when a candidate at this profit would be kept; lets hot loops skip
    // building the Decision for hopeless candidates.
    bool admissible(double profit) const;
    // Strongest pruning threshold: anything provably below best - tol loses.
    double prune_threshold() const;
    // Winner under the shared candidate order; callable only when !empty().
    const Decision& winner() const;
    double winner_profit() const;

  private:
    double best_ = 0.0;
    std::vector<std::pair<double, Decision>> ties_;
};

// One group's assortment candidate: a contract with its preference weight and
// per-sale margin at the discount level under consideration.
struct AssortmentItem {
    int contract = 0;
    uint32_t mask = 0;
    double weight = 0.0;  // nonnegative (negative-weight contracts are excluded upstream)
    double margin = 0.0;
};

struct AssortmentResult {
    bool feasible = false;
    double revenue = 0.0;   // sum(weight*margin) / (u0 + sum(weight)) at the optimum
    uint32_t mask = 0;      // chosen contracts, bit = contract index
};

// Exact best single-group assortment subject to full subsystem coverage.
// Up to 16 items: exhaustive subset scan; ties within relative tolerance are
// broken toward the lexicographically smallest recommendation column.  More
// items: parametric (ratio-to-linear) search with a cover DP — still exact
// and deterministic, but without the canonical tie pick.
AssortmentResult best_assortment(const std::vector<AssortmentItem>& items, double u0,
                                 uint32_t full_mask);

// Best per-group assortments for a fixed advertised set and fixed discount
// levels. feasible == false when some group cannot cover all subsystems with
// nonnegative-weight advertised contracts.
struct DesignEval {
    bool feasible = false;
    double profit = 0.0;
    std::vector<uint32_t> xmasks;  // one recommendation mask per group
};
DesignEval evaluate_design(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                           const std::vector<int>& levels, uint32_t y_mask);

// Upper bound on the profit of any completion of a branch-and-bound node
// (contracts in `in_mask` advertised, `und_mask` undecided, rest excluded):
// per group, the best coverage-free assortment over in+und items with
// nonnegative weight, minus the advertising cost already committed.
double design_node_bound(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                         const std::vector<int>& levels, uint32_t in_mask, uint32_t und_mask);

inline constexpr double kDefaultBudgetSec = 86'400.0;

// Optimal design (advertised set + per-group assortments) for fixed discount
// levels: the middle+inner stage on its own. Used by the iterative solver's
// design step and by the personalized-design baseline.
CertifiedSolution solve_fixed_levels(const Instance& inst, const Catalog& cat,
                                     const std::vector<int>& levels,
                                     double budget_sec = kDefaultBudgetSec);

// Exhaustive search over one shared recommendation set (every group sees the
// same contracts, advertised = recommended), discounts fixed. Adds all
// optimal candidates to `pool`; n must stay scannable (<= 22 contracts).
// With canonical_complete, candidates get their profit-irrelevant discount
// rows pinned before entering the pool (for callers that range over many
// discount assignments and need canonical ties).
void shared_design_search(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                          const std::vector<int>& levels, ChampionSet& pool, long long* nodes,
                          bool canonical_complete = false);

// Full certified solve. Proven-optimal when the search completes within the
// time budget, best-found otherwise. Throws Error("budget") for budget <= 0,
// Error("infeasible") when no decision satisfies coverage with nonnegative
// weights, Error("budget") when the budget expires before any candidate.
CertifiedSolution solve_exact(const Instance& inst, const Catalog& cat,
                              double budget_sec = kDefaultBudgetSec);

// Independent exhaustive reference: filters all l^n level vectors by the
// pairwise monotone rule, scans every advertised set and every per-group
// sub-assortment, and evaluates profits through the public model operations.
// Kept deliberately free of the branch-and-bound machinery so the two paths
// cross-check each other. Throws Error("cap") beyond desk scale.
CertifiedSolution brute_force(const Instance& inst, const Catalog& cat);

}  // namespace jdpew

// Implementation of the certified search: monotone discount enumeration,
// branch-and-bound over advertised sets, exact per-group assortments, and the
// independent exhaustive cross-check.

#include "jdpew/exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#ifdef JDPEW_HAVE_OPENMP
#include <omp.h>
#endif

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/model.hpp"

namespace jdpew {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance for per-group assortment ties (pass 1 finds the best
// revenue, pass 2 picks the canonical column among everything this close).
constexpr double kAssortTieRel = 1e-9;

inline double assort_tie_tol(double best) {
    return kAssortTieRel * std::max(1.0, std::abs(best));
}

// Lexicographic order over recommendation columns: scanning contracts in
// index order, a 0 (not recommended) sorts before a 1.  Works on any mask
// whose bit t corresponds to the t-th candidate in ascending contract order.
inline bool xcol_less(uint32_t a, uint32_t b, int bits) {
    for (int t = 0; t < bits; ++t) {
        uint32_t abit = (a >> t) & 1u;
        uint32_t bbit = (b >> t) & 1u;
        if (abit != bbit) return abit < bbit;
    }
    return false;
}

struct Deadline {
    std::chrono::steady_clock::time_point end;
    bool enabled = false;

    static Deadline after(double seconds) {
        Deadline d;
        d.enabled = seconds < kDefaultBudgetSec;
        d.end = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds));
        return d;
    }
    bool expired() const {
        return enabled && std::chrono::steady_clock::now() >= end;
    }
};

// ---------------------------------------------------------------------------
// Monotone discount enumeration.
//
// Contracts are grouped into size classes.  The monotone rule constrains only
// contracts of strictly different sizes (bigger bundle -> level at least as
// deep), so an assignment is monotone exactly when, walking classes by
// ascending size, each class's levels lie in [lb, l-1] where lb is the
// maximum level used by all smaller classes.
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> classes_of(const Catalog& cat, uint32_t subset_mask) {
    std::vector<std::vector<int>> by_size(static_cast<size_t>(cat.w) + 1);
    for (int i = 0; i < cat.n; ++i) {
        if ((subset_mask >> i) & 1u) by_size[static_cast<size_t>(cat.size[i])].push_back(i);
    }
    std::vector<std::vector<int>> classes;
    for (auto& members : by_size) {
        if (!members.empty()) classes.push_back(std::move(members));
    }
    return classes;
}

// Exact small-integer power in extended precision (exact while the chain of
// products stays below 2^64, far past the enumeration caps).
long double ipow_ld(long double base, size_t e) {
    long double r = 1.0L;
    for (size_t t = 0; t < e; ++t) r *= base;
    return r;
}

long long count_monotone_core(const std::vector<std::vector<int>>& classes, int l) {
    // f[c][lb] = number of monotone assignments of classes c.. given that all
    // smaller classes peak at level lb.  Within class c of size k, the number
    // of tuples whose maximum is exactly M (M >= lb) is (M-lb+1)^k - (M-lb)^k.
    const size_t nc = classes.size();
    std::vector<std::vector<long double>> f(nc + 1,
                                            std::vector<long double>(static_cast<size_t>(l), 0.0L));
    for (int lb = 0; lb < l; ++lb) f[nc][static_cast<size_t>(lb)] = 1.0L;
    for (size_t c = nc; c-- > 0;) {
        const size_t k = classes[c].size();
        for (int lb = 0; lb < l; ++lb) {
            long double total = 0.0L;
            for (int peak = lb; peak < l; ++peak) {
                const auto span = static_cast<long double>(peak - lb);
                const long double tuples = ipow_ld(span + 1.0L, k) - ipow_ld(span, k);
                total += tuples * f[c + 1][static_cast<size_t>(peak)];
            }
            f[c][static_cast<size_t>(lb)] = total;
        }
    }
    long double count = f[0][0];
    if (count > 4.0e18L) return std::numeric_limits<long long>::max();
    return static_cast<long long>(count + 0.5L);
}

// Depth-first walk over monotone assignments in canonical order: classes by
// ascending size; within a class an odometer over [lb, l-1]^k with the last
// member fastest and levels ascending.  The visitor returns false to abort.
template <class F>
bool walk_monotone(const std::vector<std::vector<int>>& classes, int l, size_t ci, int lb,
                   std::vector<int>& levels, F&& visit) {
    if (ci == classes.size()) return visit(levels);
    const auto& members = classes[ci];
    const size_t k = members.size();
    std::vector<int> tup(k, lb);
    while (true) {
        int peak = lb;
        for (size_t t = 0; t < k; ++t) {
            levels[static_cast<size_t>(members[t])] = tup[t];
            peak = std::max(peak, tup[t]);
        }
        if (!walk_monotone(classes, l, ci + 1, peak, levels, visit)) return false;
        size_t pos = k;
        while (pos > 0 && tup[pos - 1] == l - 1) {
            tup[pos - 1] = lb;
            --pos;
        }
        if (pos == 0) break;
        ++tup[pos - 1];
    }
    return true;
}

// ---------------------------------------------------------------------------
// Per-assignment context and bounds.
// ---------------------------------------------------------------------------

// Weights, margins, and bound scan order for one discount assignment.
struct ZContext {
    int n = 0, m = 0;
    std::vector<double> wgt;      // n*m, preference weight at levels[i]
    std::vector<double> mrg;      // n*m, margin at levels[i]
    std::vector<uint32_t> nonneg; // m, bit i set when wgt(i, j) >= 0
    std::vector<int> order;       // m*n, contracts by descending margin per group

    double w_at(int i, int j) const { return wgt[static_cast<size_t>(i) * m + j]; }
    double r_at(int i, int j) const { return mrg[static_cast<size_t>(i) * m + j]; }
};

ZContext make_zcontext(const WeightTables& wt, const std::vector<int>& levels) {
    ZContext zc;
    zc.n = wt.n;
    zc.m = wt.m;
    zc.wgt.resize(static_cast<size_t>(wt.n) * wt.m);
    zc.mrg.resize(static_cast<size_t>(wt.n) * wt.m);
    zc.nonneg.assign(static_cast<size_t>(wt.m), 0u);
    zc.order.resize(static_cast<size_t>(wt.m) * wt.n);
    for (int i = 0; i < wt.n; ++i) {
        for (int j = 0; j < wt.m; ++j) {
            const size_t at = static_cast<size_t>(i) * wt.m + j;
            zc.wgt[at] = wt.wgt(i, j, levels[static_cast<size_t>(i)]);
            zc.mrg[at] = wt.mrg(i, j, levels[static_cast<size_t>(i)]);
            if (zc.wgt[at] >= 0.0) zc.nonneg[static_cast<size_t>(j)] |= 1u << i;
        }
    }
    for (int j = 0; j < wt.m; ++j) {
        int* ord = zc.order.data() + static_cast<size_t>(j) * wt.n;
        for (int i = 0; i < wt.n; ++i) ord[i] = i;
        std::sort(ord, ord + wt.n, [&zc, j](int a, int b) {
            double ra = zc.r_at(a, j), rb = zc.r_at(b, j);
            if (ra != rb) return ra > rb;
            return a < b;
        });
    }
    return zc;
}

// Upper bound on the profit of any completion with `in_mask` advertised and
// `und_mask` still undecided: per group, the unconstrained assortment optimum
// over available nonnegative-weight items is attained by a prefix of the
// margin-descending order, so a single scan yields it; coverage can only
// reduce it.  Advertising cost counts committed contracts only.  -inf when
// some group cannot reach full coverage even with every available item.
double bound_from_context(const Instance& inst, const Catalog& cat, const ZContext& zc,
                          uint32_t in_mask, uint32_t und_mask) {
    const uint32_t avail = in_mask | und_mask;
    const uint32_t full = cat.full_mask();
    double total = 0.0;
    for (int j = 0; j < zc.m; ++j) {
        const uint32_t usable = avail & zc.nonneg[static_cast<size_t>(j)];
        uint32_t cover = 0;
        double best = 0.0;  // empty assortment yields zero revenue
        double num = 0.0;
        double den = inst.u0[static_cast<size_t>(j)];
        const int* ord = zc.order.data() + static_cast<size_t>(j) * zc.n;
        for (int t = 0; t < zc.n; ++t) {
            const int i = ord[t];
            if (!((usable >> i) & 1u)) continue;
            cover |= cat.mask[static_cast<size_t>(i)];
            num += zc.w_at(i, j) * zc.r_at(i, j);
            den += zc.w_at(i, j);
            best = std::max(best, num / den);
        }
        if ((cover & full) != full) return -kInf;
        total += inst.lambda[static_cast<size_t>(j)] * best;
    }
    return total - inst.theta * std::popcount(in_mask);
}

// ---------------------------------------------------------------------------
// Exact single-group assortment.
// ---------------------------------------------------------------------------

struct AssortScratch {
    std::vector<double> num, den;
    std::vector<uint32_t> cover;
};

AssortmentResult assortment_exhaustive(const std::vector<AssortmentItem>& items, double u0,
                                       uint32_t full_mask) {
    thread_local AssortScratch sc;
    const int k = static_cast<int>(items.size());
    const uint32_t subsets = 1u << k;
    if (sc.num.size() < subsets) {
        sc.num.resize(subsets);
        sc.den.resize(subsets);
        sc.cover.resize(subsets);
    }
    sc.num[0] = 0.0;
    sc.den[0] = 0.0;
    sc.cover[0] = 0;
    for (uint32_t s = 1; s < subsets; ++s) {
        const uint32_t low = s & (~s + 1u);
        const int t = std::countr_zero(low);
        const uint32_t rest = s ^ low;
        sc.num[s] = sc.num[rest] + items[static_cast<size_t>(t)].weight * items[static_cast<size_t>(t)].margin;
        sc.den[s] = sc.den[rest] + items[static_cast<size_t>(t)].weight;
        sc.cover[s] = sc.cover[rest] | items[static_cast<size_t>(t)].mask;
    }
    double best = -kInf;
    for (uint32_t s = 1; s < subsets; ++s) {
        if ((sc.cover[s] & full_mask) != full_mask) continue;
        best = std::max(best, sc.num[s] / (u0 + sc.den[s]));
    }
    AssortmentResult res;
    if (best == -kInf) return res;
    const double tol = assort_tie_tol(best);
    uint32_t chosen = 0;
    bool have = false;
    for (uint32_t s = 1; s < subsets; ++s) {
        if ((sc.cover[s] & full_mask) != full_mask) continue;
        if (sc.num[s] / (u0 + sc.den[s]) < best - tol) continue;
        if (!have || xcol_less(s, chosen, k)) {
            chosen = s;
            have = true;
        }
    }
    res.feasible = true;
    res.revenue = sc.num[chosen] / (u0 + sc.den[chosen]);
    for (int t = 0; t < k; ++t) {
        if ((chosen >> t) & 1u) res.mask |= 1u << items[static_cast<size_t>(t)].contract;
    }
    return res;
}

// Ratio maximization via the parametric reduction: at threshold t the linear
// value of an item is weight*(margin - t); items with positive value are
// always taken, and a small DP over still-missing subsystems picks the
// cheapest way to finish coverage with the rest.  Iterating
// t <- ratio(argmax) converges to the optimal ratio.
AssortmentResult assortment_parametric(const std::vector<AssortmentItem>& items, double u0,
                                       uint32_t full_mask) {
    const int w = std::popcount(full_mask);
    if (w > 20) throw Error("cap", "assortment cover DP supports at most 20 subsystems");
    const size_t k = items.size();

    uint32_t any_cover = 0;
    for (const auto& it : items) any_cover |= it.mask;
    AssortmentResult res;
    if ((any_cover & full_mask) != full_mask) return res;

    const uint32_t dp_size = full_mask + 1u;
    std::vector<double> dp(dp_size);
    std::vector<double> dp_prev(dp_size);
    std::vector<int> from_item(dp_size);
    std::vector<uint32_t> from_cell(dp_size);

    double t = 0.0;
    std::vector<char> in_set(k, 0);
    double ratio = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        // Items with positive parametric value join unconditionally.
        uint32_t base_cover = 0;
        std::fill(in_set.begin(), in_set.end(), 0);
        for (size_t idx = 0; idx < k; ++idx) {
            const double val = items[idx].weight * (items[idx].margin - t);
            if (val > 0.0) {
                in_set[idx] = 1;
                base_cover |= items[idx].mask;
            }
        }
        const uint32_t need = full_mask & ~base_cover;
        std::fill(dp.begin(), dp.end(), -kInf);
        std::fill(from_item.begin(), from_item.end(), -1);
        dp[0] = 0.0;
        if (need != 0) {
            for (size_t idx = 0; idx < k; ++idx) {
                const double val = items[idx].weight * (items[idx].margin - t);
                if (val > 0.0) continue;
                const uint32_t cov = items[idx].mask & need;
                if (cov == 0) continue;
                dp_prev = dp;
                for (uint32_t c = 0; c <= need; ++c) {
                    if ((c & need) != c || dp_prev[c] == -kInf) continue;
                    const uint32_t nc = c | cov;
                    if (dp_prev[c] + val > dp[nc]) {
                        dp[nc] = dp_prev[c] + val;
                        from_item[nc] = static_cast<int>(idx);
                        from_cell[nc] = c;
                    }
                }
            }
            if (dp[need] == -kInf) return res;  // unreachable: any_cover checked
            for (uint32_t c = need; c != 0;) {
                const int idx = from_item[c];
                in_set[static_cast<size_t>(idx)] = 1;
                c = from_cell[c];
            }
        }
        double num = 0.0, den = u0;
        for (size_t idx = 0; idx < k; ++idx) {
            if (!in_set[idx]) continue;
            num += items[idx].weight * items[idx].margin;
            den += items[idx].weight;
        }
        ratio = num / den;
        if (std::abs(ratio - t) <= 1e-14 * std::max(1.0, std::abs(t))) break;
        t = ratio;
    }
    res.feasible = true;
    res.revenue = ratio;
    for (size_t idx = 0; idx < k; ++idx) {
        if (in_set[idx]) res.mask |= 1u << items[idx].contract;
    }
    return res;
}

// Builds the item list for one group from an advertised mask and a context.
void collect_items(const Catalog& cat, const ZContext& zc, uint32_t y_mask, int j,
                   std::vector<AssortmentItem>& out) {
    out.clear();
    uint32_t usable = y_mask & zc.nonneg[static_cast<size_t>(j)];
    while (usable != 0) {
        const uint32_t low = usable & (~usable + 1u);
        const int i = std::countr_zero(low);
        out.push_back(AssortmentItem{i, cat.mask[static_cast<size_t>(i)], zc.w_at(i, j),
                                     zc.r_at(i, j)});
        usable ^= low;
    }
}

struct LeafEval {
    bool feasible = false;
    double profit = 0.0;
    std::vector<uint32_t> xmasks;
};

LeafEval evaluate_leaf(const Instance& inst, const Catalog& cat, const ZContext& zc,
                       uint32_t y_mask) {
    thread_local std::vector<AssortmentItem> items;
    LeafEval ev;
    ev.xmasks.assign(static_cast<size_t>(zc.m), 0u);
    double total = 0.0;
    for (int j = 0; j < zc.m; ++j) {
        collect_items(cat, zc, y_mask, j, items);
        const AssortmentResult res = best_assortment(items, inst.u0[static_cast<size_t>(j)],
                                                     cat.full_mask());
        if (!res.feasible) return ev;
        total += inst.lambda[static_cast<size_t>(j)] * res.revenue;
        ev.xmasks[static_cast<size_t>(j)] = res.mask;
    }
    ev.feasible = true;
    ev.profit = total - inst.theta * std::popcount(y_mask);
    return ev;
}

// ---------------------------------------------------------------------------
// Branch-and-bound over advertised sets for one discount assignment.
// ---------------------------------------------------------------------------

struct BnbRun {
    const Instance* inst = nullptr;
    const Catalog* cat = nullptr;
    const ZContext* zc = nullptr;
    const std::vector<int>* levels = nullptr;
    ChampionSet* pool = nullptr;
    double floor_threshold = -kInf;  // snapshot of incumbents found elsewhere
    bool canonical_complete = false;
    long long nodes = 0;
    const Deadline* deadline = nullptr;
    bool stopped = false;
};

Decision assemble_decision(const Catalog& cat, int m, int l, uint32_t y_mask,
                           const std::vector<uint32_t>& xmasks, const std::vector<int>& levels,
                           bool canonical_complete) {
    Decision dec = make_decision(cat.n, m, l, y_mask, xmasks, levels);
    if (canonical_complete) {
        std::vector<int> lv = levels;
        complete_levels(cat, l, dec.y, lv);
        set_z_from_levels(dec, lv);
    }
    return dec;
}

void bnb(BnbRun& run, int idx, uint32_t in_mask) {
    if (run.stopped) return;
    ++run.nodes;
    if ((run.nodes & 0xFFF) == 0 && run.deadline != nullptr && run.deadline->expired()) {
        run.stopped = true;
        return;
    }
    const int n = run.zc->n;
    const uint32_t all = (n == 32) ? 0xFFFFFFFFu : ((1u << n) - 1u);
    const uint32_t und_mask = all & ~((1u << idx) - 1u);
    const double threshold = std::max(run.floor_threshold, run.pool->prune_threshold());
    const double bound = bound_from_context(*run.inst, *run.cat, *run.zc, in_mask, und_mask);
    if (bound == -kInf || bound < threshold) return;
    if (idx == n) {
        if (in_mask == 0) return;  // coverage needs at least one contract
        const LeafEval ev = evaluate_leaf(*run.inst, *run.cat, *run.zc, in_mask);
        if (!ev.feasible) return;
        if (run.pool->admissible(ev.profit)) {
            run.pool->add(ev.profit, assemble_decision(*run.cat, run.inst->m, run.inst->l,
                                                       in_mask, ev.xmasks, *run.levels,
                                                       run.canonical_complete));
        }
        return;
    }
    bnb(run, idx + 1, in_mask | (1u << idx));
    bnb(run, idx + 1, in_mask);
}

// Runs the branch-and-bound for one discount assignment against a local pool.
// Returns false when the deadline interrupted the run.
bool run_assignment(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                    const std::vector<int>& levels, ChampionSet& pool, double floor_threshold,
                    bool canonical_complete, const Deadline& deadline, long long* nodes) {
    const ZContext zc = make_zcontext(wt, levels);
    BnbRun run;
    run.inst = &inst;
    run.cat = &cat;
    run.zc = &zc;
    run.levels = &levels;
    run.pool = &pool;
    run.floor_threshold = floor_threshold;
    run.canonical_complete = canonical_complete;
    run.deadline = &deadline;
    bnb(run, 0, 0);
    *nodes += run.nodes;
    return !run.stopped;
}

// Seeds the pool with the full-bundle-only design when it is feasible, so the
// search always starts with an incumbent.
void seed_full_bundle(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                      const std::vector<int>& levels, bool canonical_complete,
                      ChampionSet& pool) {
    const uint32_t y_mask = 1u << (cat.n - 1);
    const DesignEval ev = evaluate_design(inst, cat, wt, levels, y_mask);
    if (!ev.feasible) return;
    pool.add(ev.profit,
             assemble_decision(cat, inst.m, inst.l, y_mask, ev.xmasks, levels, canonical_complete));
}

}  // namespace

// ---------------------------------------------------------------------------
// ChampionSet.
// ---------------------------------------------------------------------------

// Entries kept: everything with profit >= best - 2*tol(best).  The margin is
// twice the comparison tolerance so that membership of the final tie set
// (profit >= best - tol) never depends on the order candidates arrived in.
double ChampionSet::prune_threshold() const {
    if (ties_.empty()) return -kInf;
    return best_ - 2.0 * profit_tol(best_, best_);
}

bool ChampionSet::admissible(double profit) const {
    return ties_.empty() || profit >= prune_threshold();
}

void ChampionSet::add(double profit, const Decision& dec) {
    if (ties_.empty()) {
        best_ = profit;
        ties_.emplace_back(profit, dec);
        return;
    }
    if (profit > best_) {
        best_ = profit;
        const double keep = prune_threshold();
        ties_.erase(std::remove_if(ties_.begin(), ties_.end(),
                                   [keep](const std::pair<double, Decision>& e) {
                                       return e.first < keep;
                                   }),
                    ties_.end());
    } else if (profit < prune_threshold()) {
        return;
    }
    for (auto& entry : ties_) {
        if (entry.second == dec) {
            entry.first = std::max(entry.first, profit);
            return;
        }
    }
    ties_.emplace_back(profit, dec);
}

void ChampionSet::merge(const ChampionSet& other) {
    for (const auto& entry : other.ties_) add(entry.first, entry.second);
}

const Decision& ChampionSet::winner() const {
    if (ties_.empty()) throw Error("internal", "winner() on empty champion set");
    const double cut = best_ - profit_tol(best_, best_);
    const std::pair<double, Decision>* win = nullptr;
    for (const auto& entry : ties_) {
        if (entry.first < cut) continue;
        if (win == nullptr || tie_break_less(entry.second, win->second)) win = &entry;
    }
    return win->second;
}

double ChampionSet::winner_profit() const {
    if (ties_.empty()) throw Error("internal", "winner_profit() on empty champion set");
    const double cut = best_ - profit_tol(best_, best_);
    const std::pair<double, Decision>* win = nullptr;
    for (const auto& entry : ties_) {
        if (entry.first < cut) continue;
        if (win == nullptr || tie_break_less(entry.second, win->second)) win = &entry;
    }
    return win->first;
}

// ---------------------------------------------------------------------------
// Enumeration.
// ---------------------------------------------------------------------------

long long count_monotone_levels(const Catalog& cat, int l) {
    return count_monotone_levels(cat, l, (cat.n == 32) ? 0xFFFFFFFFu : ((1u << cat.n) - 1u));
}

long long count_monotone_levels(const Catalog& cat, int l, uint32_t subset_mask) {
    if (l < 1) throw Error("invalid-instance", "at least one discount level required");
    return count_monotone_core(classes_of(cat, subset_mask), l);
}

std::vector<std::vector<int>> enumerate_monotone_levels(const Catalog& cat, int l,
                                                        long long cap) {
    return enumerate_monotone_levels(cat, l, (cat.n == 32) ? 0xFFFFFFFFu : ((1u << cat.n) - 1u),
                                     cap);
}

std::vector<std::vector<int>> enumerate_monotone_levels(const Catalog& cat, int l,
                                                        uint32_t subset_mask, long long cap) {
    const auto classes = classes_of(cat, subset_mask);
    const long long count = count_monotone_core(classes, l);
    if (count > cap) {
        throw Error("cap", "monotone assignment count " + std::to_string(count) +
                               " exceeds cap " + std::to_string(cap));
    }
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<size_t>(count));
    std::vector<int> levels(static_cast<size_t>(cat.n), 0);
    walk_monotone(classes, l, 0, 0, levels, [&out](const std::vector<int>& lv) {
        out.push_back(lv);
        return true;
    });
    return out;
}

bool for_each_monotone_levels(const Catalog& cat, int l, uint32_t subset_mask,
                              const std::function<bool(const std::vector<int>&)>& visit) {
    const auto classes = classes_of(cat, subset_mask);
    std::vector<int> levels(static_cast<size_t>(cat.n), 0);
    return walk_monotone(classes, l, 0, 0, levels, visit);
}

// ---------------------------------------------------------------------------
// Assortment and design evaluation.
// ---------------------------------------------------------------------------

AssortmentResult best_assortment(const std::vector<AssortmentItem>& items, double u0,
                                 uint32_t full_mask) {
    if (items.empty()) return AssortmentResult{};
    if (items.size() <= 16) return assortment_exhaustive(items, u0, full_mask);
    return assortment_parametric(items, u0, full_mask);
}

DesignEval evaluate_design(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                           const std::vector<int>& levels, uint32_t y_mask) {
    const ZContext zc = make_zcontext(wt, levels);
    const LeafEval ev = evaluate_leaf(inst, cat, zc, y_mask);
    DesignEval out;
    out.feasible = ev.feasible;
    out.profit = ev.profit;
    out.xmasks = ev.xmasks;
    return out;
}

double design_node_bound(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                         const std::vector<int>& levels, uint32_t in_mask, uint32_t und_mask) {
    const ZContext zc = make_zcontext(wt, levels);
    return bound_from_context(inst, cat, zc, in_mask, und_mask);
}

// ---------------------------------------------------------------------------
// Solvers.
// ---------------------------------------------------------------------------

CertifiedSolution solve_fixed_levels(const Instance& inst, const Catalog& cat,
                                     const std::vector<int>& levels, double budget_sec) {
    if (budget_sec <= 0.0) throw Error("budget", "time budget must be positive");
    if (static_cast<int>(levels.size()) != cat.n) {
        throw Error("invalid-levels", "expected one level per contract");
    }
    for (int lv : levels) {
        if (lv < 0 || lv >= inst.l) throw Error("invalid-levels", "level outside ladder");
    }
    if (!levels_monotone(cat, levels)) {
        throw Error("invalid-levels", "levels violate the size-monotone rule");
    }
    const auto start = std::chrono::steady_clock::now();
    const Deadline deadline = Deadline::after(budget_sec);
    const WeightTables wt = WeightTables::build(inst, cat);

    ChampionSet pool;
    seed_full_bundle(inst, cat, wt, levels, /*canonical_complete=*/false, pool);
    long long nodes = 0;
    const bool finished = run_assignment(inst, cat, wt, levels, pool, -kInf,
                                         /*canonical_complete=*/false, deadline, &nodes);

    CertifiedSolution sol;
    sol.nodes = nodes;
    sol.z_explored = 1;
    sol.z_skipped = 0;
    sol.elapsed_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (pool.empty()) {
        if (!finished) throw Error("budget", "time budget expired before any feasible design");
        throw Error("infeasible", "no advertised set satisfies coverage with nonnegative weights");
    }
    sol.decision = pool.winner();
    sol.profit = pool.winner_profit();
    sol.certificate = finished ? "proven-optimal" : "best-found";
    return sol;
}

void shared_design_search(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                          const std::vector<int>& levels, ChampionSet& pool, long long* nodes,
                          bool canonical_complete) {
    const int n = cat.n;
    if (n > 22) throw Error("cap", "shared design scan supports at most 22 contracts");
    const ZContext zc = make_zcontext(wt, levels);
    uint32_t usable_all = (1u << n) - 1u;
    for (int j = 0; j < zc.m; ++j) usable_all &= zc.nonneg[static_cast<size_t>(j)];

    const uint32_t subsets = 1u << n;
    std::vector<uint32_t> cover(subsets, 0u);
    std::vector<double> num(static_cast<size_t>(zc.m) * subsets, 0.0);
    std::vector<double> den(static_cast<size_t>(zc.m) * subsets, 0.0);
    for (uint32_t s = 1; s < subsets; ++s) {
        const uint32_t low = s & (~s + 1u);
        const int i = std::countr_zero(low);
        const uint32_t rest = s ^ low;
        cover[s] = cover[rest] | cat.mask[static_cast<size_t>(i)];
        for (int j = 0; j < zc.m; ++j) {
            const size_t at = static_cast<size_t>(j) * subsets + s;
            const size_t prev = static_cast<size_t>(j) * subsets + rest;
            num[at] = num[prev] + zc.w_at(i, j) * zc.r_at(i, j);
            den[at] = den[prev] + zc.w_at(i, j);
        }
    }

    const uint32_t full = cat.full_mask();
    std::vector<uint32_t> xmasks(static_cast<size_t>(zc.m), 0u);
    for (uint32_t s = 1; s < subsets; ++s) {
        if (nodes != nullptr) ++*nodes;
        if ((s & ~usable_all) != 0) continue;
        if ((cover[s] & full) != full) continue;
        double profit = -inst.theta * std::popcount(s);
        for (int j = 0; j < zc.m; ++j) {
            const size_t at = static_cast<size_t>(j) * subsets + s;
            profit += inst.lambda[static_cast<size_t>(j)] *
                      (num[at] / (inst.u0[static_cast<size_t>(j)] + den[at]));
        }
        if (!pool.admissible(profit)) continue;
        std::fill(xmasks.begin(), xmasks.end(), s);
        pool.add(profit, assemble_decision(cat, inst.m, inst.l, s, xmasks, levels,
                                           canonical_complete));
    }
}

CertifiedSolution solve_exact(const Instance& inst, const Catalog& cat, double budget_sec) {
    if (budget_sec <= 0.0) throw Error("budget", "time budget must be positive");
    validate_instance(inst);
    const auto start = std::chrono::steady_clock::now();
    const Deadline deadline = Deadline::after(budget_sec);
    const WeightTables wt = WeightTables::build(inst, cat);
    const auto classes = classes_of(cat, (cat.n == 32) ? 0xFFFFFFFFu : ((1u << cat.n) - 1u));
    const long long total = count_monotone_core(classes, inst.l);

    ChampionSet pool;
    {
        const std::vector<int> lv0 = initial_levels(cat, inst.l);
        seed_full_bundle(inst, cat, wt, lv0, /*canonical_complete=*/true, pool);
    }

    long long nodes = 0;
    long long explored = 0;
    long long skipped = 0;
    bool interrupted = false;

    constexpr long long kMaterializeCap = 200'000;
    if (total <= kMaterializeCap) {
        // Materialize all assignments, order by root bound (best first) so the
        // incumbent sharpens early, then process in waves of fixed chunks.
        // Each chunk works against a frozen snapshot plus its own finds, and
        // chunks merge in index order, so the champion pool's final content is
        // independent of the number of worker threads.
        std::vector<std::vector<int>> zs;
        zs.reserve(static_cast<size_t>(total));
        {
            std::vector<int> levels(static_cast<size_t>(cat.n), 0);
            walk_monotone(classes, inst.l, 0, 0, levels, [&zs](const std::vector<int>& lv) {
                zs.push_back(lv);
                return true;
            });
        }
        std::vector<double> root_bound(zs.size());
        std::vector<int> order(zs.size());
        const uint32_t all = (cat.n == 32) ? 0xFFFFFFFFu : ((1u << cat.n) - 1u);
        for (size_t zi = 0; zi < zs.size(); ++zi) {
            const ZContext zc = make_zcontext(wt, zs[zi]);
            root_bound[zi] = bound_from_context(inst, cat, zc, 0, all);
            order[zi] = static_cast<int>(zi);
        }
        std::sort(order.begin(), order.end(), [&root_bound](int a, int b) {
            if (root_bound[static_cast<size_t>(a)] != root_bound[static_cast<size_t>(b)])
                return root_bound[static_cast<size_t>(a)] > root_bound[static_cast<size_t>(b)];
            return a < b;
        });

        constexpr size_t kChunk = 16;
        const size_t nchunks = (zs.size() + kChunk - 1) / kChunk;
        size_t next_chunk = 0;
        int wave_width = 1;
#ifdef JDPEW_HAVE_OPENMP
        wave_width = std::max(1, omp_get_max_threads());
#endif
        while (next_chunk < nchunks && !interrupted) {
            const size_t wave = std::min(static_cast<size_t>(wave_width), nchunks - next_chunk);
            const double snapshot = pool.prune_threshold();
            std::vector<ChampionSet> local(wave);
            std::vector<long long> local_nodes(wave, 0);
            std::vector<long long> local_explored(wave, 0);
            std::vector<long long> local_skipped(wave, 0);
            std::vector<char> local_stop(wave, 0);
#ifdef JDPEW_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (size_t c = 0; c < wave; ++c) {
                const size_t begin = (next_chunk + c) * kChunk;
                const size_t end = std::min(begin + kChunk, zs.size());
                for (size_t pos = begin; pos < end; ++pos) {
                    if (deadline.expired()) {
                        local_stop[c] = 1;
                        local_skipped[c] += static_cast<long long>(end - pos);
                        break;
                    }
                    const int zi = order[pos];
                    const double thr = std::max(snapshot, local[c].prune_threshold());
                    if (root_bound[static_cast<size_t>(zi)] == -kInf ||
                        root_bound[static_cast<size_t>(zi)] < thr) {
                        ++local_skipped[c];
                        continue;
                    }
                    ++local_explored[c];
                    if (!run_assignment(inst, cat, wt, zs[static_cast<size_t>(zi)], local[c],
                                        snapshot, /*canonical_complete=*/true, deadline,
                                        &local_nodes[c])) {
                        local_stop[c] = 1;
                        local_skipped[c] += static_cast<long long>(end - pos - 1);
                        break;
                    }
                }
            }
            for (size_t c = 0; c < wave; ++c) {
                pool.merge(local[c]);
                nodes += local_nodes[c];
                explored += local_explored[c];
                skipped += local_skipped[c];
                if (local_stop[c] != 0) interrupted = true;
            }
            next_chunk += wave;
        }
        if (interrupted) {
            for (size_t c = next_chunk; c < nchunks; ++c) {
                const size_t begin = c * kChunk;
                const size_t end = std::min(begin + kChunk, zs.size());
                skipped += static_cast<long long>(end - begin);
            }
        }
    } else {
        // Too many assignments to materialize: stream them in canonical order
        // with the continuously updated incumbent threshold.
        const uint32_t all = (cat.n == 32) ? 0xFFFFFFFFu : ((1u << cat.n) - 1u);
        std::vector<int> levels(static_cast<size_t>(cat.n), 0);
        const bool completed =
            walk_monotone(classes, inst.l, 0, 0, levels, [&](const std::vector<int>& lv) {
                if (deadline.expired()) return false;
                const ZContext zc = make_zcontext(wt, lv);
                const double thr = pool.prune_threshold();
                const double root = bound_from_context(inst, cat, zc, 0, all);
                if (root == -kInf || root < thr) {
                    ++skipped;
                    return true;
                }
                ++explored;
                return run_assignment(inst, cat, wt, lv, pool, -kInf,
                                      /*canonical_complete=*/true, deadline, &nodes);
            });
        if (!completed) {
            interrupted = true;
            skipped = total - explored;
        }
    }

    CertifiedSolution sol;
    sol.nodes = nodes;
    sol.z_explored = explored;
    sol.z_skipped = skipped;
    sol.elapsed_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (pool.empty()) {
        if (interrupted) throw Error("budget", "time budget expired before any feasible decision");
        throw Error("infeasible", "no decision satisfies coverage with nonnegative weights");
    }
    sol.decision = pool.winner();
    sol.profit = pool.winner_profit();
    sol.certificate = interrupted ? "best-found" : "proven-optimal";
    return sol;
}

// ---------------------------------------------------------------------------
// Independent exhaustive reference.
// ---------------------------------------------------------------------------

CertifiedSolution brute_force(const Instance& inst, const Catalog& cat) {
    validate_instance(inst);
    const auto start = std::chrono::steady_clock::now();
    const int n = cat.n;
    const int m = inst.m;
    const int l = inst.l;

    // Scale guards: all l^n level vectors are tried, and each surviving
    // assignment costs one submask scan (3^n) per group per advertised set.
    double tuples = std::pow(static_cast<double>(l), n);
    if (tuples > 2.0e6) throw Error("cap", "level grid too large for the exhaustive reference");

    std::vector<std::vector<int>> monotone;
    {
        std::vector<int> lv(static_cast<size_t>(n), 0);
        while (true) {
            if (levels_monotone(cat, lv)) monotone.push_back(lv);
            int pos = n - 1;
            while (pos >= 0 && lv[static_cast<size_t>(pos)] == l - 1) {
                lv[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++lv[static_cast<size_t>(pos)];
        }
    }
    const double scan_cost = static_cast<double>(monotone.size()) * std::pow(3.0, n) *
                             static_cast<double>(m);
    if (scan_cost > 2.0e9) throw Error("cap", "search grid too large for the exhaustive reference");

    // Weights and margins through the public model operations.
    Decision probe = Decision::zeros(n, m, l);
    std::vector<double> claim(static_cast<size_t>(n) * m, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            double sum = 0.0;
            for (int k = 0; k < cat.w; ++k) {
                if (cat.contains(i, k)) sum += inst.at(inst.f, k, j) * inst.at(inst.c, k, j);
            }
            claim[static_cast<size_t>(i) * m + j] = sum;
        }
    }

    ChampionSet pool;
    long long pairs = 0;
    const uint32_t full = cat.full_mask();
    std::vector<double> wgt(static_cast<size_t>(n) * m);
    std::vector<double> mrg(static_cast<size_t>(n) * m);
    std::vector<uint32_t> nonneg(static_cast<size_t>(m));
    std::vector<uint32_t> xmasks(static_cast<size_t>(m));
    std::vector<double> revenue(static_cast<size_t>(m));

    for (const auto& lv : monotone) {
        set_z_from_levels(probe, lv);
        std::fill(nonneg.begin(), nonneg.end(), 0u);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                const double price = contract_price(inst, cat, i, j, probe);
                const double u = preference_weight(inst, cat, i, j, price);
                wgt[static_cast<size_t>(i) * m + j] = u;
                mrg[static_cast<size_t>(i) * m + j] = price - claim[static_cast<size_t>(i) * m + j];
                if (u >= 0.0) nonneg[static_cast<size_t>(j)] |= 1u << i;
            }
        }
        const uint32_t ymax = (1u << n) - 1u;
        for (uint32_t y = 1; y <= ymax; ++y) {
            ++pairs;
            bool ok = true;
            double total = 0.0;
            for (int j = 0; j < m && ok; ++j) {
                const uint32_t usable = y & nonneg[static_cast<size_t>(j)];
                double best = -kInf;
                // Pass 1: best coverage-feasible revenue over sub-assortments.
                for (uint32_t s = usable; s != 0; s = (s - 1) & usable) {
                    uint32_t cover = 0;
                    double num = 0.0, den = inst.u0[static_cast<size_t>(j)];
                    for (uint32_t rem = s; rem != 0;) {
                        const uint32_t low = rem & (~rem + 1u);
                        const int i = std::countr_zero(low);
                        cover |= cat.mask[static_cast<size_t>(i)];
                        num += wgt[static_cast<size_t>(i) * m + j] *
                               mrg[static_cast<size_t>(i) * m + j];
                        den += wgt[static_cast<size_t>(i) * m + j];
                        rem ^= low;
                    }
                    if ((cover & full) != full) continue;
                    best = std::max(best, num / den);
                }
                if (best == -kInf) {
                    ok = false;
                    break;
                }
                // Pass 2: canonical column among revenue ties.
                const double tol = assort_tie_tol(best);
                uint32_t chosen = 0;
                bool have = false;
                double chosen_rev = 0.0;
                for (uint32_t s = usable; s != 0; s = (s - 1) & usable) {
                    uint32_t cover = 0;
                    double num = 0.0, den = inst.u0[static_cast<size_t>(j)];
                    for (uint32_t rem = s; rem != 0;) {
                        const uint32_t low = rem & (~rem + 1u);
                        const int i = std::countr_zero(low);
                        cover |= cat.mask[static_cast<size_t>(i)];
                        num += wgt[static_cast<size_t>(i) * m + j] *
                               mrg[static_cast<size_t>(i) * m + j];
                        den += wgt[static_cast<size_t>(i) * m + j];
                        rem ^= low;
                    }
                    if ((cover & full) != full) continue;
                    const double rev = num / den;
                    if (rev < best - tol) continue;
                    if (!have || xcol_less(s, chosen, n)) {
                        chosen = s;
                        have = true;
                        chosen_rev = rev;
                    }
                }
                xmasks[static_cast<size_t>(j)] = chosen;
                revenue[static_cast<size_t>(j)] = chosen_rev;
            }
            if (!ok) continue;
            for (int j = 0; j < m; ++j) {
                total += inst.lambda[static_cast<size_t>(j)] * revenue[static_cast<size_t>(j)];
            }
            total -= inst.theta * std::popcount(y);
            if (!pool.admissible(total)) continue;
            Decision dec = make_decision(n, m, l, y, xmasks, lv);
            std::vector<int> completed = lv;
            complete_levels(cat, l, dec.y, completed);
            set_z_from_levels(dec, completed);
            pool.add(expected_profit(inst, cat, dec), dec);
        }
    }

    CertifiedSolution sol;
    sol.nodes = pairs;
    sol.z_explored = static_cast<long long>(monotone.size());
    sol.z_skipped = 0;
    sol.elapsed_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (pool.empty()) {
        throw Error("infeasible", "no decision satisfies coverage with nonnegative weights");
    }
    sol.decision = pool.winner();
    sol.profit = pool.winner_profit();
    sol.certificate = "proven-optimal";
    return sol;
}

}  // namespace jdpew

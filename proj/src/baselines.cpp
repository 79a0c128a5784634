#include "jdpew/baselines.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "jdpew/common.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/model.hpp"
#include "jdpew/rng.hpp"

namespace jdpew {

std::string to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::kBm1: return "bm1";
        case BaselineKind::kBm2: return "bm2";
        case BaselineKind::kBm3: return "bm3";
    }
    throw Error("internal", "unknown baseline kind");
}

BaselineKind baseline_from_string(const std::string& s) {
    if (s == "bm1") return BaselineKind::kBm1;
    if (s == "bm2") return BaselineKind::kBm2;
    if (s == "bm3") return BaselineKind::kBm3;
    throw Error("invalid-argument", "unknown baseline '" + s + "'");
}

namespace {

CertifiedSolution solve_bm1(const Instance& inst, const Catalog& cat) {
    const auto start = std::chrono::steady_clock::now();
    const WeightTables wt = WeightTables::build(inst, cat);
    const std::vector<int> levels = initial_levels(cat, inst.l);
    ChampionSet pool;
    long long nodes = 0;
    shared_design_search(inst, cat, wt, levels, pool, &nodes);
    CertifiedSolution sol;
    sol.nodes = nodes;
    sol.z_explored = 1;
    sol.elapsed_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (pool.empty()) {
        throw Error("infeasible", "no shared recommendation set covers every subsystem "
                                  "with nonnegative weights at the starting discounts");
    }
    sol.decision = pool.winner();
    sol.profit = pool.winner_profit();
    sol.certificate = "proven-optimal";
    return sol;
}

CertifiedSolution solve_bm3(const Instance& inst, const Catalog& cat, double budget_sec) {
    const auto start = std::chrono::steady_clock::now();
    const bool budgeted = budget_sec < kDefaultBudgetSec;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(budget_sec));
    const WeightTables wt = WeightTables::build(inst, cat);
    const uint32_t all = (1u << cat.n) - 1u;
    const long long total = count_monotone_levels(cat, inst.l);

    ChampionSet pool;
    long long nodes = 0;
    long long explored = 0;
    long long skipped = 0;
    const bool completed =
        for_each_monotone_levels(cat, inst.l, all, [&](const std::vector<int>& lv) {
            if (budgeted && std::chrono::steady_clock::now() >= deadline) return false;
            const double bound = design_node_bound(inst, cat, wt, lv, 0, all);
            if (bound == -std::numeric_limits<double>::infinity() ||
                bound < pool.prune_threshold()) {
                ++skipped;
                return true;
            }
            ++explored;
            shared_design_search(inst, cat, wt, lv, pool, &nodes, /*canonical_complete=*/true);
            return true;
        });

    CertifiedSolution sol;
    sol.nodes = nodes;
    sol.z_explored = explored;
    sol.z_skipped = completed ? skipped : total - explored;
    sol.elapsed_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (pool.empty()) {
        if (!completed) throw Error("budget", "time budget expired before any feasible decision");
        throw Error("infeasible", "no shared recommendation set covers every subsystem "
                                  "with nonnegative weights at any discount assignment");
    }
    sol.decision = pool.winner();
    sol.profit = pool.winner_profit();
    sol.certificate = completed ? "proven-optimal" : "best-found";
    return sol;
}

}  // namespace

CertifiedSolution solve_baseline(const Instance& inst, const Catalog& cat, BaselineKind kind,
                                 double budget_sec) {
    if (budget_sec <= 0.0) throw Error("budget", "time budget must be positive");
    validate_instance(inst);
    switch (kind) {
        case BaselineKind::kBm1: return solve_bm1(inst, cat);
        case BaselineKind::kBm2:
            return solve_fixed_levels(inst, cat, initial_levels(cat, inst.l), budget_sec);
        case BaselineKind::kBm3: return solve_bm3(inst, cat, budget_sec);
    }
    throw Error("internal", "unknown baseline kind");
}

// ---------------------------------------------------------------------------
// Genetic algorithm.
// ---------------------------------------------------------------------------

int ga_elite_count(const GaConfig& cfg) {
    const int e = static_cast<int>(std::lround(cfg.elite_fraction * cfg.population));
    return std::clamp(e, 0, cfg.population);
}

Decision ga_repair(const Instance& inst, const Catalog& cat, const WeightTables& wt,
                   Decision d) {
    const int n = cat.n;
    const int m = inst.m;
    const int l = inst.l;
    const int full = n - 1;  // the full bundle is the last contract
    const std::vector<int> z0 = z0_levels(cat, l);

    // 1. Advertising link.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (d.x[static_cast<size_t>(i) * m + j] != 0) d.y[static_cast<size_t>(i)] = 1;
        }
    }

    // 2. One level per contract: lowest set level, starting rule for empty rows.
    std::vector<int> levels(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        int lowest = -1;
        for (int h = 0; h < l; ++h) {
            if (d.z[static_cast<size_t>(i) * l + h] != 0) {
                lowest = h;
                break;
            }
        }
        levels[static_cast<size_t>(i)] = lowest >= 0 ? lowest : z0[static_cast<size_t>(i)];
    }

    // 3. Size-monotone discounts.
    repair_lower_larger(cat, levels);

    // 4 + 5 to a fixpoint: coverage and nonnegative recommended weights.
    // Levels only deepen and deepening a discount only raises weights, so a
    // contract recommended with nonnegative weight stays valid and the loop
    // terminates.
    const uint32_t full_cover = cat.full_mask();
    bool changed = true;
    while (changed) {
        changed = false;

        for (int j = 0; j < m; ++j) {
            uint32_t cover = 0;
            for (int i = 0; i < n; ++i) {
                if (d.x[static_cast<size_t>(i) * m + j] != 0) cover |= cat.mask[static_cast<size_t>(i)];
            }
            while ((cover & full_cover) != full_cover) {
                const uint32_t missing = full_cover & ~cover;
                int pick = -1;
                double pick_cost = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (d.y[static_cast<size_t>(i)] == 0) continue;
                    if (d.x[static_cast<size_t>(i) * m + j] != 0) continue;
                    if ((cat.mask[static_cast<size_t>(i)] & missing) == 0) continue;
                    if (wt.wgt(i, j, levels[static_cast<size_t>(i)]) < 0.0) continue;
                    const double cost = wt.chat[static_cast<size_t>(i) * m + j];
                    if (pick < 0 || cost < pick_cost) {
                        pick = i;
                        pick_cost = cost;
                    }
                }
                if (pick < 0) {
                    d.y[static_cast<size_t>(full)] = 1;
                    d.x[static_cast<size_t>(full) * m + j] = 1;
                    cover |= cat.mask[static_cast<size_t>(full)];
                } else {
                    d.x[static_cast<size_t>(pick) * m + j] = 1;
                    cover |= cat.mask[static_cast<size_t>(pick)];
                }
                changed = true;
            }
        }

        for (int i = 0; i < n && !changed; ++i) {
            for (int j = 0; j < m && !changed; ++j) {
                if (d.x[static_cast<size_t>(i) * m + j] == 0) continue;
                if (wt.wgt(i, j, levels[static_cast<size_t>(i)]) >= 0.0) continue;
                int deeper = -1;
                for (int h = levels[static_cast<size_t>(i)] + 1; h < l; ++h) {
                    if (wt.wgt(i, j, h) >= 0.0) {
                        deeper = h;
                        break;
                    }
                }
                if (deeper >= 0) {
                    levels[static_cast<size_t>(i)] = deeper;
                    repair_lower_larger(cat, levels);
                } else if (i == full) {
                    throw Error("repair", "full bundle has negative weight for group " +
                                              std::to_string(j) + " even at the deepest discount");
                } else {
                    d.x[static_cast<size_t>(i) * m + j] = 0;
                    d.y[static_cast<size_t>(full)] = 1;
                    d.x[static_cast<size_t>(full) * m + j] = 1;
                }
                changed = true;
            }
        }
    }

    set_z_from_levels(d, levels);
    return d;
}

namespace {

struct Individual {
    Decision dec;
    double fitness = 0.0;
};

double ga_fitness(const Instance& inst, const WeightTables& wt, const Decision& d) {
    return profit_from_levels(inst, wt, d.x, d.y, levels_from_z(d));
}

Decision random_pattern(SeqRng& rng, const Catalog& cat, int m, int l) {
    const int n = cat.n;
    Decision d = Decision::zeros(n, m, l);
    // Ramped bit densities: each individual draws its own advertising and
    // recommendation densities, spreading the population across sparse and
    // dense structures instead of clustering at half-full patterns.
    const double py = rng.u01();
    const double px = rng.u01();
    for (int i = 0; i < n; ++i) d.y[static_cast<size_t>(i)] = rng.bernoulli(py) ? 1 : 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            d.x[static_cast<size_t>(i) * m + j] = rng.bernoulli(px) ? 1 : 0;
        }
    }
    // z: draw one level per contract, sort ascending, and hand the levels out
    // across contracts in ascending size order.  The result is monotone by
    // construction, so repair never has to lift levels and the initial
    // population is not biased toward deep discounts.
    std::vector<int> drawn(static_cast<size_t>(n));
    for (auto& v : drawn) v = rng.below(l);
    std::sort(drawn.begin(), drawn.end());
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&cat](int a, int b) {
        if (cat.size[static_cast<size_t>(a)] != cat.size[static_cast<size_t>(b)]) {
            return cat.size[static_cast<size_t>(a)] < cat.size[static_cast<size_t>(b)];
        }
        return a < b;
    });
    std::vector<int> levels(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) levels[static_cast<size_t>(order[k])] = drawn[static_cast<size_t>(k)];
    set_z_from_levels(d, levels);
    return d;
}

// Gene order for all stochastic operators: y by contract, x contract-major,
// then one gene per z row.  The crossover probability gates the pair; a
// crossing pair mixes every gene uniformly (50/50 swap).
void crossover_pair(SeqRng& rng, double pc, Decision& a, Decision& b) {
    if (!rng.bernoulli(pc)) return;
    const int n = a.n, m = a.m, l = a.l;
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(0.5)) std::swap(a.y[static_cast<size_t>(i)], b.y[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (rng.bernoulli(0.5)) {
                std::swap(a.x[static_cast<size_t>(i) * m + j], b.x[static_cast<size_t>(i) * m + j]);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!rng.bernoulli(0.5)) continue;
        for (int h = 0; h < l; ++h) {
            std::swap(a.z[static_cast<size_t>(i) * l + h], b.z[static_cast<size_t>(i) * l + h]);
        }
    }
}

void mutate(SeqRng& rng, double pm, int l, Decision& d) {
    const int n = d.n, m = d.m;
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(pm)) d.y[static_cast<size_t>(i)] ^= 1;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (rng.bernoulli(pm)) d.x[static_cast<size_t>(i) * m + j] ^= 1;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!rng.bernoulli(pm)) continue;
        const int h = rng.below(l);
        for (int t = 0; t < l; ++t) d.z[static_cast<size_t>(i) * l + t] = (t == h) ? 1 : 0;
    }
}

}  // namespace

GaResult ga_solve(const Instance& inst, const Catalog& cat, const GaConfig& cfg) {
    validate_ga_config(cfg);
    validate_instance(inst);
    const auto start = std::chrono::steady_clock::now();
    const WeightTables wt = WeightTables::build(inst, cat);
    SeqRng rng(cfg.seed);

    GaResult res;
    ChampionSet pool;
    std::vector<Individual> pop(static_cast<size_t>(cfg.population));
    for (auto& ind : pop) {
        ind.dec = ga_repair(inst, cat, wt, random_pattern(rng, cat, inst.m, inst.l));
        ind.fitness = ga_fitness(inst, wt, ind.dec);
        pool.add(ind.fitness, ind.dec);
        ++res.evaluations;
    }

    const int elites = ga_elite_count(cfg);
    double best = pool.best_profit();
    int stale = 0;

    for (int gen = 1; gen <= cfg.n_gen; ++gen) {
        res.generations_run = gen;

        // Rank for elitism: fitness descending, canonical tie-break inside
        // equal fitness, index as the final key.
        std::vector<int> rank(pop.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::sort(rank.begin(), rank.end(), [&pop](int a, int b) {
            const auto& ia = pop[static_cast<size_t>(a)];
            const auto& ib = pop[static_cast<size_t>(b)];
            if (ia.fitness != ib.fitness) return ia.fitness > ib.fitness;
            if (ia.dec != ib.dec) return tie_break_less(ia.dec, ib.dec);
            return a < b;
        });

        std::vector<Individual> next;
        next.reserve(pop.size());
        for (int e = 0; e < elites; ++e) next.push_back(pop[static_cast<size_t>(rank[static_cast<size_t>(e)])]);

        auto tournament = [&]() -> const Individual& {
            const int a = rng.below(cfg.population);
            const int b = rng.below(cfg.population);
            return pop[static_cast<size_t>(
                pop[static_cast<size_t>(a)].fitness >= pop[static_cast<size_t>(b)].fitness ? a : b)];
        };

        while (static_cast<int>(next.size()) < cfg.population) {
            Decision c1 = tournament().dec;
            Decision c2 = tournament().dec;
            crossover_pair(rng, cfg.p_crossover, c1, c2);
            mutate(rng, cfg.p_mutation, inst.l, c1);
            mutate(rng, cfg.p_mutation, inst.l, c2);
            for (Decision* child : {&c1, &c2}) {
                if (static_cast<int>(next.size()) >= cfg.population) break;
                Individual ind;
                ind.dec = ga_repair(inst, cat, wt, std::move(*child));
                ind.fitness = ga_fitness(inst, wt, ind.dec);
                pool.add(ind.fitness, ind.dec);
                ++res.evaluations;
                next.push_back(std::move(ind));
            }
        }
        pop = std::move(next);

        const double now_best = pool.best_profit();
        if (now_best > best && !profit_close(now_best, best)) {
            best = now_best;
            stale = 0;
        } else {
            ++stale;
        }
        if (stale >= cfg.stagnation_limit) break;
    }

    res.decision = pool.winner();
    res.profit = pool.winner_profit();
    res.elapsed_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace jdpew

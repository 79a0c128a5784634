#pragma once

#include <vector>

#include "jdpew/instance.hpp"

namespace jdpew {

// Per-contract aggregates and (contract, group, level) weight/margin tables.
// All solver hot paths read these instead of recomputing subsystem sums.
struct WeightTables {
    int n = 0, m = 0, l = 0;
    std::vector<double> vhat;    // n*m, attraction sum (mode factor applied)
    std::vector<double> phat;    // n*m, undiscounted bundle price
    std::vector<double> chat;    // n*m, expected claim cost
    std::vector<double> weight;  // n*m*l, preference weight at each level
    std::vector<double> margin;  // n*m*l, price minus claim cost at each level

    static WeightTables build(const Instance& inst, const Catalog& cat);

    double wgt(int i, int j, int h) const { return weight[(i * m + j) * l + h]; }
    double mrg(int i, int j, int h) const { return margin[(i * m + j) * l + h]; }
};

// Profit of a decision given per-contract levels; mirrors the arithmetic of
// expected_profit exactly but skips validation. Callers guarantee coverage
// and nonnegative recommended weights.
double profit_from_levels(const Instance& inst, const WeightTables& wt,
                          const std::vector<uint8_t>& x, const std::vector<uint8_t>& y,
                          const std::vector<int>& levels);

// Assembles a Decision from bitmask advertising, per-group recommendation
// masks, and levels.
Decision make_decision(int n, int m, int l, uint32_t y_mask,
                       const std::vector<uint32_t>& x_masks, const std::vector<int>& levels);

}  // namespace jdpew

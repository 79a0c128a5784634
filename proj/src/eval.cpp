#include "jdpew/eval.hpp"

#include <cmath>

namespace jdpew {

WeightTables WeightTables::build(const Instance& inst, const Catalog& cat) {
    WeightTables t;
    t.n = inst.n;
    t.m = inst.m;
    t.l = inst.l;
    t.vhat.resize(static_cast<size_t>(inst.n) * inst.m);
    t.phat.resize(t.vhat.size());
    t.chat.resize(t.vhat.size());
    t.weight.resize(t.vhat.size() * inst.l);
    t.margin.resize(t.vhat.size() * inst.l);

    for (int i = 0; i < inst.n; ++i) {
        double factor = 1.0;
        if (inst.utility_mode == UtilityMode::kDiminishing)
            factor = 1.0 - std::log(static_cast<double>(cat.size[i])) / 6.0;
        for (int j = 0; j < inst.m; ++j) {
            double vh = 0.0, ph = 0.0, ch = 0.0;
            for (int k = 0; k < inst.w; ++k) {
                if (!cat.contains(i, k)) continue;
                vh += inst.at(inst.v, k, j);
                ph += inst.at(inst.p0, k, j);
                ch += inst.at(inst.f, k, j) * inst.at(inst.c, k, j);
            }
            size_t ij = static_cast<size_t>(i) * inst.m + j;
            t.vhat[ij] = vh * factor;
            t.phat[ij] = ph;
            t.chat[ij] = ch;
            for (int h = 0; h < inst.l; ++h) {
                double price = ph * inst.discounts[h];
                t.weight[ij * inst.l + h] = vh * factor - inst.beta[j] * price;
                t.margin[ij * inst.l + h] = price - ch;
            }
        }
    }
    return t;
}

double profit_from_levels(const Instance& inst, const WeightTables& wt,
                          const std::vector<uint8_t>& x, const std::vector<uint8_t>& y,
                          const std::vector<int>& levels) {
    double total = 0.0;
    for (int j = 0; j < inst.m; ++j) {
        double den = inst.u0[j];
        double num = 0.0;
        for (int i = 0; i < inst.n; ++i) {
            if (!x[i * inst.m + j]) continue;
            double u = wt.wgt(i, j, levels[i]);
            den += u;
            num += u * wt.mrg(i, j, levels[i]);
        }
        total += inst.lambda[j] * num / den;
    }
    for (int i = 0; i < inst.n; ++i)
        if (y[i]) total -= inst.theta;
    return total;
}

Decision make_decision(int n, int m, int l, uint32_t y_mask,
                       const std::vector<uint32_t>& x_masks, const std::vector<int>& levels) {
    Decision d = Decision::zeros(n, m, l);
    for (int i = 0; i < n; ++i) {
        d.y[i] = (y_mask >> i) & 1u;
        for (int j = 0; j < m; ++j) d.x[i * m + j] = (x_masks[j] >> i) & 1u;
    }
    set_z_from_levels(d, levels);
    return d;
}

}  // namespace jdpew

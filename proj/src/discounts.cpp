#include "jdpew/discounts.hpp"

#include <algorithm>

#include "jdpew/common.hpp"

namespace jdpew {

namespace {

// Contract indices grouped by size s = 1..w; within a class, ascending index.
std::vector<std::vector<int>> size_classes(const Catalog& cat) {
    std::vector<std::vector<int>> cls(cat.w + 1);
    for (int i = 0; i < cat.n; ++i) cls[cat.size[i]].push_back(i);
    return cls;
}

}  // namespace

std::vector<int> z0_levels(const Catalog& cat, int l) {
    std::vector<int> levels(cat.n, 0);
    for (int i = 0; i < cat.n; ++i) {
        int highest = 0;
        for (int k = 0; k < cat.w; ++k)
            if (cat.contains(i, k)) highest = k;
        levels[i] = std::min(highest, l - 1);
    }
    return levels;
}

bool levels_monotone(const Catalog& cat, const std::vector<int>& levels) {
    for (int i = 0; i < cat.n; ++i)
        for (int i2 = 0; i2 < cat.n; ++i2)
            if (cat.size[i] > cat.size[i2] && levels[i] < levels[i2]) return false;
    return true;
}

void repair_raise_smaller(const Catalog& cat, std::vector<int>& levels) {
    auto cls = size_classes(cat);
    int cap = INT32_MAX;
    for (int s = cat.w; s >= 1; --s) {
        int low = INT32_MAX;
        for (int i : cls[s]) {
            levels[i] = std::min(levels[i], cap);
            low = std::min(low, levels[i]);
        }
        cap = std::min(cap, low);
    }
}

void repair_lower_larger(const Catalog& cat, std::vector<int>& levels) {
    auto cls = size_classes(cat);
    int floor_level = 0;
    for (int s = 1; s <= cat.w; ++s) {
        int high = 0;
        for (int i : cls[s]) {
            levels[i] = std::max(levels[i], floor_level);
            high = std::max(high, levels[i]);
        }
        floor_level = std::max(floor_level, high);
    }
}

std::vector<int> initial_levels(const Catalog& cat, int l) {
    std::vector<int> levels = z0_levels(cat, l);
    repair_raise_smaller(cat, levels);
    return levels;
}

void complete_levels(const Catalog& cat, int l, const std::vector<uint8_t>& advertised,
                     std::vector<int>& levels) {
    auto cls = size_classes(cat);
    std::vector<int> z0 = z0_levels(cat, l);

    // adv_low[s]: maximum advertised level among sizes < s (lower window edge).
    std::vector<int> adv_low(cat.w + 2, 0);
    int run = 0;
    for (int s = 1; s <= cat.w; ++s) {
        adv_low[s] = run;
        for (int i : cls[s])
            if (advertised[i]) run = std::max(run, levels[i]);
    }

    int cap = l - 1;  // minimum level among all strictly larger contracts
    for (int s = cat.w; s >= 1; --s) {
        // Window is non-empty whenever the advertised rows are monotone
        // among themselves.
        if (adv_low[s] > cap)
            throw Error("invalid-decision", "advertised discount rows are not size-monotone");
        int low = INT32_MAX;
        for (int i : cls[s]) {
            if (!advertised[i]) levels[i] = std::clamp(z0[i], adv_low[s], cap);
            low = std::min(low, levels[i]);
        }
        cap = std::min(cap, low);
    }
}

}  // namespace jdpew

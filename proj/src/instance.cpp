#include "jdpew/instance.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "jdpew/common.hpp"

namespace jdpew {

std::string to_string(UtilityMode mode) {
    return mode == UtilityMode::kLinear ? "linear" : "diminishing";
}

UtilityMode utility_mode_from_string(const std::string& s) {
    if (s == "linear") return UtilityMode::kLinear;
    if (s == "diminishing") return UtilityMode::kDiminishing;
    throw Error("parse", "unknown utility mode '" + s + "'");
}

Catalog Catalog::make(int w) {
    if (w < 1 || w > 30) throw Error("invalid-instance", "subsystem count out of range");
    Catalog cat;
    cat.w = w;
    cat.n = (1 << w) - 1;
    cat.mask.resize(cat.n);
    cat.size.resize(cat.n);
    for (int i = 0; i < cat.n; ++i) {
        cat.mask[i] = static_cast<uint32_t>(i + 1);
        cat.size[i] = std::popcount(cat.mask[i]);
    }
    return cat;
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw Error("invalid-instance", msg);
}

void check_matrix(const std::vector<double>& mat, int w, int m, const std::string& name,
                  double lo, double hi) {
    require(static_cast<int>(mat.size()) == w * m, name + " must be w*m values");
    for (double x : mat) {
        require(std::isfinite(x), name + " has a non-finite entry");
        require(x >= lo && x <= hi, name + " entry out of range");
    }
}

}  // namespace

void validate_instance(const Instance& inst) {
    require(inst.m >= 1, "need at least one customer group");
    require(inst.w >= 1, "need at least one subsystem");
    require(inst.l >= 1, "need at least one discount level");
    require(inst.n == (1 << inst.w) - 1, "contract count must be 2^w - 1");

    require(static_cast<int>(inst.lambda.size()) == inst.m, "lambda must have m entries");
    double lsum = 0.0;
    for (double x : inst.lambda) {
        require(std::isfinite(x) && x >= 0.0, "group shares must be nonnegative");
        lsum += x;
    }
    require(std::abs(lsum - 1.0) <= tol::kLambdaSum, "group shares must sum to 1");

    require(static_cast<int>(inst.u0.size()) == inst.m, "u0 must have m entries");
    for (double x : inst.u0) require(std::isfinite(x) && x > 0.0, "outside attraction must be positive");
    require(static_cast<int>(inst.beta.size()) == inst.m, "beta must have m entries");
    for (double x : inst.beta) require(std::isfinite(x) && x >= 0.0, "price sensitivity must be nonnegative");

    require(static_cast<int>(inst.discounts.size()) == inst.l, "ladder must have l entries");
    for (int h = 0; h < inst.l; ++h) {
        double d = inst.discounts[h];
        require(std::isfinite(d) && d > 0.0 && d <= 1.0, "multipliers must lie in (0, 1]");
        if (h > 0) require(d < inst.discounts[h - 1], "multipliers must strictly decrease");
    }

    check_matrix(inst.v, inst.w, inst.m, "v", 0.0, 1e12);
    check_matrix(inst.p0, inst.w, inst.m, "p0", 0.0, 1e12);
    check_matrix(inst.f, inst.w, inst.m, "f", 0.0, 1.0);
    check_matrix(inst.c, inst.w, inst.m, "c", 0.0, 1e12);

    require(std::isfinite(inst.theta) && inst.theta >= 0.0, "theta must be nonnegative");
}

Decision Decision::zeros(int n, int m, int l) {
    Decision d;
    d.n = n;
    d.m = m;
    d.l = l;
    d.x.assign(static_cast<size_t>(n) * m, 0);
    d.y.assign(n, 0);
    d.z.assign(static_cast<size_t>(n) * l, 0);
    return d;
}

int Decision::advertised_count() const {
    return static_cast<int>(std::accumulate(y.begin(), y.end(), 0));
}

std::vector<int> levels_from_z(const Decision& d) {
    std::vector<int> levels(d.n, -1);
    for (int i = 0; i < d.n; ++i) {
        for (int h = 0; h < d.l; ++h) {
            if (d.z[i * d.l + h]) {
                if (levels[i] >= 0) throw Error("invalid-decision", "discount row is not one-hot");
                levels[i] = h;
            }
        }
        if (levels[i] < 0) throw Error("invalid-decision", "discount row is not one-hot");
    }
    return levels;
}

void set_z_from_levels(Decision& d, const std::vector<int>& levels) {
    std::fill(d.z.begin(), d.z.end(), 0);
    for (int i = 0; i < d.n; ++i) d.z[i * d.l + levels[i]] = 1;
}

namespace {

// Lexicographic order over a 0/1 array; 0 sorts before 1.
int cmp_bits(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    for (size_t p = 0; p < a.size(); ++p) {
        if (a[p] != b[p]) return a[p] < b[p] ? -1 : 1;
    }
    return 0;
}

}  // namespace

bool tie_break_less(const Decision& a, const Decision& b) {
    int ca = a.advertised_count(), cb = b.advertised_count();
    if (ca != cb) return ca < cb;
    if (int c = cmp_bits(a.y, b.y)) return c < 0;
    if (int c = cmp_bits(a.x, b.x)) return c < 0;
    return cmp_bits(a.z, b.z) < 0;
}

bool candidate_better(double profit_a, const Decision& a, double profit_b, const Decision& b) {
    if (profit_close(profit_a, profit_b)) return tie_break_less(a, b);
    return profit_a > profit_b;
}

}  // namespace jdpew

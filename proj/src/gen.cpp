#include "jdpew/gen.hpp"

#include <array>
#include <cmath>

#include "jdpew/common.hpp"
#include "jdpew/rng.hpp"

namespace jdpew {

std::string to_string(CustomerCase c) {
    switch (c) {
        case CustomerCase::kUniform: return "uniform";
        case CustomerCase::kDecreasing: return "decreasing";
        default: return "symmetric";
    }
}

std::string to_string(FailureSetting s) {
    switch (s) {
        case FailureSetting::kBaseline: return "baseline";
        case FailureSetting::kHuLow: return "hu-l";
        case FailureSetting::kHuHigh: return "hu-h";
        case FailureSetting::kHeterogeneous: return "heu";
        case FailureSetting::kMixed: return "un-m";
        default: return "correlated";
    }
}

std::string to_string(AttractionDist d) {
    switch (d) {
        case AttractionDist::kUniform: return "uniform";
        case AttractionDist::kNormal: return "normal";
        default: return "power-law";
    }
}

CustomerCase customer_case_from_string(const std::string& s) {
    if (s == "uniform") return CustomerCase::kUniform;
    if (s == "decreasing") return CustomerCase::kDecreasing;
    if (s == "symmetric") return CustomerCase::kSymmetric;
    throw Error("parse", "unknown customer case '" + s + "'");
}

FailureSetting failure_setting_from_string(const std::string& s) {
    if (s == "baseline") return FailureSetting::kBaseline;
    if (s == "hu-l") return FailureSetting::kHuLow;
    if (s == "hu-h") return FailureSetting::kHuHigh;
    if (s == "heu") return FailureSetting::kHeterogeneous;
    if (s == "un-m") return FailureSetting::kMixed;
    if (s == "correlated") return FailureSetting::kCorrelated;
    throw Error("parse", "unknown failure setting '" + s + "'");
}

AttractionDist attraction_dist_from_string(const std::string& s) {
    if (s == "uniform") return AttractionDist::kUniform;
    if (s == "normal") return AttractionDist::kNormal;
    if (s == "power-law") return AttractionDist::kPowerLaw;
    throw Error("parse", "unknown attraction distribution '" + s + "'");
}

namespace {

// Per-group study parameters; group value rises with the index.
constexpr std::array<double, 5> kVLow = {20.0, 30.0, 35.0, 40.0, 45.0};
constexpr std::array<double, 5> kVHigh = {25.0, 35.0, 40.0, 45.0, 50.0};
constexpr std::array<double, 5> kU0 = {300.0, 250.0, 200.0, 100.0, 50.0};
constexpr std::array<double, 5> kBeta = {0.05, 0.04, 0.02, 0.005, 0.0001};

// Claim-cost grid in thousands, row = group, column = subsystem.
constexpr double kCostGrid[5][5] = {
    {0.6, 1.2, 1.8, 3.0, 4.8},
    {3.0, 3.6, 4.2, 5.4, 6.0},
    {6.0, 7.2, 8.4, 9.6, 12.0},
    {12.0, 15.0, 18.0, 21.0, 30.0},
    {30.0, 36.0, 42.0, 48.0, 54.0},
};

// Heterogeneous failure windows per subsystem (clamped at the last row
// beyond five subsystems).
constexpr double kHeuLow[5] = {0.0, 0.02, 0.03, 0.04, 0.05};
constexpr double kHeuHigh[5] = {0.03, 0.05, 0.06, 0.07, 0.08};

// Stream tags for the counter generator; one per sampled field.
enum : uint64_t { kStreamV = 1, kStreamF = 2, kStreamFVec = 3, kStreamFNormal = 4 };

constexpr uint64_t kAttemptCap = 1u << 20;

double claim_cost_entry(int k, int j) {
    if (k < 5) return kCostGrid[j][k] * 1000.0;
    // Continue each group's row linearly past the tabulated subsystems.
    double last = kCostGrid[j][4] * 1000.0;
    double step = (kCostGrid[j][4] - kCostGrid[j][3]) * 1000.0;
    return last + step * (k - 4);
}

double sample_attraction(const CounterRng& rng, const ScenarioSpec& spec, int k, int j) {
    uint64_t cell = static_cast<uint64_t>(k) * spec.m + j;
    double lo = kVLow[j], hi = kVHigh[j];
    switch (spec.attraction_dist) {
        case AttractionDist::kUniform:
            return rng.uniform(kStreamV, cell * kAttemptCap, lo, hi);
        case AttractionDist::kNormal: {
            // Same mean and variance as the uniform window, truncated at
            // three standard deviations.
            double mean = 0.5 * (lo + hi);
            double sd = (hi - lo) / std::sqrt(12.0);
            for (uint64_t a = 0; a < kAttemptCap; ++a) {
                double x = rng.normal(kStreamV, cell * kAttemptCap + a, mean, sd);
                if (x >= mean - 3.0 * sd && x <= mean + 3.0 * sd) return x;
            }
            throw Error("sampling", "truncated normal rejection cap exceeded");
        }
        default: {
            // Pareto with shape 3 and minimum at the window's lower edge,
            // clipped at twice the upper edge.
            double u = rng.u01(kStreamV, cell * kAttemptCap);
            double x = lo * std::pow(1.0 - u, -1.0 / 3.0);
            return std::min(x, 2.0 * hi);
        }
    }
}

double sample_truncated_normal(const CounterRng& rng, uint64_t cell, double mean, double sd,
                               double lo, double hi) {
    for (uint64_t a = 0; a < kAttemptCap; ++a) {
        double x = rng.normal(kStreamFNormal, cell * kAttemptCap + a, mean, sd);
        if (x >= lo && x <= hi) return x;
    }
    throw Error("sampling", "truncated normal rejection cap exceeded");
}

void sample_failures(const CounterRng& rng, const ScenarioSpec& spec, Instance& inst) {
    int w = spec.w, m = spec.m;
    auto cell = [m](int k, int j) { return static_cast<uint64_t>(k) * m + j; };

    switch (spec.failure_setting) {
        case FailureSetting::kBaseline:
        case FailureSetting::kHuLow:
        case FailureSetting::kHuHigh: {
            double lo = 0.05, hi = 0.2;
            if (spec.failure_setting == FailureSetting::kHuLow) lo = 0.01, hi = 0.05;
            if (spec.failure_setting == FailureSetting::kHuHigh) lo = 0.05, hi = 0.10;
            for (int k = 0; k < w; ++k)
                for (int j = 0; j < m; ++j)
                    inst.f[k * m + j] = rng.uniform(kStreamF, cell(k, j) * kAttemptCap, lo, hi);
            return;
        }
        case FailureSetting::kHeterogeneous: {
            for (int k = 0; k < w; ++k) {
                int r = std::min(k, 4);
                for (int j = 0; j < m; ++j)
                    inst.f[k * m + j] =
                        rng.uniform(kStreamF, cell(k, j) * kAttemptCap, kHeuLow[r], kHeuHigh[r]);
            }
            return;
        }
        case FailureSetting::kMixed: {
            for (int k = 0; k < w; ++k) {
                int r = std::min(k, 4);
                for (int j = 0; j < m; ++j) {
                    double x = 0.0;
                    switch (r) {
                        case 0: x = rng.uniform(kStreamF, cell(k, j) * kAttemptCap, 0.0, 0.05); break;
                        case 1: x = sample_truncated_normal(rng, cell(k, j), 0.05, 0.1, 0.0, 1.0); break;
                        case 2: x = rng.uniform(kStreamF, cell(k, j) * kAttemptCap, 0.06, 0.11); break;
                        case 3: x = sample_truncated_normal(rng, cell(k, j), 0.04, 0.1, 0.0, 1.0); break;
                        default: x = rng.uniform(kStreamF, cell(k, j) * kAttemptCap, 0.04, 0.09); break;
                    }
                    inst.f[k * m + j] = x;
                }
            }
            return;
        }
        case FailureSetting::kCorrelated: {
            // Equicorrelated covariance: variance 0.0009, covariance 0.00036.
            // Its Cholesky factor has closed columns, but for generality we
            // factor numerically once.
            std::vector<double> L(static_cast<size_t>(w) * w, 0.0);
            auto A = [w](int r, int c2) { return r == c2 ? 0.0009 : 0.00036; };
            for (int r = 0; r < w; ++r) {
                for (int c2 = 0; c2 <= r; ++c2) {
                    double s = A(r, c2);
                    for (int t = 0; t < c2; ++t) s -= L[r * w + t] * L[c2 * w + t];
                    if (r == c2) {
                        if (s <= 0.0) throw Error("sampling", "covariance not positive definite");
                        L[r * w + r] = std::sqrt(s);
                    } else {
                        L[r * w + c2] = s / L[c2 * w + c2];
                    }
                }
            }
            std::vector<double> zvec(w);
            for (int j = 0; j < m; ++j) {
                bool accepted = false;
                for (uint64_t a = 0; a < kAttemptCap && !accepted; ++a) {
                    uint64_t base = (static_cast<uint64_t>(j) * kAttemptCap + a) *
                                    static_cast<uint64_t>(w);
                    for (int k = 0; k < w; ++k)
                        zvec[k] = rng.normal(kStreamFVec, base + k, 0.0, 1.0);
                    accepted = true;
                    for (int k = 0; k < w && accepted; ++k) {
                        double x = 0.08;
                        for (int t = 0; t <= k; ++t) x += L[k * w + t] * zvec[t];
                        if (x < 0.05 || x > 0.2) accepted = false;
                        else inst.f[k * m + j] = x;
                    }
                }
                if (!accepted) throw Error("sampling", "correlated vector rejection cap exceeded");
            }
            return;
        }
    }
}

}  // namespace

std::vector<double> default_ladder(int l) {
    std::vector<double> d(l);
    for (int h = 0; h < l; ++h) d[h] = 1.0 - 0.05 * h;
    return d;
}

ScenarioSpec default_scenario(int w, uint64_t seed) {
    ScenarioSpec spec;
    spec.w = w;
    spec.seed = seed;
    return spec;
}

void validate_scenario(const ScenarioSpec& spec) {
    if (spec.w < 1 || spec.w > 16)
        throw Error("invalid-scenario", "subsystem count out of range");
    if (spec.m < 1 || spec.m > 5)
        throw Error("invalid-scenario", "group count must be between 1 and 5");
    if (spec.l < 0) throw Error("invalid-scenario", "level count must be nonnegative");
    if (!(spec.gamma > 1.0))
        throw Error("invalid-scenario", "claim-to-price ratio must exceed 1");
    if (!(spec.theta >= 0.0)) throw Error("invalid-scenario", "theta must be nonnegative");
    if (spec.customer_case != CustomerCase::kUniform && spec.m != 5)
        throw Error("invalid-scenario", "non-uniform customer cases need all five groups");
    int l = spec.effective_l();
    if (!spec.ladder.empty()) {
        if (static_cast<int>(spec.ladder.size()) != l)
            throw Error("invalid-scenario", "ladder length disagrees with level count");
        for (int h = 0; h < l; ++h) {
            double d = spec.ladder[h];
            if (!(d > 0.0 && d <= 1.0))
                throw Error("invalid-scenario", "multipliers must lie in (0, 1]");
            if (h > 0 && !(d < spec.ladder[h - 1]))
                throw Error("invalid-scenario", "multipliers must strictly decrease");
        }
    } else if (1.0 - 0.05 * (l - 1) <= 0.0) {
        throw Error("invalid-scenario", "default ladder would reach a nonpositive multiplier");
    }
}

Instance generate_instance(const ScenarioSpec& spec) {
    validate_scenario(spec);
    CounterRng rng(spec.seed);

    Instance inst;
    inst.m = spec.m;
    inst.w = spec.w;
    inst.n = (1 << spec.w) - 1;
    inst.l = spec.effective_l();
    inst.theta = spec.theta;
    inst.utility_mode = spec.utility_mode;
    inst.seed = spec.seed;
    inst.discounts = spec.ladder.empty() ? default_ladder(inst.l) : spec.ladder;

    inst.lambda.resize(spec.m);
    switch (spec.customer_case) {
        case CustomerCase::kUniform:
            for (int j = 0; j < spec.m; ++j) inst.lambda[j] = 1.0 / spec.m;
            break;
        case CustomerCase::kDecreasing: {
            // Published proportions sum to 0.9; normalized here so the
            // shares form a distribution while keeping their ratios.
            constexpr std::array<double, 5> raw = {0.4, 0.2, 0.15, 0.1, 0.05};
            double s = 0.0;
            for (double r : raw) s += r;
            for (int j = 0; j < 5; ++j) inst.lambda[j] = raw[j] / s;
            break;
        }
        case CustomerCase::kSymmetric:
            inst.lambda = {0.1, 0.2, 0.4, 0.2, 0.1};
            break;
    }

    inst.u0.assign(kU0.begin(), kU0.begin() + spec.m);
    inst.beta.assign(kBeta.begin(), kBeta.begin() + spec.m);

    size_t cells = static_cast<size_t>(spec.w) * spec.m;
    inst.v.resize(cells);
    inst.p0.resize(cells);
    inst.f.resize(cells);
    inst.c.resize(cells);

    for (int k = 0; k < spec.w; ++k) {
        for (int j = 0; j < spec.m; ++j) {
            inst.v[k * spec.m + j] = sample_attraction(rng, spec, k, j);
            inst.c[k * spec.m + j] = claim_cost_entry(k, j);
            inst.p0[k * spec.m + j] = inst.c[k * spec.m + j] / spec.gamma;
        }
    }
    sample_failures(rng, spec, inst);

    validate_instance(inst);
    return inst;
}

void validate_ga_config(const GaConfig& cfg) {
    if (cfg.n_gen < 1 || cfg.population < 2)
        throw Error("invalid-config", "need at least one generation and two individuals");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(cfg.p_crossover) || !prob(cfg.p_mutation) || !prob(cfg.elite_fraction))
        throw Error("invalid-config", "probabilities must lie in [0, 1]");
    if (cfg.stagnation_limit < 1)
        throw Error("invalid-config", "stagnation limit must be positive");
}

}  // namespace jdpew

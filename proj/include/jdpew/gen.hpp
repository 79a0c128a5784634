#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jdpew/instance.hpp"

namespace jdpew {

enum class CustomerCase { kUniform, kDecreasing, kSymmetric };
enum class FailureSetting { kBaseline, kHuLow, kHuHigh, kHeterogeneous, kMixed, kCorrelated };
enum class AttractionDist { kUniform, kNormal, kPowerLaw };

std::string to_string(CustomerCase c);
std::string to_string(FailureSetting s);
std::string to_string(AttractionDist d);
CustomerCase customer_case_from_string(const std::string& s);
FailureSetting failure_setting_from_string(const std::string& s);
AttractionDist attraction_dist_from_string(const std::string& s);

// Everything needed to sample an Instance deterministically.
struct ScenarioSpec {
    int w = 3;
    int m = 5;
    int l = 0;  // 0 means "one level per subsystem"
    double gamma = 6.0;
    double theta = 8.0;
    uint64_t seed = 0;
    UtilityMode utility_mode = UtilityMode::kLinear;
    CustomerCase customer_case = CustomerCase::kUniform;
    FailureSetting failure_setting = FailureSetting::kBaseline;
    AttractionDist attraction_dist = AttractionDist::kUniform;
    std::vector<double> ladder;  // empty means the arithmetic default

    int effective_l() const { return l > 0 ? l : w; }
};

// Arithmetic default ladder: multiplier 1 - 0.05*h for level h = 0..l-1.
std::vector<double> default_ladder(int l);

// Baseline study configuration for a given subsystem count and seed.
ScenarioSpec default_scenario(int w, uint64_t seed);

// Throws Error{"invalid-scenario"} on out-of-range fields.
void validate_scenario(const ScenarioSpec& spec);

// Samples an Instance from the scenario. Identical (spec, seed) pairs give
// identical instances on every platform; the seed is recorded on the result.
Instance generate_instance(const ScenarioSpec& spec);

struct GaConfig {
    int n_gen = 80;
    int population = 60;
    double p_crossover = 0.5;
    double p_mutation = 0.12;
    double elite_fraction = 0.05;
    int stagnation_limit = 20;  // stop after this many generations without improvement
    uint64_t seed = 1;
};

void validate_ga_config(const GaConfig& cfg);

}  // namespace jdpew

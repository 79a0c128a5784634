#pragma once

#include <string>
#include <vector>

#include "jdpew/instance.hpp"

namespace jdpew {

struct Violation {
    std::string rule;  // advertising-link | subsystem-coverage | one-discount |
                       // monotone-discount | negative-weight
    int i = -1;        // contract, -1 when not applicable
    int j = -1;        // group
    int k = -1;        // subsystem
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Discount multiplier currently assigned to contract i by decision d.
double contract_multiplier(const Instance& inst, const Decision& d, int i);

// Posted price of contract i for group j: base bundle price times the
// contract's discount multiplier.
double contract_price(const Instance& inst, const Catalog& cat, int i, int j,
                      const Decision& d);

// Preference weight of contract i for group j at the given posted price.
// Linear mode: sum of subsystem attractions minus beta * price. Diminishing
// mode scales the attraction sum by (1 - ln(bundle size)/6).
double preference_weight(const Instance& inst, const Catalog& cat, int i, int j,
                         double price);

// Purchase probabilities of group j over the n contracts plus the outside
// option (last entry). Non-recommended contracts get probability 0.
// Throws Error{"negative-weight"} if a recommended contract has a negative
// preference weight.
std::vector<double> choice_probabilities(const Instance& inst, const Catalog& cat,
                                         const Decision& d, int j);

// Full validity check of a decision against the instance: advertising link,
// per-group subsystem coverage, one-hot discounts, size-monotone discounts,
// and nonnegative weights for recommended contracts.
ValidationReport validate_decision(const Instance& inst, const Catalog& cat,
                                   const Decision& d);

// Expected profit of a valid decision: group-share weighted expected margin
// minus theta per advertised contract. Throws Error{"invalid-decision"}
// when validation fails.
double expected_profit(const Instance& inst, const Catalog& cat, const Decision& d);

}  // namespace jdpew

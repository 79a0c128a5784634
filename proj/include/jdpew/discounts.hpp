#pragma once

#include <vector>

#include "jdpew/instance.hpp"

namespace jdpew {

// Levels are 0-based indices into the discount ladder; multipliers strictly
// decrease with level, so the size-monotone rule reads: a contract with more
// subsystems must have a level >= that of every smaller contract.

// Raw starting rule: each contract takes the level of its highest covered
// subsystem, clamped to the ladder length. Not necessarily monotone across
// non-nested contracts (e.g. {1,2} vs {3}).
std::vector<int> z0_levels(const Catalog& cat, int l);

bool levels_monotone(const Catalog& cat, const std::vector<int>& levels);

// Repairs by raising smaller contracts' multipliers minimally: walking size
// classes from largest to smallest, caps each level at the minimum level of
// all strictly larger contracts.
void repair_raise_smaller(const Catalog& cat, std::vector<int>& levels);

// Repairs by lowering larger contracts' multipliers minimally: walking size
// classes from smallest to largest, lifts each level to at least the maximum
// level of all strictly smaller contracts.
void repair_lower_larger(const Catalog& cat, std::vector<int>& levels);

// Monotone starting assignment: z0 rule followed by repair_raise_smaller.
std::vector<int> initial_levels(const Catalog& cat, int l);

// Reassigns the rows of non-advertised contracts to the z0 rule clamped
// into the window allowed by the advertised rows, processing size classes
// from largest to smallest. Advertised rows are never touched; the result
// is always monotone when the advertised rows are monotone among
// themselves. This makes solutions that differ only in profit-irrelevant
// rows compare bit-exactly.
void complete_levels(const Catalog& cat, int l, const std::vector<uint8_t>& advertised,
                     std::vector<int>& levels);

}  // namespace jdpew

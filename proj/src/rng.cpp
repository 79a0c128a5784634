#include "jdpew/rng.hpp"

#include <cmath>
#include <numbers>

namespace jdpew {

double CounterRng::normal(uint64_t stream, uint64_t index, double mean, double sd) const {
    // 1 - u1 lies in (0, 1], keeping the log argument positive.
    double u1 = 1.0 - u01(stream, 2 * index);
    double u2 = u01(stream, 2 * index + 1);
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + sd * z;
}

}  // namespace jdpew

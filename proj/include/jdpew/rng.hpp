#pragma once

#include <cstdint>

namespace jdpew {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based generator: every draw is a pure function of
// (seed, stream, index), so sampling order never affects values and the
// stream is identical on every platform.
class CounterRng {
public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t bits(uint64_t stream, uint64_t index) const {
        uint64_t h = mix64(seed_ ^ mix64(stream));
        return mix64(h ^ mix64(index + 0x632be59bd9b4e019ULL));
    }

    // Uniform in [0, 1); 53-bit mantissa.
    double u01(uint64_t stream, uint64_t index) const {
        return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
    }

    double uniform(uint64_t stream, uint64_t index, double lo, double hi) const {
        return lo + (hi - lo) * u01(stream, index);
    }

    // Box-Muller; consumes sub-indices 2*index and 2*index+1 of the stream.
    double normal(uint64_t stream, uint64_t index, double mean, double sd) const;

    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
};

// Sequential stream for the genetic algorithm: deterministic per seed,
// no dependence on std::<distribution> implementations.
class SeqRng {
public:
    explicit SeqRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return u01() < p; }

    // Uniform integer in [0, n); n >= 1.
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

private:
    uint64_t state_;
};

}  // namespace jdpew

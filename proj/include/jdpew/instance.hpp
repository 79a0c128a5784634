#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jdpew {

enum class UtilityMode { kLinear, kDiminishing };

std::string to_string(UtilityMode mode);
UtilityMode utility_mode_from_string(const std::string& s);

// Candidate contract i (1-based) is the subset of subsystems given by the
// binary expansion of i over k = 1..w, so n = 2^w - 1 and the full bundle
// is contract n.
struct Catalog {
    int w = 0;
    int n = 0;
    std::vector<uint32_t> mask;  // mask[i] == i + 1
    std::vector<int> size;       // popcount(mask[i])

    static Catalog make(int w);
    bool contains(int contract, int subsystem) const {
        return (mask[contract] >> subsystem) & 1u;
    }
    uint32_t full_mask() const { return (1u << w) - 1u; }
};

// Problem data. Matrices over (subsystem k, group j) are stored k-major:
// value at (k, j) lives at index k*m + j.
struct Instance {
    int m = 0;  // customer groups
    int w = 0;  // subsystems
    int n = 0;  // candidate contracts, 2^w - 1
    int l = 0;  // discount levels

    std::vector<double> lambda;     // m, group shares, sums to 1
    std::vector<double> u0;         // m, outside attraction
    std::vector<double> beta;       // m, price sensitivity
    std::vector<double> discounts;  // l, strictly decreasing multipliers in (0, 1]

    std::vector<double> v;   // w*m, per-subsystem attraction
    std::vector<double> p0;  // w*m, base subsystem price
    std::vector<double> f;   // w*m, failure probability
    std::vector<double> c;   // w*m, claim (repair) cost

    double theta = 0.0;  // per-advertised-contract operating cost
    UtilityMode utility_mode = UtilityMode::kLinear;

    std::optional<uint64_t> seed;  // provenance, recorded when generated

    double at(const std::vector<double>& mat, int k, int j) const { return mat[k * m + j]; }
};

// Throws Error{"invalid-instance"} on any violated data requirement.
void validate_instance(const Instance& inst);

// Decision variables. x is contract-major over groups, z contract-major
// over levels; values are 0/1.
struct Decision {
    int n = 0, m = 0, l = 0;
    std::vector<uint8_t> x;  // n*m, x[i*m + j]
    std::vector<uint8_t> y;  // n
    std::vector<uint8_t> z;  // n*l, z[i*l + h]

    static Decision zeros(int n, int m, int l);

    bool recommended(int i, int j) const { return x[i * m + j] != 0; }
    int advertised_count() const;
    bool operator==(const Decision& other) const = default;
};

// Discount level per contract (0-based index into the ladder) extracted
// from a one-hot z block; throws if a row is not one-hot.
std::vector<int> levels_from_z(const Decision& d);
void set_z_from_levels(Decision& d, const std::vector<int>& levels);

// Strict tie-break order between equal-profit decisions: fewer advertised
// contracts first, then lexicographically smaller (y, x, z) bit string
// (y by contract, x contract-major, z contract-major; 0 sorts before 1).
bool tie_break_less(const Decision& a, const Decision& b);

// Candidate ordering used by every solver: higher profit wins outside the
// profit tolerance; inside it the tie-break order decides.
bool candidate_better(double profit_a, const Decision& a, double profit_b, const Decision& b);

}  // namespace jdpew

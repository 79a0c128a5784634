#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace jdpew {

// Error with a stable machine-readable kind, used by the CLI to emit
// structured error records. Kinds are lowercase-hyphen identifiers.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

namespace tol {
// Probability identities (simplex sums, scale invariance).
inline constexpr double kProb = 1e-12;
// Profit comparisons: absolute, or relative for large magnitudes.
inline constexpr double kProfit = 1e-9;
// Group-share vector must sum to 1 within this.
inline constexpr double kLambdaSum = 1e-9;
}  // namespace tol

// Tolerance for comparing two profit values a and b: absolute 1e-9 or
// relative 1e-9, whichever is larger.
inline double profit_tol(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::max(tol::kProfit, tol::kProfit * scale);
}

inline bool profit_close(double a, double b) {
    return std::abs(a - b) <= profit_tol(a, b);
}

// Formats a double with 17 significant digits, enough to round-trip the
// exact IEEE-754 value through text. All file writers use this.
std::string fmt_double(double v);

// Parses a decimal written by fmt_double (plain strtod, full precision).
double parse_double(const std::string& s);

}  // namespace jdpew

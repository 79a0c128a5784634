// Conic reformulation of the joint design-and-pricing problem.
//
// The fractional profit objective is linearized by (a) shifting each group's
// revenue by its best achievable margin rhat[j], (b) substituting the
// reciprocal t[j] of the group's total preference weight w[j], and
// (c) introducing McCormick product variables
//     s[i,j,h] = z[i,h] * x[i,j]   (binary * binary)
//     g[i,j]   = t[j]   * x[i,j]   (continuous * binary)
//     o[i,j,h] = s[i,j,h] * t[j]   (continuous * binary)
// after which the objective is linear in (t, g, o, y) and the only nonlinear
// rows left are the rotated-cone rows w[j] * t[j] >= 1.
//
// Besides the full program, this module builds the two block subproblems used
// by the iterative solver (design step with fixed discounts, pricing step with
// fixed assortments) and the three benchmark programs (shared design at
// initial discounts, personalized design at initial discounts, shared design
// with optimized discounts).  All builders are pure and deterministic; the
// resulting programs are immutable, solver-neutral descriptions meant for
// export or for objective-equivalence checking, not for solving in-process.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jdpew/instance.hpp"

namespace jdpew {

// Precomputed per-(contract, group) aggregates of the raw subsystem data.
// All sums run over subsystems in ascending index order.
struct ReformAux {
    int n = 0;
    int m = 0;
    std::vector<double> vhat;   // n*m: summed attraction value of the contract
    std::vector<double> phat;   // n*m: summed base price (undiscounted)
    std::vector<double> chat;   // n*m: summed expected claim cost
    std::vector<double> rhat;   // m: max over contracts of (phat - chat)
    std::vector<double> tlo;    // m: lower bound for t[j] (all contracts shown)
    std::vector<double> thi;    // m: upper bound for t[j] (nothing shown)

    double vhat_at(int i, int j) const { return vhat[static_cast<size_t>(i) * m + j]; }
    double phat_at(int i, int j) const { return phat[static_cast<size_t>(i) * m + j]; }
    double chat_at(int i, int j) const { return chat[static_cast<size_t>(i) * m + j]; }
};

// In the size-diminishing utility mode the attraction sums that enter rows,
// objective coefficients, and the t-bounds are scaled by the contract-size
// factor; in the linear mode they equal the raw vhat sums.
ReformAux compute_aux(const Instance& inst, const Catalog& cat);

enum class VarKind : uint8_t { kBinary, kContinuous };

struct Variable {
    std::string name;  // role-parseable: base letter plus bracketed indices
    VarKind kind = VarKind::kContinuous;
    double lb = 0.0;
    double ub = 0.0;
    std::string role;  // human-readable defining identity
};

enum class RowSense : uint8_t { kLe, kGe, kEq };

struct LinRow {
    std::string name;
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    RowSense sense = RowSense::kLe;
    double rhs = 0.0;
};

// Rotated-cone row: variables[w_var] * variables[t_var] >= 1, both nonnegative.
struct ConeRow {
    std::string name;
    int w_var = -1;
    int t_var = -1;
};

enum class ProgramKind : uint8_t { kFull, kStep1, kStep2, kBm1, kBm2, kBm3 };

std::string to_string(ProgramKind kind);
ProgramKind program_kind_from_string(const std::string& s);

// Immutable linear-plus-cone program.  Minimization; the equivalent profit of
// a feasible integer assignment is profit_shift - objective value.
struct ConicProgram {
    ProgramKind kind = ProgramKind::kFull;
    int m = 0, n = 0, l = 0, w = 0;
    double profit_shift = 0.0;   // sum over groups of lambda[j] * rhat[j]
    double obj_constant = 0.0;   // constant term of the minimization objective
    std::vector<Variable> variables;
    std::vector<LinRow> rows;
    std::vector<ConeRow> cones;
    std::vector<std::pair<int, double>> objective;  // sparse, minimization

    // Fixed blocks folded into coefficients; also used to cross-check the
    // assignment handed to evaluate_program.
    std::vector<int> fixed_levels;   // step1 / bm1 / bm2: one level per contract
    std::vector<uint8_t> fixed_x;    // step2: n*m recommendation matrix
    std::vector<uint8_t> fixed_y;    // step2: n advertising flags
};

// Builders refuse instances whose n*m*l cell count exceeds this cap (the
// emitted row count grows past any practical file size well before then).
inline constexpr long long kDefaultBuildCap = 50'000'000;

ConicProgram build_full_program(const Instance& inst, const Catalog& cat, const ReformAux& aux,
                                long long cell_cap = kDefaultBuildCap);

// Design step: discounts fixed to `levels` (one 0-based ladder index per
// contract); decides y and per-group x.
ConicProgram build_step1_program(const Instance& inst, const Catalog& cat, const ReformAux& aux,
                                 const std::vector<int>& levels,
                                 long long cell_cap = kDefaultBuildCap);

// Pricing step: assortments fixed to (x, y); decides the discount matrix z.
ConicProgram build_step2_program(const Instance& inst, const Catalog& cat, const ReformAux& aux,
                                 const std::vector<uint8_t>& x, const std::vector<uint8_t>& y,
                                 long long cell_cap = kDefaultBuildCap);

enum class BenchmarkKind : uint8_t { kBm1, kBm2, kBm3 };

// bm1: one shared selection vector, discounts fixed to `levels`.
// bm2: identical to the design step with discounts fixed to `levels`.
// bm3: one shared selection vector, discounts decided with ladder-order rows.
// `levels` is ignored for bm3.
ConicProgram build_benchmark_program(const Instance& inst, const Catalog& cat,
                                     const ReformAux& aux, BenchmarkKind which,
                                     const std::vector<int>& levels,
                                     long long cell_cap = kDefaultBuildCap);

struct ReformEvaluation {
    double objective_value = 0.0;    // minimization objective, back-substituted
    double equivalent_profit = 0.0;  // profit_shift - objective_value
};

// Back-substitutes the auxiliary variables implied by an integer decision
// (products from their identities, prices and weights from their defining
// rows, t[j] = 1/w[j]), verifies every row, bound, and cone within tolerance,
// and evaluates the objective.  Throws Error("negative-weight") when some
// group's total preference weight is nonpositive and Error("infeasible") when
// the assignment violates the program (including mismatched fixed blocks).
ReformEvaluation evaluate_program(const ConicProgram& prog, const Decision& dec);

struct ProgramCounts {
    long long binary = 0;
    long long continuous = 0;
    long long linear = 0;
    long long cone = 0;
};

// Actual counts of the built program.
ProgramCounts count_variables(const ConicProgram& prog);

// Closed-form complexity estimates for the three documented program shapes
// (full, step1, step2).  The linear estimate follows the usual accounting
// convention: one ladder-ordering row for every ordered contract pair
// (including equal-size pairs) and the product-variable sign restrictions
// counted with their envelopes.  The built program skips equal-size pairs and
// keeps sign restrictions as variable bounds, so its linear count is lower;
// audits report both numbers side by side.
ProgramCounts formula_counts(ProgramKind kind, int m, int n, int l, int w);

struct CountAudit {
    ProgramKind kind = ProgramKind::kFull;
    ProgramCounts built;
    ProgramCounts formula;
    long long ordered_size_pairs = 0;  // ladder-ordering rows actually emitted
};

// Builds the program for `kind` (step1 uses the initial discount levels,
// step2 the full-bundle-only assortment) and compares counts.
CountAudit audit_counts(const Instance& inst, const Catalog& cat, ProgramKind kind);

}  // namespace jdpew

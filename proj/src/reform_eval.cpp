// Back-substitution and feasibility checking of integer assignments against a
// built conic program. Works purely off program data (names, rows, bounds),
// so it applies unchanged to programs read back from interchange files.
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "jdpew/common.hpp"
#include "jdpew/reform.hpp"

namespace jdpew {

namespace {

constexpr double kTol = 1e-9;

struct VarRef {
    char base = '?';
    int a = -1, b = -1, c = -1;
    int arity = 0;
};

VarRef parse_var_name(const std::string& name) {
    auto bracket = name.find('[');
    if (bracket != 1 || name.back() != ']')
        throw Error("parse", "unparseable variable name: " + name);
    VarRef ref;
    ref.base = name[0];
    int vals[3] = {-1, -1, -1};
    size_t pos = 2;
    while (pos < name.size() - 1) {
        size_t next = name.find(',', pos);
        if (next == std::string::npos || next > name.size() - 1) next = name.size() - 1;
        if (ref.arity >= 3) throw Error("parse", "too many indices in " + name);
        vals[ref.arity++] = std::atoi(name.substr(pos, next - pos).c_str());
        pos = next + 1;
    }
    ref.a = vals[0];
    ref.b = vals[1];
    ref.c = vals[2];
    if (ref.arity == 0) throw Error("parse", "missing indices in " + name);
    return ref;
}

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

double row_scale(const LinRow& row, const std::vector<double>& val) {
    double scale = std::max(1.0, std::abs(row.rhs));
    for (const auto& [var, coef] : row.terms)
        scale = std::max(scale, std::abs(coef * val[var]));
    return scale;
}

}  // namespace

ReformEvaluation evaluate_program(const ConicProgram& prog, const Decision& dec) {
    const int n = prog.n, m = prog.m, l = prog.l;
    if (dec.n != n || dec.m != m || dec.l != l)
        throw Error("invalid-decision", "decision dimensions do not match the program");

    const bool shares_x = prog.kind == ProgramKind::kBm1 || prog.kind == ProgramKind::kBm3;
    if (shares_x)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                if (dec.x[i * m + j] != dec.y[i])
                    throw Error("infeasible",
                                "shared-selection program needs identical recommendation columns");
    if (!prog.fixed_levels.empty() && levels_from_z(dec) != prog.fixed_levels)
        throw Error("infeasible", "decision discounts differ from the program's fixed discounts");
    if (!prog.fixed_x.empty() && (dec.x != prog.fixed_x || dec.y != prog.fixed_y))
        throw Error("infeasible", "decision assortment differs from the program's fixed assortment");

    const size_t nvars = prog.variables.size();
    std::vector<VarRef> refs(nvars);
    for (size_t v = 0; v < nvars; ++v) refs[v] = parse_var_name(prog.variables[v].name);

    std::vector<double> val(nvars, 0.0);
    std::vector<uint8_t> assigned(nvars, 0);
    std::vector<int> t_of(m, -1);

    auto sval = [&](const VarRef& r) {
        return r.arity == 3 ? double(dec.z[r.a * l + r.c] & dec.x[r.a * m + r.b])
                            : double(dec.z[r.a * l + r.b] & dec.y[r.a]);
    };

    for (size_t v = 0; v < nvars; ++v) {
        const VarRef& r = refs[v];
        switch (r.base) {
            case 'y': val[v] = dec.y[r.a]; assigned[v] = 1; break;
            case 'x':
                val[v] = r.arity == 1 ? dec.y[r.a] : dec.x[r.a * m + r.b];
                assigned[v] = 1;
                break;
            case 'z': val[v] = dec.z[r.a * l + r.b]; assigned[v] = 1; break;
            case 's': val[v] = sval(r); assigned[v] = 1; break;
            case 't': t_of[r.a] = static_cast<int>(v); break;
            default: break;
        }
    }

    // Prices and group weights from their defining equality rows (the defined
    // variable is always the leading term with coefficient 1).
    for (const LinRow& row : prog.rows) {
        if (!starts_with(row.name, "price[") && !starts_with(row.name, "wdef[")) continue;
        int defined = row.terms.front().first;
        double acc = row.rhs;
        for (size_t k = 1; k < row.terms.size(); ++k) {
            const auto& [var, coef] = row.terms[k];
            if (!assigned[var])
                throw Error("internal", "defining row " + row.name + " uses an unsolved variable");
            acc -= coef * val[var];
        }
        val[defined] = acc / row.terms.front().second;
        assigned[defined] = 1;
        if (refs[defined].base == 'w') {
            if (val[defined] <= 0.0)
                throw Error("negative-weight", "group " + std::to_string(refs[defined].a) +
                                                   " has nonpositive total preference weight");
            int tv = t_of[refs[defined].a];
            val[tv] = 1.0 / val[defined];
            assigned[tv] = 1;
        }
    }

    for (size_t v = 0; v < nvars; ++v) {
        const VarRef& r = refs[v];
        if (r.base == 'g') {
            double box = r.arity == 3 ? double(dec.z[r.a * l + r.c])
                         : shares_x   ? double(dec.y[r.a])
                                      : double(dec.x[r.a * m + r.b]);
            val[v] = val[t_of[r.b]] * box;
            assigned[v] = 1;
        } else if (r.base == 'o') {
            VarRef sref{'s', r.a, r.b, r.c, 3};
            if (shares_x) sref = {'s', r.a, r.c, -1, 2};
            val[v] = val[t_of[r.b]] * sval(sref);
            assigned[v] = 1;
        }
    }
    for (size_t v = 0; v < nvars; ++v)
        if (!assigned[v]) throw Error("internal", "variable left unsolved: " + prog.variables[v].name);

    for (size_t v = 0; v < nvars; ++v) {
        const Variable& var = prog.variables[v];
        double tol = kTol * std::max({1.0, std::abs(var.lb), std::abs(var.ub), std::abs(val[v])});
        if (val[v] < var.lb - tol || val[v] > var.ub + tol)
            throw Error("infeasible", "variable " + var.name + " = " + fmt_double(val[v]) +
                                          " violates its bounds");
    }
    for (const LinRow& row : prog.rows) {
        double lhs = 0.0;
        for (const auto& [var, coef] : row.terms) lhs += coef * val[var];
        double tol = kTol * row_scale(row, val);
        bool ok = row.sense == RowSense::kLe   ? lhs <= row.rhs + tol
                  : row.sense == RowSense::kGe ? lhs >= row.rhs - tol
                                               : std::abs(lhs - row.rhs) <= tol;
        if (!ok)
            throw Error("infeasible", "row " + row.name + " violated: lhs " + fmt_double(lhs) +
                                          " vs rhs " + fmt_double(row.rhs));
    }
    for (const ConeRow& cone : prog.cones)
        if (val[cone.w_var] * val[cone.t_var] < 1.0 - kTol)
            throw Error("infeasible", "cone row " + cone.name + " violated");

    ReformEvaluation out;
    out.objective_value = prog.obj_constant;
    for (const auto& [var, coef] : prog.objective) out.objective_value += coef * val[var];
    out.equivalent_profit = prog.profit_shift - out.objective_value;
    return out;
}

}  // namespace jdpew

#include "jdpew/reform.hpp"

#include <algorithm>
#include <cmath>

#include "jdpew/common.hpp"
#include "jdpew/eval.hpp"

namespace jdpew {

namespace {

std::string idx1(const char* base, int a) {
    return std::string(base) + "[" + std::to_string(a) + "]";
}
std::string idx2(const char* base, int a, int b) {
    return std::string(base) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}
std::string idx3(const char* base, int a, int b, int c) {
    return std::string(base) + "[" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(c) + "]";
}

struct Builder {
    ConicProgram prog;

    int add_var(std::string name, VarKind kind, double lb, double ub, std::string role) {
        prog.variables.push_back({std::move(name), kind, lb, ub, std::move(role)});
        return static_cast<int>(prog.variables.size()) - 1;
    }
    void add_row(std::string name, std::vector<std::pair<int, double>> terms, RowSense sense,
                 double rhs) {
        prog.rows.push_back({std::move(name), std::move(terms), sense, rhs});
    }
    void add_cone(std::string name, int w_var, int t_var) {
        prog.cones.push_back({std::move(name), w_var, t_var});
    }
    void add_obj(int var, double coef) {
        if (coef != 0.0) prog.objective.emplace_back(var, coef);
    }
};

void check_cell_cap(const Instance& inst, long long cell_cap) {
    long long cells = static_cast<long long>(inst.n) * inst.m * inst.l;
    if (cells > cell_cap)
        throw Error("build-cap", "program size " + std::to_string(cells) +
                                     " cells exceeds cap " + std::to_string(cell_cap));
}

void start_program(Builder& b, ProgramKind kind, const Instance& inst, const ReformAux& aux) {
    b.prog.kind = kind;
    b.prog.m = inst.m;
    b.prog.n = inst.n;
    b.prog.l = inst.l;
    b.prog.w = inst.w;
    double shift = 0.0;
    for (int j = 0; j < inst.m; ++j) shift += inst.lambda[j] * aux.rhat[j];
    b.prog.profit_shift = shift;
}

// Coefficient of the o-product (or of a fixed-level g-product) gathering all
// price-dependent objective terms for one (contract, group, multiplier) cell.
double price_term_coef(const ReformAux& aux, const Instance& inst, int i, int j, double d) {
    double ph = aux.phat_at(i, j);
    return -inst.lambda[j] * ph * d *
           (aux.vhat_at(i, j) + inst.beta[j] * (aux.rhat[j] + aux.chat_at(i, j) - ph * d));
}

// Price-independent objective coefficient of an inclusion product g = t * x.
double margin_term_coef(const ReformAux& aux, const Instance& inst, int i, int j) {
    return inst.lambda[j] * aux.vhat_at(i, j) * (aux.rhat[j] + aux.chat_at(i, j));
}

void add_t_w_vars(Builder& b, const Instance& inst, const ReformAux& aux, std::vector<int>& tv,
                  std::vector<int>& wv) {
    tv.resize(inst.m);
    wv.resize(inst.m);
    for (int j = 0; j < inst.m; ++j)
        tv[j] = b.add_var(idx1("t", j), VarKind::kContinuous, aux.tlo[j], aux.thi[j],
                          "reciprocal total preference weight of group " + std::to_string(j));
    for (int j = 0; j < inst.m; ++j)
        wv[j] = b.add_var(idx1("w", j), VarKind::kContinuous, 0.0, 1.0 / aux.tlo[j],
                          "total preference weight of group " + std::to_string(j));
}

void add_t_objective(Builder& b, const Instance& inst, const ReformAux& aux,
                     const std::vector<int>& tv) {
    for (int j = 0; j < inst.m; ++j)
        b.add_obj(tv[j], inst.lambda[j] * inst.u0[j] * aux.rhat[j]);
}

void add_cones(Builder& b, const std::vector<int>& wv, const std::vector<int>& tv) {
    for (size_t j = 0; j < wv.size(); ++j)
        b.add_cone(idx1("cone", static_cast<int>(j)), wv[j], tv[j]);
}

// Four-row envelope of product = factor * box_var with factor in [flo, fhi]
// and box_var binary. `tag` distinguishes the rows of one product.
void add_product_envelope(Builder& b, const std::string& stem, int product, int factor,
                          int box_var, double flo, double fhi) {
    b.add_row(stem + "#0", {{product, 1.0}, {factor, -1.0}, {box_var, -fhi}}, RowSense::kGe, -fhi);
    b.add_row(stem + "#1", {{product, 1.0}, {box_var, -flo}}, RowSense::kGe, 0.0);
    b.add_row(stem + "#2", {{product, 1.0}, {factor, -1.0}, {box_var, -flo}}, RowSense::kLe, -flo);
    b.add_row(stem + "#3", {{product, 1.0}, {box_var, -fhi}}, RowSense::kLe, 0.0);
}

// Three-row envelope of product = bin_a * bin_b (the sign restriction is the
// variable's lower bound).
void add_binary_product_envelope(Builder& b, const std::string& stem, int product, int bin_a,
                                 int bin_b) {
    b.add_row(stem + "#0", {{product, 1.0}, {bin_a, -1.0}, {bin_b, -1.0}}, RowSense::kGe, -1.0);
    b.add_row(stem + "#1", {{product, 1.0}, {bin_a, -1.0}}, RowSense::kLe, 0.0);
    b.add_row(stem + "#2", {{product, 1.0}, {bin_b, -1.0}}, RowSense::kLe, 0.0);
}

// Ladder-ordering rows over ordered contract pairs of strictly decreasing
// size: the multiplier of the larger contract must not exceed the smaller's.
void add_monotone_rows(Builder& b, const Instance& inst, const Catalog& cat,
                       const std::vector<int>& zv) {
    for (int a = 0; a < inst.n; ++a) {
        for (int c = 0; c < inst.n; ++c) {
            if (cat.size[a] <= cat.size[c]) continue;
            std::vector<std::pair<int, double>> terms;
            terms.reserve(2 * inst.l);
            for (int h = 0; h < inst.l; ++h) terms.emplace_back(zv[a * inst.l + h], inst.discounts[h]);
            for (int h = 0; h < inst.l; ++h)
                terms.emplace_back(zv[c * inst.l + h], -inst.discounts[h]);
            b.add_row(idx2("mono", a, c), std::move(terms), RowSense::kLe, 0.0);
        }
    }
}

void check_levels(const Instance& inst, const std::vector<int>& levels) {
    if (static_cast<int>(levels.size()) != inst.n)
        throw Error("invalid-decision", "fixed levels must have one entry per contract");
    for (int lev : levels)
        if (lev < 0 || lev >= inst.l)
            throw Error("invalid-decision", "fixed level outside ladder");
}

}  // namespace

std::string to_string(ProgramKind kind) {
    switch (kind) {
        case ProgramKind::kFull: return "full";
        case ProgramKind::kStep1: return "step1";
        case ProgramKind::kStep2: return "step2";
        case ProgramKind::kBm1: return "bm1";
        case ProgramKind::kBm2: return "bm2";
        case ProgramKind::kBm3: return "bm3";
    }
    throw Error("internal", "unknown program kind");
}

ProgramKind program_kind_from_string(const std::string& s) {
    if (s == "full") return ProgramKind::kFull;
    if (s == "step1") return ProgramKind::kStep1;
    if (s == "step2") return ProgramKind::kStep2;
    if (s == "bm1") return ProgramKind::kBm1;
    if (s == "bm2") return ProgramKind::kBm2;
    if (s == "bm3") return ProgramKind::kBm3;
    throw Error("parse", "unknown program kind: " + s);
}

ReformAux compute_aux(const Instance& inst, const Catalog& cat) {
    WeightTables wt = WeightTables::build(inst, cat);
    ReformAux aux;
    aux.n = inst.n;
    aux.m = inst.m;
    aux.vhat = wt.vhat;
    aux.phat = wt.phat;
    aux.chat = wt.chat;
    aux.rhat.assign(inst.m, 0.0);
    aux.tlo.resize(inst.m);
    aux.thi.resize(inst.m);
    for (int j = 0; j < inst.m; ++j) {
        double best = aux.phat_at(0, j) - aux.chat_at(0, j);
        for (int i = 1; i < inst.n; ++i)
            best = std::max(best, aux.phat_at(i, j) - aux.chat_at(i, j));
        aux.rhat[j] = best;
        double vsum = 0.0;
        for (int i = 0; i < inst.n; ++i) vsum += aux.vhat_at(i, j);
        aux.tlo[j] = 1.0 / (inst.u0[j] + vsum);
        aux.thi[j] = 1.0 / inst.u0[j];
    }
    return aux;
}

ConicProgram build_full_program(const Instance& inst, const Catalog& cat, const ReformAux& aux,
                                long long cell_cap) {
    check_cell_cap(inst, cell_cap);
    const int n = inst.n, m = inst.m, l = inst.l;
    Builder b;
    start_program(b, ProgramKind::kFull, inst, aux);

    std::vector<int> yv(n), xv(n * m), zv(n * l), pv(n * m), tv, wv;
    std::vector<int> sv(static_cast<size_t>(n) * m * l), gv(n * m),
        ov(static_cast<size_t>(n) * m * l);
    for (int i = 0; i < n; ++i)
        yv[i] = b.add_var(idx1("y", i), VarKind::kBinary, 0.0, 1.0,
                          "advertise contract " + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            xv[i * m + j] = b.add_var(idx2("x", i, j), VarKind::kBinary, 0.0, 1.0,
                                      "recommend contract " + std::to_string(i) + " to group " +
                                          std::to_string(j));
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < l; ++h)
            zv[i * l + h] = b.add_var(idx2("z", i, h), VarKind::kBinary, 0.0, 1.0,
                                      "contract " + std::to_string(i) + " takes ladder slot " +
                                          std::to_string(h));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            pv[i * m + j] =
                b.add_var(idx2("p", i, j), VarKind::kContinuous, 0.0,
                          aux.phat_at(i, j) * inst.discounts[0], "selling price of the contract");
    add_t_w_vars(b, inst, aux, tv, wv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                sv[(static_cast<size_t>(i) * m + j) * l + h] =
                    b.add_var(idx3("s", i, j, h), VarKind::kContinuous, 0.0, 1.0,
                              "product z*x for this cell");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            gv[i * m + j] = b.add_var(idx2("g", i, j), VarKind::kContinuous, 0.0, aux.thi[j],
                                      "product t*x for this cell");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                ov[(static_cast<size_t>(i) * m + j) * l + h] =
                    b.add_var(idx3("o", i, j, h), VarKind::kContinuous, 0.0, aux.thi[j],
                              "product s*t for this cell");

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            b.add_row(idx2("link", i, j), {{xv[i * m + j], 1.0}, {yv[i], -1.0}}, RowSense::kLe,
                      0.0);
    for (int k = 0; k < inst.w; ++k)
        for (int j = 0; j < m; ++j) {
            std::vector<std::pair<int, double>> terms;
            for (int i = 0; i < n; ++i)
                if (cat.contains(i, k)) terms.emplace_back(xv[i * m + j], 1.0);
            b.add_row(idx2("cover", k, j), std::move(terms), RowSense::kGe, 1.0);
        }
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> terms;
        for (int h = 0; h < l; ++h) terms.emplace_back(zv[i * l + h], 1.0);
        b.add_row(idx1("onehot", i), std::move(terms), RowSense::kEq, 1.0);
    }
    add_monotone_rows(b, inst, cat, zv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<std::pair<int, double>> terms{{pv[i * m + j], 1.0}};
            for (int h = 0; h < l; ++h)
                terms.emplace_back(zv[i * l + h], -aux.phat_at(i, j) * inst.discounts[h]);
            b.add_row(idx2("price", i, j), std::move(terms), RowSense::kEq, 0.0);
        }
    for (int j = 0; j < m; ++j) {
        std::vector<std::pair<int, double>> terms{{wv[j], 1.0}};
        for (int i = 0; i < n; ++i) {
            terms.emplace_back(xv[i * m + j], -aux.vhat_at(i, j));
            for (int h = 0; h < l; ++h)
                terms.emplace_back(sv[(static_cast<size_t>(i) * m + j) * l + h],
                                   inst.beta[j] * aux.phat_at(i, j) * inst.discounts[h]);
        }
        b.add_row(idx1("wdef", j), std::move(terms), RowSense::kEq, inst.u0[j]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                add_binary_product_envelope(b, idx3("senv", i, j, h),
                                            sv[(static_cast<size_t>(i) * m + j) * l + h],
                                            zv[i * l + h], xv[i * m + j]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            add_product_envelope(b, idx2("genv", i, j), gv[i * m + j], tv[j], xv[i * m + j],
                                 aux.tlo[j], aux.thi[j]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                add_product_envelope(b, idx3("oenv", i, j, h),
                                     ov[(static_cast<size_t>(i) * m + j) * l + h], tv[j],
                                     sv[(static_cast<size_t>(i) * m + j) * l + h], aux.tlo[j],
                                     aux.thi[j]);
    add_cones(b, wv, tv);

    add_t_objective(b, inst, aux, tv);
    for (int i = 0; i < n; ++i) b.add_obj(yv[i], inst.theta);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) b.add_obj(gv[i * m + j], margin_term_coef(aux, inst, i, j));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                b.add_obj(ov[(static_cast<size_t>(i) * m + j) * l + h],
                          price_term_coef(aux, inst, i, j, inst.discounts[h]));
    return std::move(b.prog);
}

namespace {

// Shared skeleton of the three fixed-discount design programs (step1, bm2,
// and bm1): only the recommendation variables differ (per-group vs shared).
ConicProgram build_fixed_levels_program(const Instance& inst, const Catalog& cat,
                                        const ReformAux& aux, const std::vector<int>& levels,
                                        ProgramKind kind, bool shared_x) {
    const int n = inst.n, m = inst.m;
    Builder b;
    start_program(b, kind, inst, aux);
    b.prog.fixed_levels = levels;

    std::vector<int> yv, xv, tv, wv, gv(n * m);
    if (shared_x) {
        xv.resize(n);
        for (int i = 0; i < n; ++i)
            xv[i] = b.add_var(idx1("x", i), VarKind::kBinary, 0.0, 1.0,
                              "offer contract " + std::to_string(i) + " to every group");
    } else {
        yv.resize(n);
        xv.resize(n * m);
        for (int i = 0; i < n; ++i)
            yv[i] = b.add_var(idx1("y", i), VarKind::kBinary, 0.0, 1.0,
                              "advertise contract " + std::to_string(i));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                xv[i * m + j] = b.add_var(idx2("x", i, j), VarKind::kBinary, 0.0, 1.0,
                                          "recommend contract " + std::to_string(i) +
                                              " to group " + std::to_string(j));
    }
    add_t_w_vars(b, inst, aux, tv, wv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            gv[i * m + j] = b.add_var(idx2("g", i, j), VarKind::kContinuous, 0.0, aux.thi[j],
                                      "product t*x for this cell");

    if (!shared_x)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                b.add_row(idx2("link", i, j), {{xv[i * m + j], 1.0}, {yv[i], -1.0}}, RowSense::kLe,
                          0.0);
    for (int k = 0; k < inst.w; ++k) {
        if (shared_x) {
            std::vector<std::pair<int, double>> terms;
            for (int i = 0; i < n; ++i)
                if (cat.contains(i, k)) terms.emplace_back(xv[i], 1.0);
            b.add_row(idx1("cover", k), std::move(terms), RowSense::kGe, 1.0);
        } else {
            for (int j = 0; j < m; ++j) {
                std::vector<std::pair<int, double>> terms;
                for (int i = 0; i < n; ++i)
                    if (cat.contains(i, k)) terms.emplace_back(xv[i * m + j], 1.0);
                b.add_row(idx2("cover", k, j), std::move(terms), RowSense::kGe, 1.0);
            }
        }
    }
    for (int j = 0; j < m; ++j) {
        std::vector<std::pair<int, double>> terms{{wv[j], 1.0}};
        for (int i = 0; i < n; ++i) {
            double net = aux.vhat_at(i, j) -
                         inst.beta[j] * aux.phat_at(i, j) * inst.discounts[levels[i]];
            terms.emplace_back(xv[shared_x ? i : i * m + j], -net);
        }
        b.add_row(idx1("wdef", j), std::move(terms), RowSense::kEq, inst.u0[j]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            add_product_envelope(b, idx2("genv", i, j), gv[i * m + j], tv[j],
                                 xv[shared_x ? i : i * m + j], aux.tlo[j], aux.thi[j]);
    add_cones(b, wv, tv);

    add_t_objective(b, inst, aux, tv);
    for (int i = 0; i < n; ++i) b.add_obj(shared_x ? xv[i] : yv[i], inst.theta);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            double d = inst.discounts[levels[i]];
            b.add_obj(gv[i * m + j],
                      margin_term_coef(aux, inst, i, j) + price_term_coef(aux, inst, i, j, d));
        }
    return std::move(b.prog);
}

}  // namespace

ConicProgram build_step1_program(const Instance& inst, const Catalog& cat, const ReformAux& aux,
                                 const std::vector<int>& levels, long long cell_cap) {
    check_cell_cap(inst, cell_cap);
    check_levels(inst, levels);
    return build_fixed_levels_program(inst, cat, aux, levels, ProgramKind::kStep1, false);
}

ConicProgram build_step2_program(const Instance& inst, const Catalog& cat, const ReformAux& aux,
                                 const std::vector<uint8_t>& x, const std::vector<uint8_t>& y,
                                 long long cell_cap) {
    check_cell_cap(inst, cell_cap);
    const int n = inst.n, m = inst.m, l = inst.l;
    if (static_cast<int>(x.size()) != n * m || static_cast<int>(y.size()) != n)
        throw Error("invalid-decision", "fixed assortment has wrong dimensions");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (x[i * m + j] && !y[i])
                throw Error("invalid-decision", "fixed assortment recommends an unadvertised contract");
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < inst.w; ++k) {
            bool covered = false;
            for (int i = 0; i < n && !covered; ++i)
                if (x[i * m + j] && cat.contains(i, k)) covered = true;
            if (!covered)
                throw Error("invalid-decision", "fixed assortment leaves a subsystem uncovered");
        }

    Builder b;
    start_program(b, ProgramKind::kStep2, inst, aux);
    b.prog.fixed_x = x;
    b.prog.fixed_y = y;

    std::vector<int> zv(n * l), pv(n * m), tv, wv, gv(static_cast<size_t>(n) * m * l);
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < l; ++h)
            zv[i * l + h] = b.add_var(idx2("z", i, h), VarKind::kBinary, 0.0, 1.0,
                                      "contract " + std::to_string(i) + " takes ladder slot " +
                                          std::to_string(h));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            pv[i * m + j] =
                b.add_var(idx2("p", i, j), VarKind::kContinuous, 0.0,
                          aux.phat_at(i, j) * inst.discounts[0], "selling price of the contract");
    add_t_w_vars(b, inst, aux, tv, wv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                gv[(static_cast<size_t>(i) * m + j) * l + h] =
                    b.add_var(idx3("g", i, j, h), VarKind::kContinuous, 0.0, aux.thi[j],
                              "product t*z for this cell");

    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> terms;
        for (int h = 0; h < l; ++h) terms.emplace_back(zv[i * l + h], 1.0);
        b.add_row(idx1("onehot", i), std::move(terms), RowSense::kEq, 1.0);
    }
    add_monotone_rows(b, inst, cat, zv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<std::pair<int, double>> terms{{pv[i * m + j], 1.0}};
            for (int h = 0; h < l; ++h)
                terms.emplace_back(zv[i * l + h], -aux.phat_at(i, j) * inst.discounts[h]);
            b.add_row(idx2("price", i, j), std::move(terms), RowSense::kEq, 0.0);
        }
    for (int j = 0; j < m; ++j) {
        std::vector<std::pair<int, double>> terms{{wv[j], 1.0}};
        double rhs = inst.u0[j];
        for (int i = 0; i < n; ++i) {
            if (!x[i * m + j]) continue;
            rhs += aux.vhat_at(i, j);
            for (int h = 0; h < l; ++h)
                terms.emplace_back(zv[i * l + h],
                                   inst.beta[j] * aux.phat_at(i, j) * inst.discounts[h]);
        }
        b.add_row(idx1("wdef", j), std::move(terms), RowSense::kEq, rhs);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                add_product_envelope(b, idx3("genv", i, j, h),
                                     gv[(static_cast<size_t>(i) * m + j) * l + h], tv[j],
                                     zv[i * l + h], aux.tlo[j], aux.thi[j]);
    add_cones(b, wv, tv);

    for (int j = 0; j < m; ++j) {
        double coef = inst.lambda[j] * inst.u0[j] * aux.rhat[j];
        for (int i = 0; i < n; ++i)
            if (x[i * m + j]) coef += margin_term_coef(aux, inst, i, j);
        b.add_obj(tv[j], coef);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            if (!x[i * m + j]) continue;
            for (int h = 0; h < l; ++h)
                b.add_obj(gv[(static_cast<size_t>(i) * m + j) * l + h],
                          price_term_coef(aux, inst, i, j, inst.discounts[h]));
        }
    double fixed_cost = 0.0;
    for (int i = 0; i < n; ++i)
        if (y[i]) fixed_cost += inst.theta;
    b.prog.obj_constant = fixed_cost;
    return std::move(b.prog);
}

ConicProgram build_benchmark_program(const Instance& inst, const Catalog& cat,
                                     const ReformAux& aux, BenchmarkKind which,
                                     const std::vector<int>& levels, long long cell_cap) {
    check_cell_cap(inst, cell_cap);
    if (which == BenchmarkKind::kBm1) {
        check_levels(inst, levels);
        return build_fixed_levels_program(inst, cat, aux, levels, ProgramKind::kBm1, true);
    }
    if (which == BenchmarkKind::kBm2) {
        check_levels(inst, levels);
        return build_fixed_levels_program(inst, cat, aux, levels, ProgramKind::kBm2, false);
    }

    // bm3: shared selection with decided discounts.
    const int n = inst.n, m = inst.m, l = inst.l;
    Builder b;
    start_program(b, ProgramKind::kBm3, inst, aux);

    std::vector<int> xv(n), zv(n * l), pv(n * m), tv, wv;
    std::vector<int> sv(n * l), gv(n * m), ov(static_cast<size_t>(n) * m * l);
    for (int i = 0; i < n; ++i)
        xv[i] = b.add_var(idx1("x", i), VarKind::kBinary, 0.0, 1.0,
                          "offer contract " + std::to_string(i) + " to every group");
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < l; ++h)
            zv[i * l + h] = b.add_var(idx2("z", i, h), VarKind::kBinary, 0.0, 1.0,
                                      "contract " + std::to_string(i) + " takes ladder slot " +
                                          std::to_string(h));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            pv[i * m + j] =
                b.add_var(idx2("p", i, j), VarKind::kContinuous, 0.0,
                          aux.phat_at(i, j) * inst.discounts[0], "selling price of the contract");
    add_t_w_vars(b, inst, aux, tv, wv);
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < l; ++h)
            sv[i * l + h] = b.add_var(idx2("s", i, h), VarKind::kContinuous, 0.0, 1.0,
                                      "product z*x for this cell");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            gv[i * m + j] = b.add_var(idx2("g", i, j), VarKind::kContinuous, 0.0, aux.thi[j],
                                      "product t*x for this cell");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                ov[(static_cast<size_t>(i) * m + j) * l + h] =
                    b.add_var(idx3("o", i, j, h), VarKind::kContinuous, 0.0, aux.thi[j],
                              "product s*t for this cell");

    for (int k = 0; k < inst.w; ++k) {
        std::vector<std::pair<int, double>> terms;
        for (int i = 0; i < n; ++i)
            if (cat.contains(i, k)) terms.emplace_back(xv[i], 1.0);
        b.add_row(idx1("cover", k), std::move(terms), RowSense::kGe, 1.0);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> terms;
        for (int h = 0; h < l; ++h) terms.emplace_back(zv[i * l + h], 1.0);
        b.add_row(idx1("onehot", i), std::move(terms), RowSense::kEq, 1.0);
    }
    add_monotone_rows(b, inst, cat, zv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<std::pair<int, double>> terms{{pv[i * m + j], 1.0}};
            for (int h = 0; h < l; ++h)
                terms.emplace_back(zv[i * l + h], -aux.phat_at(i, j) * inst.discounts[h]);
            b.add_row(idx2("price", i, j), std::move(terms), RowSense::kEq, 0.0);
        }
    for (int j = 0; j < m; ++j) {
        std::vector<std::pair<int, double>> terms{{wv[j], 1.0}};
        for (int i = 0; i < n; ++i) {
            terms.emplace_back(xv[i], -aux.vhat_at(i, j));
            for (int h = 0; h < l; ++h)
                terms.emplace_back(sv[i * l + h],
                                   inst.beta[j] * aux.phat_at(i, j) * inst.discounts[h]);
        }
        b.add_row(idx1("wdef", j), std::move(terms), RowSense::kEq, inst.u0[j]);
    }
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < l; ++h)
            add_binary_product_envelope(b, idx2("senv", i, h), sv[i * l + h], zv[i * l + h],
                                        xv[i]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            add_product_envelope(b, idx2("genv", i, j), gv[i * m + j], tv[j], xv[i], aux.tlo[j],
                                 aux.thi[j]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                add_product_envelope(b, idx3("oenv", i, j, h),
                                     ov[(static_cast<size_t>(i) * m + j) * l + h], tv[j],
                                     sv[i * l + h], aux.tlo[j], aux.thi[j]);
    add_cones(b, wv, tv);

    add_t_objective(b, inst, aux, tv);
    for (int i = 0; i < n; ++i) b.add_obj(xv[i], inst.theta);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) b.add_obj(gv[i * m + j], margin_term_coef(aux, inst, i, j));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int h = 0; h < l; ++h)
                b.add_obj(ov[(static_cast<size_t>(i) * m + j) * l + h],
                          price_term_coef(aux, inst, i, j, inst.discounts[h]));
    return std::move(b.prog);
}

ProgramCounts count_variables(const ConicProgram& prog) {
    ProgramCounts c;
    for (const auto& v : prog.variables)
        (v.kind == VarKind::kBinary ? c.binary : c.continuous) += 1;
    c.linear = static_cast<long long>(prog.rows.size());
    c.cone = static_cast<long long>(prog.cones.size());
    return c;
}

ProgramCounts formula_counts(ProgramKind kind, int m, int n, int l, int w) {
    long long M = m, N = n, L = l, W = w;
    switch (kind) {
        case ProgramKind::kFull:
            return {M * N + N * L + N, 2 * M * N * L + 2 * M * N + 2 * M,
                    N * N + 7 * M * N * L + 6 * M * N + 2 * M + W * M, M};
        case ProgramKind::kStep1:
        case ProgramKind::kBm2:
            return {M * N + N, M * N + 2 * M, 5 * M * N + W * M + M, M};
        case ProgramKind::kStep2:
            return {N * L, M * N * L + M * N + 2 * M, N * N + 4 * M * N * L + M * N + N + M, M};
        default:
            throw Error("audit", "no closed-form counts for program kind " + to_string(kind));
    }
}

CountAudit audit_counts(const Instance& inst, const Catalog& cat, ProgramKind kind) {
    ReformAux aux = compute_aux(inst, cat);
    ConicProgram prog;
    switch (kind) {
        case ProgramKind::kFull:
            prog = build_full_program(inst, cat, aux);
            break;
        case ProgramKind::kStep1: {
            std::vector<int> levels(inst.n, 0);
            prog = build_step1_program(inst, cat, aux, levels);
            break;
        }
        case ProgramKind::kStep2: {
            // Full-bundle-only assortment: the one fixed block that is always
            // feasible.
            std::vector<uint8_t> x(static_cast<size_t>(inst.n) * inst.m, 0);
            std::vector<uint8_t> y(inst.n, 0);
            y[inst.n - 1] = 1;
            for (int j = 0; j < inst.m; ++j) x[static_cast<size_t>(inst.n - 1) * inst.m + j] = 1;
            prog = build_step2_program(inst, cat, aux, x, y);
            break;
        }
        default:
            throw Error("audit", "no closed-form counts for program kind " + to_string(kind));
    }
    CountAudit audit;
    audit.kind = kind;
    audit.built = count_variables(prog);
    audit.formula = formula_counts(kind, inst.m, inst.n, inst.l, inst.w);
    long long pairs = 0;
    for (int a = 0; a < inst.n; ++a)
        for (int c = 0; c < inst.n; ++c)
            if (cat.size[a] > cat.size[c]) ++pairs;
    audit.ordered_size_pairs = pairs;
    return audit;
}

}  // namespace jdpew

#include "jdpew/model.hpp"

#include <cmath>
#include <sstream>

#include "jdpew/common.hpp"

namespace jdpew {

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.rule;
        if (v.i >= 0) os << " i=" << v.i + 1;
        if (v.j >= 0) os << " j=" << v.j + 1;
        if (v.k >= 0) os << " k=" << v.k + 1;
        if (!v.detail.empty()) os << " (" << v.detail << ")";
        os << '\n';
    }
    return os.str();
}

namespace {

void check_dims(const Instance& inst, const Catalog& cat, const Decision& d) {
    if (cat.w != inst.w || cat.n != inst.n)
        throw Error("invalid-decision", "catalog does not match instance");
    if (d.n != inst.n || d.m != inst.m || d.l != inst.l)
        throw Error("invalid-decision", "decision dimensions do not match instance");
}

// Base (undiscounted) bundle price of contract i for group j.
double base_price(const Instance& inst, const Catalog& cat, int i, int j) {
    double s = 0.0;
    for (int k = 0; k < inst.w; ++k)
        if (cat.contains(i, k)) s += inst.at(inst.p0, k, j);
    return s;
}

// Expected claim cost of contract i for group j.
double claim_cost(const Instance& inst, const Catalog& cat, int i, int j) {
    double s = 0.0;
    for (int k = 0; k < inst.w; ++k)
        if (cat.contains(i, k)) s += inst.at(inst.f, k, j) * inst.at(inst.c, k, j);
    return s;
}

}  // namespace

double contract_multiplier(const Instance& inst, const Decision& d, int i) {
    double s = 0.0;
    for (int h = 0; h < inst.l; ++h)
        if (d.z[i * d.l + h]) s += inst.discounts[h];
    return s;
}

double contract_price(const Instance& inst, const Catalog& cat, int i, int j,
                      const Decision& d) {
    check_dims(inst, cat, d);
    return base_price(inst, cat, i, j) * contract_multiplier(inst, d, i);
}

double preference_weight(const Instance& inst, const Catalog& cat, int i, int j,
                         double price) {
    double attraction = 0.0;
    for (int k = 0; k < inst.w; ++k)
        if (cat.contains(i, k)) attraction += inst.at(inst.v, k, j);
    if (inst.utility_mode == UtilityMode::kDiminishing)
        attraction *= 1.0 - std::log(static_cast<double>(cat.size[i])) / 6.0;
    return attraction - inst.beta[j] * price;
}

std::vector<double> choice_probabilities(const Instance& inst, const Catalog& cat,
                                         const Decision& d, int j) {
    check_dims(inst, cat, d);
    std::vector<double> q(inst.n + 1, 0.0);
    double den = inst.u0[j];
    std::vector<double> weight(inst.n, 0.0);
    for (int i = 0; i < inst.n; ++i) {
        if (!d.recommended(i, j)) continue;
        double u = preference_weight(inst, cat, i, j, contract_price(inst, cat, i, j, d));
        if (u < 0.0)
            throw Error("negative-weight", "recommended contract " + std::to_string(i + 1) +
                                               " has negative weight for group " +
                                               std::to_string(j + 1));
        weight[i] = u;
        den += u;
    }
    for (int i = 0; i < inst.n; ++i)
        if (d.recommended(i, j)) q[i] = weight[i] / den;
    q[inst.n] = inst.u0[j] / den;
    return q;
}

ValidationReport validate_decision(const Instance& inst, const Catalog& cat,
                                   const Decision& d) {
    check_dims(inst, cat, d);
    ValidationReport rep;

    for (int i = 0; i < inst.n; ++i) {
        int ones = 0;
        for (int h = 0; h < inst.l; ++h) ones += d.z[i * d.l + h];
        if (ones != 1)
            rep.violations.push_back({"one-discount", i, -1, -1,
                                      "row has " + std::to_string(ones) + " set levels"});
    }

    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j)
            if (d.recommended(i, j) && !d.y[i])
                rep.violations.push_back({"advertising-link", i, j, -1, "recommended but not advertised"});

    for (int j = 0; j < inst.m; ++j) {
        uint32_t covered = 0;
        for (int i = 0; i < inst.n; ++i)
            if (d.recommended(i, j)) covered |= cat.mask[i];
        for (int k = 0; k < inst.w; ++k)
            if (!((covered >> k) & 1u))
                rep.violations.push_back({"subsystem-coverage", -1, j, k, "no recommended contract covers it"});
    }

    std::vector<double> mult(inst.n);
    for (int i = 0; i < inst.n; ++i) mult[i] = contract_multiplier(inst, d, i);
    for (int i = 0; i < inst.n; ++i) {
        for (int i2 = 0; i2 < inst.n; ++i2) {
            if (cat.size[i] > cat.size[i2] && mult[i] > mult[i2]) {
                rep.violations.push_back({"monotone-discount", i, -1, -1,
                                          "multiplier exceeds smaller contract " + std::to_string(i2 + 1)});
            }
        }
    }

    for (int j = 0; j < inst.m; ++j) {
        for (int i = 0; i < inst.n; ++i) {
            if (!d.recommended(i, j)) continue;
            double u = preference_weight(inst, cat, i, j, contract_price(inst, cat, i, j, d));
            if (u < 0.0)
                rep.violations.push_back({"negative-weight", i, j, -1, "weight " + std::to_string(u)});
        }
    }

    return rep;
}

double expected_profit(const Instance& inst, const Catalog& cat, const Decision& d) {
    ValidationReport rep = validate_decision(inst, cat, d);
    if (!rep.ok()) throw Error("invalid-decision", rep.to_string());

    double total = 0.0;
    for (int j = 0; j < inst.m; ++j) {
        double den = inst.u0[j];
        double num = 0.0;
        for (int i = 0; i < inst.n; ++i) {
            if (!d.recommended(i, j)) continue;
            double price = contract_price(inst, cat, i, j, d);
            double u = preference_weight(inst, cat, i, j, price);
            den += u;
            num += u * (price - claim_cost(inst, cat, i, j));
        }
        total += inst.lambda[j] * num / den;
    }
    for (int i = 0; i < inst.n; ++i)
        if (d.y[i]) total -= inst.theta;
    return total;
}

}  // namespace jdpew

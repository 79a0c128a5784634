#include "jdpew/conic_io.hpp"

#include <sstream>

#include "jdpew/common.hpp"
#include "jdpew/io.hpp"

namespace jdpew {

namespace {

const char* sense_token(RowSense sense) {
    switch (sense) {
        case RowSense::kLe: return "le";
        case RowSense::kGe: return "ge";
        case RowSense::kEq: return "eq";
    }
    throw Error("internal", "unknown row sense");
}

RowSense sense_from_token(const std::string& tok) {
    if (tok == "le") return RowSense::kLe;
    if (tok == "ge") return RowSense::kGe;
    if (tok == "eq") return RowSense::kEq;
    throw Error("parse", "unknown row sense token: " + tok);
}

// Line-oriented token reader with positional error messages.
struct Scanner {
    std::istringstream in;
    std::string line;
    std::istringstream tokens;
    int lineno = 0;

    explicit Scanner(const std::string& text) : in(text) {}

    void next_line() {
        if (!std::getline(in, line))
            throw Error("parse", "unexpected end of conic file after line " +
                                     std::to_string(lineno));
        ++lineno;
        tokens.clear();
        tokens.str(line);
    }
    std::string word() {
        std::string w;
        if (!(tokens >> w)) fail("missing token");
        return w;
    }
    void expect(const char* lit) {
        std::string w = word();
        if (w != lit) fail(std::string("expected '") + lit + "', found '" + w + "'");
    }
    long long integer() {
        const std::string w = word();
        try {
            return std::stoll(w);
        } catch (const std::exception&) {
            fail("expected integer, found '" + w + "'");
        }
        return 0;
    }
    double number() { return parse_double(word()); }
    std::string rest() {
        std::string tail;
        std::getline(tokens, tail);
        size_t first = tail.find_first_not_of(' ');
        return first == std::string::npos ? std::string() : tail.substr(first);
    }
    [[noreturn]] void fail(const std::string& what) {
        throw Error("parse", "conic file line " + std::to_string(lineno) + ": " + what);
    }
};

}  // namespace

std::string write_conic_text(const ConicProgram& prog) {
    std::ostringstream os;
    os << "jdpew-conic/1\n";
    os << "kind " << to_string(prog.kind) << "\n";
    os << "dims m " << prog.m << " n " << prog.n << " l " << prog.l << " w " << prog.w << "\n";
    os << "profit_shift " << fmt_double(prog.profit_shift) << "\n";
    os << "obj_constant " << fmt_double(prog.obj_constant) << "\n";
    if (!prog.fixed_levels.empty()) {
        os << "fixed_levels";
        for (int lev : prog.fixed_levels) os << " " << lev;
        os << "\n";
    }
    if (!prog.fixed_x.empty()) {
        os << "fixed_x";
        for (uint8_t b : prog.fixed_x) os << " " << static_cast<int>(b);
        os << "\n";
        os << "fixed_y";
        for (uint8_t b : prog.fixed_y) os << " " << static_cast<int>(b);
        os << "\n";
    }
    os << "vars " << prog.variables.size() << "\n";
    for (size_t v = 0; v < prog.variables.size(); ++v) {
        const Variable& var = prog.variables[v];
        os << "v " << v << " " << var.name << " "
           << (var.kind == VarKind::kBinary ? "B" : "C") << " " << fmt_double(var.lb) << " "
           << fmt_double(var.ub) << " " << var.role << "\n";
    }
    os << "rows " << prog.rows.size() << "\n";
    for (size_t r = 0; r < prog.rows.size(); ++r) {
        const LinRow& row = prog.rows[r];
        os << "r " << r << " " << row.name << " " << sense_token(row.sense) << " "
           << fmt_double(row.rhs) << " " << row.terms.size();
        for (const auto& [var, coef] : row.terms) os << " " << var << " " << fmt_double(coef);
        os << "\n";
    }
    os << "cones " << prog.cones.size() << "\n";
    for (size_t k = 0; k < prog.cones.size(); ++k)
        os << "k " << k << " " << prog.cones[k].name << " " << prog.cones[k].w_var << " "
           << prog.cones[k].t_var << "\n";
    os << "obj " << prog.objective.size() << "\n";
    for (const auto& [var, coef] : prog.objective)
        os << "c " << var << " " << fmt_double(coef) << "\n";
    os << "end\n";
    return os.str();
}

ConicProgram read_conic_text(const std::string& text) {
    Scanner sc(text);
    sc.next_line();
    if (sc.line != "jdpew-conic/1")
        throw Error("parse", "expected header jdpew-conic/1, found: " + sc.line);

    ConicProgram prog;
    sc.next_line();
    sc.expect("kind");
    prog.kind = program_kind_from_string(sc.word());
    sc.next_line();
    sc.expect("dims");
    sc.expect("m");
    prog.m = static_cast<int>(sc.integer());
    sc.expect("n");
    prog.n = static_cast<int>(sc.integer());
    sc.expect("l");
    prog.l = static_cast<int>(sc.integer());
    sc.expect("w");
    prog.w = static_cast<int>(sc.integer());
    sc.next_line();
    sc.expect("profit_shift");
    prog.profit_shift = sc.number();
    sc.next_line();
    sc.expect("obj_constant");
    prog.obj_constant = sc.number();

    sc.next_line();
    std::string section = sc.word();
    if (section == "fixed_levels") {
        for (int i = 0; i < prog.n; ++i) prog.fixed_levels.push_back(static_cast<int>(sc.integer()));
        sc.next_line();
        section = sc.word();
    }
    if (section == "fixed_x") {
        for (int i = 0; i < prog.n * prog.m; ++i)
            prog.fixed_x.push_back(static_cast<uint8_t>(sc.integer()));
        sc.next_line();
        sc.expect("fixed_y");
        for (int i = 0; i < prog.n; ++i) prog.fixed_y.push_back(static_cast<uint8_t>(sc.integer()));
        sc.next_line();
        section = sc.word();
    }

    if (section != "vars") sc.fail("expected vars section");
    long long nvars = sc.integer();
    prog.variables.reserve(nvars);
    for (long long v = 0; v < nvars; ++v) {
        sc.next_line();
        sc.expect("v");
        if (sc.integer() != v) sc.fail("variable indices must be consecutive");
        Variable var;
        var.name = sc.word();
        std::string kind = sc.word();
        if (kind != "B" && kind != "C") sc.fail("variable kind must be B or C");
        var.kind = kind == "B" ? VarKind::kBinary : VarKind::kContinuous;
        var.lb = sc.number();
        var.ub = sc.number();
        var.role = sc.rest();
        prog.variables.push_back(std::move(var));
    }

    sc.next_line();
    sc.expect("rows");
    long long nrows = sc.integer();
    prog.rows.reserve(nrows);
    for (long long r = 0; r < nrows; ++r) {
        sc.next_line();
        sc.expect("r");
        if (sc.integer() != r) sc.fail("row indices must be consecutive");
        LinRow row;
        row.name = sc.word();
        row.sense = sense_from_token(sc.word());
        row.rhs = sc.number();
        long long nterms = sc.integer();
        row.terms.reserve(nterms);
        for (long long t = 0; t < nterms; ++t) {
            int var = static_cast<int>(sc.integer());
            if (var < 0 || var >= nvars) sc.fail("row term references unknown variable");
            row.terms.emplace_back(var, sc.number());
        }
        prog.rows.push_back(std::move(row));
    }

    sc.next_line();
    sc.expect("cones");
    long long ncones = sc.integer();
    prog.cones.reserve(ncones);
    for (long long k = 0; k < ncones; ++k) {
        sc.next_line();
        sc.expect("k");
        if (sc.integer() != k) sc.fail("cone indices must be consecutive");
        ConeRow cone;
        cone.name = sc.word();
        cone.w_var = static_cast<int>(sc.integer());
        cone.t_var = static_cast<int>(sc.integer());
        if (cone.w_var < 0 || cone.w_var >= nvars || cone.t_var < 0 || cone.t_var >= nvars)
            sc.fail("cone references unknown variable");
        prog.cones.push_back(std::move(cone));
    }

    sc.next_line();
    sc.expect("obj");
    long long nobj = sc.integer();
    prog.objective.reserve(nobj);
    for (long long t = 0; t < nobj; ++t) {
        sc.next_line();
        sc.expect("c");
        int var = static_cast<int>(sc.integer());
        if (var < 0 || var >= nvars) sc.fail("objective references unknown variable");
        prog.objective.emplace_back(var, sc.number());
    }
    sc.next_line();
    if (sc.line != "end") sc.fail("expected end marker");
    return prog;
}

void export_conic(const ConicProgram& prog, const std::string& path) {
    spit_file(path, write_conic_text(prog));
}

ConicProgram read_conic_file(const std::string& path) {
    return read_conic_text(slurp_file(path));
}

}  // namespace jdpew

#include "jdpew/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jdpew/common.hpp"

namespace jdpew {

namespace {

using nlohmann::json;

std::string num_list(const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt_double(v[i]);
    }
    return s + "]";
}

std::string int_list(const std::vector<uint8_t>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(static_cast<int>(v[i]));
    }
    return s + "]";
}

// Matrix with `rows` rows of `cols` entries, row-major storage.
std::string matrix_block(const std::vector<double>& mat, int rows, int cols,
                         const std::string& indent) {
    std::string s = "[\n";
    for (int r = 0; r < rows; ++r) {
        std::vector<double> row(mat.begin() + static_cast<size_t>(r) * cols,
                                mat.begin() + static_cast<size_t>(r + 1) * cols);
        s += indent + "  " + num_list(row);
        if (r + 1 < rows) s += ",";
        s += "\n";
    }
    return s + indent + "]";
}

std::string bit_matrix_block(const std::vector<uint8_t>& mat, int rows, int cols,
                             const std::string& indent) {
    std::string s = "[\n";
    for (int r = 0; r < rows; ++r) {
        std::vector<uint8_t> row(mat.begin() + static_cast<size_t>(r) * cols,
                                 mat.begin() + static_cast<size_t>(r + 1) * cols);
        s += indent + "  " + int_list(row);
        if (r + 1 < rows) s += ",";
        s += "\n";
    }
    return s + indent + "]";
}

json parse_json(const std::string& text, const std::string& expected_schema) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("parse", std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema") || !doc["schema"].is_string())
        throw Error("parse", "missing schema tag");
    std::string schema = doc["schema"].get<std::string>();
    if (schema != expected_schema)
        throw Error("parse", "expected schema " + expected_schema + ", found " + schema);
    return doc;
}

const json& field(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw Error("parse", "missing field '" + key + "'");
    return doc.at(key);
}

std::vector<double> num_vector(const json& arr, size_t expect, const std::string& key) {
    if (!arr.is_array() || arr.size() != expect)
        throw Error("parse", "field '" + key + "' must be an array of " + std::to_string(expect));
    std::vector<double> out;
    out.reserve(expect);
    for (const auto& e : arr) {
        if (!e.is_number()) throw Error("parse", "field '" + key + "' has a non-numeric entry");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<double> num_matrix(const json& arr, int rows, int cols, const std::string& key) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != rows)
        throw Error("parse", "field '" + key + "' must have " + std::to_string(rows) + " rows");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(rows) * cols);
    for (const auto& row : arr) {
        auto vals = num_vector(row, cols, key);
        out.insert(out.end(), vals.begin(), vals.end());
    }
    return out;
}

std::vector<uint8_t> bit_vector(const json& arr, size_t expect, const std::string& key) {
    auto nums = num_vector(arr, expect, key);
    std::vector<uint8_t> out(nums.size());
    for (size_t i = 0; i < nums.size(); ++i) {
        if (nums[i] != 0.0 && nums[i] != 1.0)
            throw Error("parse", "field '" + key + "' must be 0/1");
        out[i] = nums[i] != 0.0;
    }
    return out;
}

std::vector<uint8_t> bit_matrix(const json& arr, int rows, int cols, const std::string& key) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != rows)
        throw Error("parse", "field '" + key + "' must have " + std::to_string(rows) + " rows");
    std::vector<uint8_t> out;
    out.reserve(static_cast<size_t>(rows) * cols);
    for (const auto& row : arr) {
        auto vals = bit_vector(row, cols, key);
        out.insert(out.end(), vals.begin(), vals.end());
    }
    return out;
}

}  // namespace

std::string write_instance_text(const Instance& inst) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": \"jdpew-instance/1\",\n";
    os << "  \"m\": " << inst.m << ",\n";
    os << "  \"w\": " << inst.w << ",\n";
    os << "  \"n\": " << inst.n << ",\n";
    os << "  \"l\": " << inst.l << ",\n";
    os << "  \"theta\": " << fmt_double(inst.theta) << ",\n";
    os << "  \"utility_mode\": \"" << to_string(inst.utility_mode) << "\",\n";
    if (inst.seed) os << "  \"seed\": " << *inst.seed << ",\n";
    os << "  \"lambda\": " << num_list(inst.lambda) << ",\n";
    os << "  \"u0\": " << num_list(inst.u0) << ",\n";
    os << "  \"beta\": " << num_list(inst.beta) << ",\n";
    os << "  \"discounts\": " << num_list(inst.discounts) << ",\n";
    os << "  \"v\": " << matrix_block(inst.v, inst.w, inst.m, "  ") << ",\n";
    os << "  \"p0\": " << matrix_block(inst.p0, inst.w, inst.m, "  ") << ",\n";
    os << "  \"f\": " << matrix_block(inst.f, inst.w, inst.m, "  ") << ",\n";
    os << "  \"c\": " << matrix_block(inst.c, inst.w, inst.m, "  ") << "\n";
    os << "}\n";
    return os.str();
}

Instance read_instance_text(const std::string& text) {
    json doc = parse_json(text, "jdpew-instance/1");
    Instance inst;
    inst.m = field(doc, "m").get<int>();
    inst.w = field(doc, "w").get<int>();
    inst.n = field(doc, "n").get<int>();
    inst.l = field(doc, "l").get<int>();
    inst.theta = field(doc, "theta").get<double>();
    inst.utility_mode = utility_mode_from_string(field(doc, "utility_mode").get<std::string>());
    if (doc.contains("seed")) inst.seed = doc["seed"].get<uint64_t>();
    inst.lambda = num_vector(field(doc, "lambda"), inst.m, "lambda");
    inst.u0 = num_vector(field(doc, "u0"), inst.m, "u0");
    inst.beta = num_vector(field(doc, "beta"), inst.m, "beta");
    inst.discounts = num_vector(field(doc, "discounts"), inst.l, "discounts");
    inst.v = num_matrix(field(doc, "v"), inst.w, inst.m, "v");
    inst.p0 = num_matrix(field(doc, "p0"), inst.w, inst.m, "p0");
    inst.f = num_matrix(field(doc, "f"), inst.w, inst.m, "f");
    inst.c = num_matrix(field(doc, "c"), inst.w, inst.m, "c");
    validate_instance(inst);
    return inst;
}

std::string write_scenario_text(const ScenarioSpec& spec) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": \"jdpew-scenario/1\",\n";
    os << "  \"w\": " << spec.w << ",\n";
    os << "  \"m\": " << spec.m << ",\n";
    os << "  \"l\": " << spec.l << ",\n";
    os << "  \"gamma\": " << fmt_double(spec.gamma) << ",\n";
    os << "  \"theta\": " << fmt_double(spec.theta) << ",\n";
    os << "  \"seed\": " << spec.seed << ",\n";
    os << "  \"utility_mode\": \"" << to_string(spec.utility_mode) << "\",\n";
    os << "  \"customer_case\": \"" << to_string(spec.customer_case) << "\",\n";
    os << "  \"failure_setting\": \"" << to_string(spec.failure_setting) << "\",\n";
    os << "  \"attraction_dist\": \"" << to_string(spec.attraction_dist) << "\",\n";
    if (spec.ladder.empty())
        os << "  \"ladder\": \"default\"\n";
    else
        os << "  \"ladder\": " << num_list(spec.ladder) << "\n";
    os << "}\n";
    return os.str();
}

ScenarioSpec read_scenario_text(const std::string& text) {
    json doc = parse_json(text, "jdpew-scenario/1");
    ScenarioSpec spec;
    spec.w = field(doc, "w").get<int>();
    spec.m = field(doc, "m").get<int>();
    spec.l = field(doc, "l").get<int>();
    spec.gamma = field(doc, "gamma").get<double>();
    spec.theta = field(doc, "theta").get<double>();
    spec.seed = field(doc, "seed").get<uint64_t>();
    spec.utility_mode = utility_mode_from_string(field(doc, "utility_mode").get<std::string>());
    spec.customer_case = customer_case_from_string(field(doc, "customer_case").get<std::string>());
    spec.failure_setting =
        failure_setting_from_string(field(doc, "failure_setting").get<std::string>());
    spec.attraction_dist =
        attraction_dist_from_string(field(doc, "attraction_dist").get<std::string>());
    const json& ladder = field(doc, "ladder");
    if (ladder.is_string()) {
        if (ladder.get<std::string>() != "default")
            throw Error("parse", "ladder must be \"default\" or an explicit list");
    } else {
        spec.ladder = num_vector(ladder, ladder.size(), "ladder");
        if (spec.ladder.empty()) throw Error("parse", "explicit ladder must be non-empty");
    }
    validate_scenario(spec);
    return spec;
}

std::string write_solution_text(const SolutionFile& sol) {
    const Decision& d = sol.decision;
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": \"jdpew-solution/1\",\n";
    os << "  \"method\": \"" << sol.method << "\",\n";
    os << "  \"w\": " << sol.w << ",\n";
    os << "  \"n\": " << d.n << ",\n";
    os << "  \"m\": " << d.m << ",\n";
    os << "  \"l\": " << d.l << ",\n";
    os << "  \"objective\": " << fmt_double(sol.objective) << ",\n";
    os << "  \"certificate\": \"" << sol.certificate << "\",\n";
    os << "  \"elapsed_sec\": " << fmt_double(sol.elapsed_sec) << ",\n";
    os << "  \"nodes\": " << sol.nodes << ",\n";
    os << "  \"z_explored\": " << sol.z_explored << ",\n";
    os << "  \"z_skipped\": " << sol.z_skipped << ",\n";
    os << "  \"y\": " << int_list(d.y) << ",\n";
    os << "  \"x\": " << bit_matrix_block(d.x, d.n, d.m, "  ") << ",\n";
    os << "  \"z\": " << bit_matrix_block(d.z, d.n, d.l, "  ");
    if (sol.its_trace) {
        os << ",\n  \"its_trace\": {\n";
        os << "    \"termination\": \"" << sol.its_trace->termination << "\",\n";
        os << "    \"iterations\": [\n";
        const auto& iters = sol.its_trace->iterations;
        for (size_t t = 0; t < iters.size(); ++t) {
            os << "      {\"iteration\": " << iters[t].iteration
               << ", \"profit_after_design\": " << fmt_double(iters[t].profit_after_design)
               << ", \"profit_after_pricing\": " << fmt_double(iters[t].profit_after_pricing)
               << "}";
            if (t + 1 < iters.size()) os << ",";
            os << "\n";
        }
        os << "    ]\n  }";
    }
    os << "\n}\n";
    return os.str();
}

SolutionFile read_solution_text(const std::string& text) {
    json doc = parse_json(text, "jdpew-solution/1");
    SolutionFile sol;
    sol.method = field(doc, "method").get<std::string>();
    sol.w = field(doc, "w").get<int>();
    int n = field(doc, "n").get<int>();
    int m = field(doc, "m").get<int>();
    int l = field(doc, "l").get<int>();
    sol.objective = field(doc, "objective").get<double>();
    sol.certificate = field(doc, "certificate").get<std::string>();
    sol.elapsed_sec = field(doc, "elapsed_sec").get<double>();
    sol.nodes = field(doc, "nodes").get<long long>();
    sol.z_explored = field(doc, "z_explored").get<long long>();
    sol.z_skipped = field(doc, "z_skipped").get<long long>();
    sol.decision.n = n;
    sol.decision.m = m;
    sol.decision.l = l;
    sol.decision.y = bit_vector(field(doc, "y"), n, "y");
    sol.decision.x = bit_matrix(field(doc, "x"), n, m, "x");
    sol.decision.z = bit_matrix(field(doc, "z"), n, l, "z");
    if (doc.contains("its_trace")) {
        const json& tr = doc["its_trace"];
        ItsTrace trace;
        trace.termination = field(tr, "termination").get<std::string>();
        for (const auto& it : field(tr, "iterations")) {
            ItsIterRecord rec;
            rec.iteration = field(it, "iteration").get<int>();
            rec.profit_after_design = field(it, "profit_after_design").get<double>();
            rec.profit_after_pricing = field(it, "profit_after_pricing").get<double>();
            trace.iterations.push_back(rec);
        }
        sol.its_trace = std::move(trace);
    }
    return sol;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + path);
    out << content;
    if (!out) throw Error("io", "write failed for " + path);
}

Instance read_instance_file(const std::string& path) {
    return read_instance_text(slurp_file(path));
}

ScenarioSpec read_scenario_file(const std::string& path) {
    return read_scenario_text(slurp_file(path));
}

SolutionFile read_solution_file(const std::string& path) {
    return read_solution_text(slurp_file(path));
}

}  // namespace jdpew

#include "jdpew/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "jdpew/baselines.hpp"
#include "jdpew/common.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/io.hpp"
#include "jdpew/its.hpp"

namespace jdpew {

namespace {

using nlohmann::json;

constexpr const char* kRawHeader =
    "scenario,scenario_key,method,replication,seed,profit,time_sec,certificate";

double elapsed_between(std::chrono::steady_clock::time_point a,
                       std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

bool known_method(const std::string& m) {
    return m == "exact" || m == "its" || m == "ga" || m == "bm1" || m == "bm2" || m == "bm3";
}

// CSV fields are written unquoted, so separators and newlines are banned in
// the free-text columns at validation time.
void check_csv_safe(const std::string& s, const char* what) {
    if (s.empty()) throw Error("invalid-plan", std::string(what) + " must be non-empty");
    if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos) {
        throw Error("invalid-plan", std::string(what) + " must not contain commas or newlines");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string fmt_fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Aligned text table: left-justified string columns, right-justified numbers.
std::string render_table(const std::vector<std::vector<std::string>>& cells,
                         const std::vector<bool>& right_justify) {
    std::vector<size_t> width(right_justify.size(), 0);
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            size_t pad = width[c] - row[c].size();
            if (right_justify[c]) out += std::string(pad, ' ');
            out += row[c];
            if (!right_justify[c] && c + 1 < row.size()) out += std::string(pad, ' ');
        }
        out += '\n';
    }
    return out;
}

int worker_count() {
    const char* env = std::getenv("JDPEW_WORKERS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1;
    return static_cast<int>(std::min<long>(v, 64));
}

}  // namespace

double metric_gap(double profit_ref, double profit_its) {
    if (profit_its == 0.0) throw Error("zero-denominator", "gap denominator is zero");
    return 100.0 * (profit_ref - profit_its) / profit_its;
}

double metric_increment(double profit_joint, double profit_bm) {
    return profit_joint - profit_bm;
}

double metric_benefit(double profit_joint, double profit_bm) {
    if (profit_bm == 0.0) throw Error("zero-denominator", "benefit denominator is zero");
    return 100.0 * (profit_joint - profit_bm) / profit_bm;
}

double ExperimentPlan::budget_for(const std::string& method) const {
    for (size_t i = 0; i < budget_methods.size(); ++i) {
        if (budget_methods[i] == method) return budget_values[i];
    }
    return budget_sec;
}

std::string scenario_key(const ScenarioSpec& spec) {
    ScenarioSpec keyed = spec;
    keyed.seed = 0;
    std::string text = write_scenario_text(keyed);
    // FNV-1a, 64-bit: stable across platforms, cheap, and collisions across a
    // plan's handful of scenarios are not a realistic concern.
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate_plan(const ExperimentPlan& plan) {
    if (plan.scenarios.empty()) throw Error("invalid-plan", "plan has no scenarios");
    if (plan.methods.empty()) throw Error("invalid-plan", "plan has no methods");
    if (plan.reps < 1) throw Error("invalid-plan", "replication count must be >= 1");
    if (plan.budget_sec < 0.0) throw Error("invalid-plan", "budget must be >= 0");
    if (plan.budget_methods.size() != plan.budget_values.size()) {
        throw Error("invalid-plan", "budget override lists have mismatched lengths");
    }
    std::set<std::string> names;
    for (const auto& sc : plan.scenarios) {
        check_csv_safe(sc.name, "scenario name");
        if (!names.insert(sc.name).second) {
            throw Error("invalid-plan", "duplicate scenario name '" + sc.name + "'");
        }
        validate_scenario(sc.spec);
    }
    std::set<std::string> methods;
    for (const auto& method : plan.methods) {
        if (!known_method(method)) throw Error("invalid-plan", "unknown method '" + method + "'");
        if (!methods.insert(method).second) {
            throw Error("invalid-plan", "duplicate method '" + method + "'");
        }
    }
    for (size_t i = 0; i < plan.budget_methods.size(); ++i) {
        if (!known_method(plan.budget_methods[i])) {
            throw Error("invalid-plan", "unknown budget method '" + plan.budget_methods[i] + "'");
        }
        if (plan.budget_values[i] < 0.0) throw Error("invalid-plan", "budget must be >= 0");
    }
    if (plan.out_dir.empty()) throw Error("invalid-plan", "output directory must be non-empty");
}

std::string write_plan_text(const ExperimentPlan& plan) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": \"jdpew-plan/1\",\n";
    os << "  \"base_seed\": " << plan.base_seed << ",\n";
    os << "  \"reps\": " << plan.reps << ",\n";
    os << "  \"budget_sec\": " << fmt_double(plan.budget_sec) << ",\n";
    os << "  \"out_dir\": \"" << plan.out_dir << "\",\n";
    os << "  \"methods\": [";
    for (size_t i = 0; i < plan.methods.size(); ++i) {
        if (i) os << ", ";
        os << '"' << plan.methods[i] << '"';
    }
    os << "],\n";
    os << "  \"budget_overrides\": {";
    for (size_t i = 0; i < plan.budget_methods.size(); ++i) {
        if (i) os << ", ";
        os << '"' << plan.budget_methods[i] << "\": " << fmt_double(plan.budget_values[i]);
    }
    os << "},\n";
    os << "  \"scenarios\": [\n";
    for (size_t s = 0; s < plan.scenarios.size(); ++s) {
        const PlanScenario& sc = plan.scenarios[s];
        const ScenarioSpec& sp = sc.spec;
        os << "    {\n";
        os << "      \"name\": \"" << sc.name << "\",\n";
        os << "      \"w\": " << sp.w << ",\n";
        os << "      \"m\": " << sp.m << ",\n";
        os << "      \"l\": " << sp.l << ",\n";
        os << "      \"gamma\": " << fmt_double(sp.gamma) << ",\n";
        os << "      \"theta\": " << fmt_double(sp.theta) << ",\n";
        os << "      \"utility_mode\": \"" << to_string(sp.utility_mode) << "\",\n";
        os << "      \"customer_case\": \"" << to_string(sp.customer_case) << "\",\n";
        os << "      \"failure_setting\": \"" << to_string(sp.failure_setting) << "\",\n";
        os << "      \"attraction_dist\": \"" << to_string(sp.attraction_dist) << "\",\n";
        if (sp.ladder.empty()) {
            os << "      \"ladder\": \"default\"\n";
        } else {
            os << "      \"ladder\": [";
            for (size_t i = 0; i < sp.ladder.size(); ++i) {
                if (i) os << ", ";
                os << fmt_double(sp.ladder[i]);
            }
            os << "]\n";
        }
        os << "    }" << (s + 1 < plan.scenarios.size() ? "," : "") << "\n";
    }
    os << "  ]\n";
    os << "}\n";
    return os.str();
}

ExperimentPlan read_plan_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("parse", std::string("malformed plan: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema", "") != "jdpew-plan/1") {
        throw Error("parse", "expected schema jdpew-plan/1");
    }
    auto need = [&doc](const char* key) -> const json& {
        if (!doc.contains(key)) throw Error("parse", std::string("missing field '") + key + "'");
        return doc.at(key);
    };
    ExperimentPlan plan;
    plan.base_seed = need("base_seed").get<uint64_t>();
    plan.reps = need("reps").get<int>();
    plan.budget_sec = need("budget_sec").get<double>();
    plan.out_dir = need("out_dir").get<std::string>();
    for (const auto& m : need("methods")) plan.methods.push_back(m.get<std::string>());
    if (doc.contains("budget_overrides")) {
        for (const auto& [key, value] : doc.at("budget_overrides").items()) {
            plan.budget_methods.push_back(key);
            plan.budget_values.push_back(value.get<double>());
        }
    }
    for (const auto& s : need("scenarios")) {
        auto sneed = [&s](const char* key) -> const json& {
            if (!s.contains(key)) {
                throw Error("parse", std::string("scenario missing field '") + key + "'");
            }
            return s.at(key);
        };
        PlanScenario sc;
        sc.name = sneed("name").get<std::string>();
        sc.spec.w = sneed("w").get<int>();
        sc.spec.m = sneed("m").get<int>();
        sc.spec.l = sneed("l").get<int>();
        sc.spec.gamma = sneed("gamma").get<double>();
        sc.spec.theta = sneed("theta").get<double>();
        sc.spec.utility_mode = utility_mode_from_string(sneed("utility_mode").get<std::string>());
        sc.spec.customer_case =
            customer_case_from_string(sneed("customer_case").get<std::string>());
        sc.spec.failure_setting =
            failure_setting_from_string(sneed("failure_setting").get<std::string>());
        sc.spec.attraction_dist =
            attraction_dist_from_string(sneed("attraction_dist").get<std::string>());
        const json& ladder = sneed("ladder");
        if (ladder.is_string()) {
            if (ladder.get<std::string>() != "default") {
                throw Error("parse", "ladder must be \"default\" or an explicit list");
            }
        } else {
            for (const auto& v : ladder) sc.spec.ladder.push_back(v.get<double>());
        }
        plan.scenarios.push_back(std::move(sc));
    }
    validate_plan(plan);
    return plan;
}

ExperimentPlan read_plan_file(const std::string& path) {
    return read_plan_text(slurp_file(path));
}

bool ResultRow::failed() const { return certificate.rfind("error:", 0) == 0; }

std::string write_raw_csv(const std::vector<ResultRow>& rows) {
    std::string out = kRawHeader;
    out += '\n';
    for (const ResultRow& r : rows) {
        out += r.scenario;
        out += ',';
        out += r.scenario_key;
        out += ',';
        out += r.method;
        out += ',';
        out += std::to_string(r.replication);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += fmt_double(r.profit);
        out += ',';
        out += fmt_double(r.time_sec);
        out += ',';
        out += r.certificate;
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> read_raw_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kRawHeader) {
        throw Error("parse", "raw CSV header mismatch");
    }
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 8) throw Error("parse", "raw CSV row with wrong field count");
        ResultRow r;
        r.scenario = f[0];
        r.scenario_key = f[1];
        r.method = f[2];
        r.replication = static_cast<int>(std::strtol(f[3].c_str(), nullptr, 10));
        r.seed = std::strtoull(f[4].c_str(), nullptr, 10);
        r.profit = parse_double(f[5]);
        r.time_sec = parse_double(f[6]);
        r.certificate = f[7];
        rows.push_back(std::move(r));
    }
    return rows;
}

void aggregate_rows(ResultTable& table) {
    table.aggregates.clear();
    table.metrics.clear();

    // Group order = first appearance in the raw rows.
    std::vector<std::pair<std::string, std::string>> group_order;
    std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
    std::vector<std::string> scenario_order;
    for (const ResultRow& r : table.rows) {
        auto key = std::make_pair(r.scenario, r.method);
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) group_order.push_back(key);
        it->second.push_back(&r);
        if (std::find(scenario_order.begin(), scenario_order.end(), r.scenario) ==
            scenario_order.end()) {
            scenario_order.push_back(r.scenario);
        }
    }

    std::map<std::pair<std::string, std::string>, double> mean_profit;
    for (const auto& key : group_order) {
        AggregateRow agg;
        agg.scenario = key.first;
        agg.method = key.second;
        double profit_sum = 0.0, time_sum = 0.0;
        for (const ResultRow* r : groups[key]) {
            if (r->failed()) continue;
            profit_sum += r->profit;
            time_sum += r->time_sec;
            ++agg.reps;
        }
        if (agg.reps > 0) {
            agg.mean_profit = profit_sum / agg.reps;
            agg.mean_time_sec = time_sum / agg.reps;
            mean_profit[key] = agg.mean_profit;
        }
        table.aggregates.push_back(agg);
    }

    for (const std::string& scenario : scenario_order) {
        auto mean_of = [&mean_profit, &scenario](const char* method, double& out) {
            auto it = mean_profit.find({scenario, method});
            if (it == mean_profit.end()) return false;
            out = it->second;
            return true;
        };
        double exact_mean = 0.0, its_mean = 0.0;
        bool have_exact = mean_of("exact", exact_mean);
        bool have_its = mean_of("its", its_mean);
        if (have_exact && have_its && its_mean != 0.0) {
            table.metrics.push_back({scenario, "gap", metric_gap(exact_mean, its_mean)});
        }
        double joint = 0.0;
        bool have_joint = have_exact ? (joint = exact_mean, true)
                                     : (have_its ? (joint = its_mean, true) : false);
        if (!have_joint) continue;
        for (const char* bm : {"bm1", "bm2", "bm3"}) {
            double bm_mean = 0.0;
            if (!mean_of(bm, bm_mean)) continue;
            table.metrics.push_back(
                {scenario, std::string("increment-") + bm, metric_increment(joint, bm_mean)});
            if (bm_mean != 0.0) {
                table.metrics.push_back(
                    {scenario, std::string("benefit-") + bm, metric_benefit(joint, bm_mean)});
            }
        }
    }
}

std::string write_aggregate_csv(const ResultTable& table) {
    std::string out = "kind,scenario,method_or_metric,reps,mean_profit,mean_time_sec,value\n";
    for (const AggregateRow& a : table.aggregates) {
        out += "mean," + a.scenario + "," + a.method + "," + std::to_string(a.reps) + "," +
               fmt_double(a.mean_profit) + "," + fmt_double(a.mean_time_sec) + ",\n";
    }
    for (const MetricRow& m : table.metrics) {
        out += "metric," + m.scenario + "," + m.metric + ",,,," + fmt_double(m.value) + "\n";
    }
    return out;
}

std::string render_aggregate_table(const ResultTable& table) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"scenario", "method", "reps", "mean_profit", "mean_time_sec"});
    for (const AggregateRow& a : table.aggregates) {
        cells.push_back({a.scenario, a.method, std::to_string(a.reps), fmt_fixed6(a.mean_profit),
                         fmt_fixed6(a.mean_time_sec)});
    }
    std::string out = render_table(cells, {false, false, true, true, true});
    if (!table.metrics.empty()) {
        out += '\n';
        cells.clear();
        cells.push_back({"scenario", "metric", "value"});
        for (const MetricRow& m : table.metrics) {
            cells.push_back({m.scenario, m.metric, fmt_fixed6(m.value)});
        }
        out += render_table(cells, {false, false, true});
    }
    return out;
}

ResultRow run_cell(const PlanScenario& scenario, const std::string& method, int replication,
                   uint64_t seed, double budget_sec) {
    ResultRow row;
    row.scenario = scenario.name;
    row.scenario_key = scenario_key(scenario.spec);
    row.method = method;
    row.replication = replication;
    row.seed = seed;

    double budget = budget_sec > 0.0 ? budget_sec : kDefaultBudgetSec;
    auto start = std::chrono::steady_clock::now();
    try {
        ScenarioSpec spec = scenario.spec;
        spec.seed = seed;
        Instance inst = generate_instance(spec);
        Catalog cat = Catalog::make(inst.w);
        if (method == "exact") {
            CertifiedSolution sol = solve_exact(inst, cat, budget);
            row.profit = sol.profit;
            row.certificate = sol.certificate;
        } else if (method == "its") {
            ItsResult sol = its_solve(inst, cat, budget);
            row.profit = sol.profit;
            row.certificate = sol.termination;
        } else if (method == "ga") {
            GaConfig cfg;
            cfg.seed = seed;
            GaResult sol = ga_solve(inst, cat, cfg);
            row.profit = sol.profit;
            row.certificate = "heuristic";
        } else if (method == "bm1" || method == "bm2" || method == "bm3") {
            CertifiedSolution sol = solve_baseline(inst, cat, baseline_from_string(method), budget);
            row.profit = sol.profit;
            row.certificate = sol.certificate;
        } else {
            throw Error("invalid-method", "unknown method '" + method + "'");
        }
    } catch (const Error& e) {
        row.profit = std::nan("");
        row.certificate = std::string("error:") + e.kind();
    } catch (const std::exception&) {
        row.profit = std::nan("");
        row.certificate = "error:internal";
    }
    row.time_sec = elapsed_between(start, std::chrono::steady_clock::now());
    return row;
}

ResultTable run_experiment(const ExperimentPlan& plan) {
    validate_plan(plan);
    namespace fs = std::filesystem;
    fs::create_directories(plan.out_dir);
    const std::string raw_path = plan.out_dir + "/raw.csv";
    const std::string agg_csv_path = plan.out_dir + "/aggregates.csv";
    const std::string agg_txt_path = plan.out_dir + "/aggregates.txt";

    // Previously completed cells, keyed by scenario content (not name), so a
    // renamed-but-identical scenario resumes and an edited one reruns.
    std::map<std::tuple<std::string, std::string, int>, ResultRow> done;
    bool raw_exists = fs::exists(raw_path);
    if (raw_exists) {
        for (ResultRow& r : read_raw_csv(slurp_file(raw_path))) {
            done.insert({{r.scenario_key, r.method, r.replication}, std::move(r)});
        }
    }

    const int workers = worker_count();
    ResultTable table;
    long long fresh_cells = 0;
    std::ofstream raw_out;
    auto ensure_raw_open = [&raw_out, &raw_path, &raw_exists]() {
        if (raw_out.is_open()) return;
        raw_out.open(raw_path, std::ios::app);
        if (!raw_out) throw Error("io", "cannot open " + raw_path + " for append");
        if (!raw_exists) {
            raw_out << kRawHeader << '\n';
            raw_exists = true;
        }
    };

    for (const PlanScenario& scenario : plan.scenarios) {
        const std::string key = scenario_key(scenario.spec);
        for (const std::string& method : plan.methods) {
            const double budget = plan.budget_for(method);

            std::vector<int> missing;
            for (int rep = 0; rep < plan.reps; ++rep) {
                auto it = done.find({key, method, rep});
                if (it != done.end()) {
                    ResultRow row = it->second;
                    row.scenario = scenario.name;  // resume may have renamed it
                    table.rows.push_back(std::move(row));
                } else {
                    missing.push_back(rep);
                }
            }
            if (missing.empty()) continue;

            std::vector<ResultRow> group(missing.size());
            auto work = [&](size_t idx) {
                int rep = missing[idx];
                group[idx] = run_cell(scenario, method, rep,
                                      plan.base_seed + static_cast<uint64_t>(rep), budget);
            };
            if (workers <= 1 || missing.size() <= 1) {
                for (size_t i = 0; i < missing.size(); ++i) work(i);
            } else {
                std::atomic<size_t> next{0};
                std::vector<std::thread> pool;
                int nthreads = std::min<size_t>(workers, missing.size());
                pool.reserve(static_cast<size_t>(nthreads));
                for (int t = 0; t < nthreads; ++t) {
                    pool.emplace_back([&work, &next, &missing]() {
                        while (true) {
                            size_t idx = next.fetch_add(1);
                            if (idx >= missing.size()) return;
                            work(idx);
                        }
                    });
                }
                for (auto& th : pool) th.join();
            }

            // Single collector: rows land in the file in replication order,
            // independent of worker timing.
            ensure_raw_open();
            raw_out << write_raw_csv(group).substr(std::string(kRawHeader).size() + 1);
            raw_out.flush();
            fresh_cells += static_cast<long long>(group.size());

            size_t insert_at = table.rows.size();
            for (ResultRow& row : group) table.rows.push_back(std::move(row));
            // Interleave resumed and fresh rows back into replication order.
            std::sort(table.rows.begin() + static_cast<long>(insert_at) -
                          static_cast<long>(plan.reps - missing.size()),
                      table.rows.end(),
                      [](const ResultRow& a, const ResultRow& b) {
                          return a.replication < b.replication;
                      });
        }
    }
    if (raw_out.is_open()) raw_out.close();

    aggregate_rows(table);
    if (fresh_cells > 0 || !fs::exists(agg_csv_path) || !fs::exists(agg_txt_path)) {
        spit_file(agg_csv_path, write_aggregate_csv(table));
        spit_file(agg_txt_path, render_aggregate_table(table));
    }
    return table;
}

// --- Solution grids --------------------------------------------------------

namespace {

std::string contract_label(const Catalog& cat, int i) {
    std::string s = "c" + std::to_string(i + 1) + "{";
    bool first = true;
    for (int k = 0; k < cat.w; ++k) {
        if (cat.mask[static_cast<size_t>(i)] & (1u << k)) {
            if (!first) s += ',';
            s += std::to_string(k + 1);
            first = false;
        }
    }
    return s + "}";
}

}  // namespace

std::string render_solution_grid(const Catalog& cat, const Decision& dec) {
    const int n = dec.n, m = dec.m, l = dec.l;
    std::vector<std::string> labels(static_cast<size_t>(n));
    size_t lw = 0;
    for (int i = 0; i < n; ++i) {
        labels[static_cast<size_t>(i)] = contract_label(cat, i);
        lw = std::max(lw, labels[static_cast<size_t>(i)].size());
    }
    auto pad = [&lw](const std::string& s) { return s + std::string(lw - s.size(), ' '); };

    std::ostringstream os;
    os << "X (contract x group)\n";
    os << pad("") << " ";
    for (int j = 0; j < m; ++j) os << " g" << (j + 1);
    os << "\n";
    for (int i = 0; i < n; ++i) {
        os << pad(labels[static_cast<size_t>(i)]) << " ";
        for (int j = 0; j < m; ++j) {
            os << "  " << (dec.recommended(i, j) ? '*' : '.');
        }
        os << "\n";
    }

    os << "\ny (advertised)\n";
    for (int i = 0; i < n; ++i) {
        os << pad(labels[static_cast<size_t>(i)]) << "   "
           << (dec.y[static_cast<size_t>(i)] ? '*' : '.') << "\n";
    }

    os << "\nZ (contract x discount level; '~' = canonical row of an unpriced contract)\n";
    os << pad("") << " ";
    for (int h = 0; h < l; ++h) os << " h" << (h + 1);
    os << "\n";
    for (int i = 0; i < n; ++i) {
        os << pad(labels[static_cast<size_t>(i)]) << " ";
        const bool priced = dec.y[static_cast<size_t>(i)] != 0;
        for (int h = 0; h < l; ++h) {
            char mark = '.';
            if (dec.z[static_cast<size_t>(i) * l + h]) mark = priced ? '*' : '~';
            os << "  " << mark;
        }
        os << "\n";
    }
    return os.str();
}

std::string write_solution_grid_csv(const Decision& dec) {
    std::string out = "grid,row,col,value\n";
    auto emit = [&out](const char* grid, int r, int c, int v) {
        out += grid;
        out += ',' + std::to_string(r) + ',' + std::to_string(c) + ',' + std::to_string(v) + '\n';
    };
    for (int i = 0; i < dec.n; ++i) {
        for (int j = 0; j < dec.m; ++j) emit("x", i, j, dec.recommended(i, j) ? 1 : 0);
    }
    for (int i = 0; i < dec.n; ++i) emit("y", i, 0, dec.y[static_cast<size_t>(i)] ? 1 : 0);
    for (int i = 0; i < dec.n; ++i) {
        for (int h = 0; h < dec.l; ++h) {
            emit("z", i, h, dec.z[static_cast<size_t>(i) * dec.l + h] ? 1 : 0);
        }
    }
    return out;
}

Decision parse_solution_grid_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "grid,row,col,value") {
        throw Error("parse", "grid CSV header mismatch");
    }
    struct Cell {
        std::string grid;
        int row, col, value;
    };
    std::vector<Cell> cells;
    int n = 0, m = 0, l = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 4) throw Error("parse", "grid CSV row with wrong field count");
        Cell cell{f[0], static_cast<int>(std::strtol(f[1].c_str(), nullptr, 10)),
                  static_cast<int>(std::strtol(f[2].c_str(), nullptr, 10)),
                  static_cast<int>(std::strtol(f[3].c_str(), nullptr, 10))};
        if (cell.grid != "x" && cell.grid != "y" && cell.grid != "z") {
            throw Error("parse", "unknown grid '" + cell.grid + "'");
        }
        if (cell.row < 0 || cell.col < 0 || (cell.value != 0 && cell.value != 1)) {
            throw Error("parse", "grid cell out of range");
        }
        n = std::max(n, cell.row + 1);
        if (cell.grid == "x") m = std::max(m, cell.col + 1);
        if (cell.grid == "z") l = std::max(l, cell.col + 1);
        cells.push_back(std::move(cell));
    }
    if (n == 0 || m == 0 || l == 0) throw Error("parse", "grid CSV missing x, y, or z cells");
    Decision dec = Decision::zeros(n, m, l);
    for (const Cell& cell : cells) {
        if (cell.grid == "x") {
            if (cell.col >= m) throw Error("parse", "grid cell out of range");
            dec.x[static_cast<size_t>(cell.row) * m + cell.col] = static_cast<uint8_t>(cell.value);
        } else if (cell.grid == "y") {
            if (cell.col != 0) throw Error("parse", "y grid must have a single column");
            dec.y[static_cast<size_t>(cell.row)] = static_cast<uint8_t>(cell.value);
        } else {
            dec.z[static_cast<size_t>(cell.row) * l + cell.col] = static_cast<uint8_t>(cell.value);
        }
    }
    return dec;
}

}  // namespace jdpew

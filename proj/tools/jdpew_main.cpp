// Command-line front end: instance generation, single solves, replication
// benchmarks, conic-program export, solution grids, and model-size audits.
//
// Every failure exits nonzero after printing a one-line machine-readable
// error record {"error": <kind>, "message": <text>} to stderr; data goes to
// stdout or to --out files.  The benchmark runner reads JDPEW_WORKERS for its
// cell worker count (default 1).
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jdpew/baselines.hpp"
#include "jdpew/bench.hpp"
#include "jdpew/common.hpp"
#include "jdpew/conic_io.hpp"
#include "jdpew/discounts.hpp"
#include "jdpew/exact.hpp"
#include "jdpew/gen.hpp"
#include "jdpew/io.hpp"
#include "jdpew/its.hpp"
#include "jdpew/reform.hpp"

namespace {

using namespace jdpew;

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void emit_error(const std::string& kind, const std::string& message) {
    std::fprintf(stderr, "{\"error\": \"%s\", \"message\": \"%s\"}\n", json_escape(kind).c_str(),
                 json_escape(message).c_str());
}

// "-" means stdout.
void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
    } else {
        spit_file(path, content);
    }
}

struct GenerateArgs {
    std::string scenario_path;
    std::string out = "-";
    std::string scenario_out;
    ScenarioSpec spec;
    std::string utility = "linear";
    std::string customer_case = "uniform";
    std::string failure_setting = "baseline";
    std::string attraction = "uniform";
    std::vector<double> ladder;
};

int cmd_generate(const GenerateArgs& args) {
    ScenarioSpec spec;
    if (!args.scenario_path.empty()) {
        spec = read_scenario_file(args.scenario_path);
    } else {
        spec = args.spec;
        spec.utility_mode = utility_mode_from_string(args.utility);
        spec.customer_case = customer_case_from_string(args.customer_case);
        spec.failure_setting = failure_setting_from_string(args.failure_setting);
        spec.attraction_dist = attraction_dist_from_string(args.attraction);
        spec.ladder = args.ladder;
        validate_scenario(spec);
    }
    Instance inst = generate_instance(spec);
    write_output(args.out, write_instance_text(inst));
    if (!args.scenario_out.empty()) write_output(args.scenario_out, write_scenario_text(spec));
    return 0;
}

struct SolveArgs {
    std::string in;
    std::string method = "exact";
    std::string out = "-";
    double time_limit = 0.0;       // 0 = unlimited
    double step_time_limit = 0.0;  // 0 = unlimited (its only)
    int max_iterations = kItsMaxIterations;
    std::optional<uint64_t> seed;  // ga only; defaults to the instance seed
};

int cmd_solve(const SolveArgs& args) {
    Instance inst = read_instance_file(args.in);
    Catalog cat = Catalog::make(inst.w);
    const double budget = args.time_limit > 0.0 ? args.time_limit : kDefaultBudgetSec;
    const double step_budget = args.step_time_limit > 0.0 ? args.step_time_limit : kDefaultBudgetSec;

    SolutionFile sol;
    sol.method = args.method;
    sol.w = inst.w;
    if (args.method == "exact") {
        CertifiedSolution r = solve_exact(inst, cat, budget);
        sol.decision = r.decision;
        sol.objective = r.profit;
        sol.certificate = r.certificate;
        sol.elapsed_sec = r.elapsed_sec;
        sol.nodes = r.nodes;
        sol.z_explored = r.z_explored;
        sol.z_skipped = r.z_skipped;
    } else if (args.method == "its") {
        ItsResult r = its_solve(inst, cat, budget, args.max_iterations, step_budget);
        sol.decision = r.decision;
        sol.objective = r.profit;
        sol.certificate = "best-found";
        sol.elapsed_sec = r.elapsed_sec;
        sol.nodes = r.nodes;
        ItsTrace trace;
        trace.termination = r.termination;
        for (const ItsIteration& it : r.trace) {
            trace.iterations.push_back(
                {it.iteration, it.profit_after_design, it.profit_after_pricing});
        }
        sol.its_trace = std::move(trace);
    } else if (args.method == "ga") {
        GaConfig cfg;
        cfg.seed = args.seed ? *args.seed : inst.seed.value_or(1);
        GaResult r = ga_solve(inst, cat, cfg);
        sol.decision = r.decision;
        sol.objective = r.profit;
        sol.certificate = "best-found";
        sol.elapsed_sec = r.elapsed_sec;
        sol.nodes = r.evaluations;
    } else if (args.method == "bm1" || args.method == "bm2" || args.method == "bm3") {
        CertifiedSolution r = solve_baseline(inst, cat, baseline_from_string(args.method), budget);
        sol.decision = r.decision;
        sol.objective = r.profit;
        sol.certificate = r.certificate;
        sol.elapsed_sec = r.elapsed_sec;
        sol.nodes = r.nodes;
        sol.z_explored = r.z_explored;
        sol.z_skipped = r.z_skipped;
    } else {
        throw Error("invalid-method", "unknown method '" + args.method + "'");
    }
    write_output(args.out, write_solution_text(sol));
    return 0;
}

struct BenchmarkArgs {
    std::string plan_path;
    int reps_override = 0;
    std::string out_override;
};

int cmd_benchmark(const BenchmarkArgs& args) {
    ExperimentPlan plan = read_plan_file(args.plan_path);
    if (args.reps_override > 0) plan.reps = args.reps_override;
    if (!args.out_override.empty()) plan.out_dir = args.out_override;
    ResultTable table = run_experiment(plan);
    std::fputs(render_aggregate_table(table).c_str(), stdout);
    long long failures = 0;
    for (const ResultRow& r : table.rows) {
        if (r.failed()) ++failures;
    }
    if (failures > 0) {
        emit_error("cells-failed", std::to_string(failures) + " cell(s) recorded an error row");
        return 1;
    }
    return 0;
}

struct ExportArgs {
    std::string in;
    std::string kind = "full";
    std::string out = "-";
};

int cmd_export(const ExportArgs& args) {
    Instance inst = read_instance_file(args.in);
    Catalog cat = Catalog::make(inst.w);
    ReformAux aux = compute_aux(inst, cat);
    ProgramKind kind = program_kind_from_string(args.kind);
    ConicProgram prog;
    switch (kind) {
        case ProgramKind::kFull:
            prog = build_full_program(inst, cat, aux);
            break;
        case ProgramKind::kStep1:
            prog = build_step1_program(inst, cat, aux, initial_levels(cat, inst.l));
            break;
        case ProgramKind::kStep2: {
            // The one fixed assortment block that is always feasible: the full
            // bundle advertised and recommended to every group.
            std::vector<uint8_t> x(static_cast<size_t>(inst.n) * inst.m, 0);
            std::vector<uint8_t> y(static_cast<size_t>(inst.n), 0);
            y[static_cast<size_t>(inst.n - 1)] = 1;
            for (int j = 0; j < inst.m; ++j) {
                x[static_cast<size_t>(inst.n - 1) * inst.m + j] = 1;
            }
            prog = build_step2_program(inst, cat, aux, x, y);
            break;
        }
        case ProgramKind::kBm1:
            prog = build_benchmark_program(inst, cat, aux, BenchmarkKind::kBm1,
                                           initial_levels(cat, inst.l));
            break;
        case ProgramKind::kBm2:
            prog = build_benchmark_program(inst, cat, aux, BenchmarkKind::kBm2,
                                           initial_levels(cat, inst.l));
            break;
        case ProgramKind::kBm3:
            prog = build_benchmark_program(inst, cat, aux, BenchmarkKind::kBm3, {});
            break;
    }
    write_output(args.out, write_conic_text(prog));
    return 0;
}

struct GridArgs {
    std::string in;
    std::string out;  // empty = text to stdout; else writes <out>.txt + <out>.csv
};

int cmd_grid(const GridArgs& args) {
    SolutionFile sol = read_solution_file(args.in);
    Catalog cat = Catalog::make(sol.w);
    std::string text = render_solution_grid(cat, sol.decision);
    if (args.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        spit_file(args.out + ".txt", text);
        spit_file(args.out + ".csv", write_solution_grid_csv(sol.decision));
    }
    return 0;
}

struct AuditArgs {
    std::string in;
    int w = 3, m = 5, l = 3;
    bool as_json = false;
};

int cmd_audit(const AuditArgs& args) {
    Instance inst;
    if (!args.in.empty()) {
        inst = read_instance_file(args.in);
    } else {
        ScenarioSpec spec;
        spec.w = args.w;
        spec.m = args.m;
        spec.l = args.l;
        spec.seed = 1;  // counts depend on dimensions only
        validate_scenario(spec);
        inst = generate_instance(spec);
    }
    Catalog cat = Catalog::make(inst.w);
    const ProgramKind kinds[] = {ProgramKind::kFull, ProgramKind::kStep1, ProgramKind::kStep2};

    if (args.as_json) {
        std::string out = "{\n  \"m\": " + std::to_string(inst.m) +
                          ", \"n\": " + std::to_string(inst.n) +
                          ", \"l\": " + std::to_string(inst.l) +
                          ", \"w\": " + std::to_string(inst.w) + ",\n  \"programs\": [\n";
        for (size_t k = 0; k < 3; ++k) {
            CountAudit a = audit_counts(inst, cat, kinds[k]);
            out += "    {\"kind\": \"" + to_string(a.kind) + "\"";
            out += ", \"built\": {\"binary\": " + std::to_string(a.built.binary) +
                   ", \"continuous\": " + std::to_string(a.built.continuous) +
                   ", \"linear\": " + std::to_string(a.built.linear) +
                   ", \"cone\": " + std::to_string(a.built.cone) + "}";
            out += ", \"formula\": {\"binary\": " + std::to_string(a.formula.binary) +
                   ", \"continuous\": " + std::to_string(a.formula.continuous) +
                   ", \"linear\": " + std::to_string(a.formula.linear) +
                   ", \"cone\": " + std::to_string(a.formula.cone) + "}";
            out += ", \"ordered_size_pairs\": " + std::to_string(a.ordered_size_pairs) + "}";
            out += (k + 1 < 3) ? ",\n" : "\n";
        }
        out += "  ]\n}\n";
        std::fputs(out.c_str(), stdout);
        return 0;
    }

    std::printf("model-size audit  (m=%d n=%d l=%d w=%d)\n", inst.m, inst.n, inst.l, inst.w);
    std::printf("%-6s %10s %10s %10s %10s %6s\n", "kind", "", "binary", "continuous", "linear",
                "cone");
    for (ProgramKind kind : kinds) {
        CountAudit a = audit_counts(inst, cat, kind);
        std::printf("%-6s %10s %10lld %10lld %10lld %6lld\n", to_string(a.kind).c_str(), "built",
                    a.built.binary, a.built.continuous, a.built.linear, a.built.cone);
        std::printf("%-6s %10s %10lld %10lld %10lld %6lld\n", "", "formula", a.formula.binary,
                    a.formula.continuous, a.formula.linear, a.formula.cone);
    }
    std::printf(
        "note: formula linear counts follow the conventional accounting (every\n"
        "ordered size pair and product-envelope sign rows); the built programs\n"
        "skip equal-size ordering rows and keep sign restrictions as bounds,\n"
        "so their linear row count is lower by construction.\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint extended-warranty design and pricing toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate", "sample an instance from a scenario");
    gen->add_option("--scenario", gen_args.scenario_path, "scenario file (overrides flags)");
    gen->add_option("--w", gen_args.spec.w, "number of subsystems")->capture_default_str();
    gen->add_option("--m", gen_args.spec.m, "number of customer groups")->capture_default_str();
    gen->add_option("--l", gen_args.spec.l, "discount levels (0 = one per subsystem)")
        ->capture_default_str();
    gen->add_option("--gamma", gen_args.spec.gamma, "price-to-cost ratio")->capture_default_str();
    gen->add_option("--theta", gen_args.spec.theta, "advertising cost per contract")
        ->capture_default_str();
    gen->add_option("--seed", gen_args.spec.seed, "seed")->capture_default_str();
    gen->add_option("--utility", gen_args.utility, "linear | diminishing")->capture_default_str();
    gen->add_option("--case", gen_args.customer_case, "uniform | decreasing | symmetric")
        ->capture_default_str();
    gen->add_option("--failures", gen_args.failure_setting,
                    "baseline | hu-l | hu-h | heu | un-m | correlated")
        ->capture_default_str();
    gen->add_option("--attraction", gen_args.attraction, "uniform | normal | power-law")
        ->capture_default_str();
    gen->add_option("--ladder", gen_args.ladder, "explicit discount multipliers");
    gen->add_option("--out", gen_args.out, "instance output path (- = stdout)")
        ->capture_default_str();
    gen->add_option("--scenario-out", gen_args.scenario_out, "also write the scenario file");

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("--in", solve_args.in, "instance file")->required();
    solve->add_option("--method", solve_args.method, "exact | its | ga | bm1 | bm2 | bm3")
        ->capture_default_str();
    solve->add_option("--time-limit", solve_args.time_limit, "seconds (0 = unlimited)")
        ->capture_default_str();
    solve->add_option("--step-time-limit", solve_args.step_time_limit,
                      "per-block seconds for its (0 = unlimited)")
        ->capture_default_str();
    solve->add_option("--max-iterations", solve_args.max_iterations, "its iteration cap")
        ->capture_default_str();
    uint64_t seed_flag = 0;
    CLI::Option* seed_opt =
        solve->add_option("--seed", seed_flag, "ga seed (default: the instance's seed)");
    solve->add_option("--out", solve_args.out, "solution output path (- = stdout)")
        ->capture_default_str();

    BenchmarkArgs bench_args;
    CLI::App* bench = app.add_subcommand("benchmark", "run a replication plan");
    bench->add_option("--plan", bench_args.plan_path, "plan file (jdpew-plan/1)")->required();
    bench->add_option("--reps", bench_args.reps_override, "override replication count");
    bench->add_option("--out", bench_args.out_override, "override output directory");

    ExportArgs export_args;
    CLI::App* exp = app.add_subcommand("export", "write the conic interchange file");
    exp->add_option("--in", export_args.in, "instance file")->required();
    exp->add_option("--kind", export_args.kind, "full | step1 | step2 | bm1 | bm2 | bm3")
        ->capture_default_str();
    exp->add_option("--out", export_args.out, "output path (- = stdout)")->capture_default_str();

    GridArgs grid_args;
    CLI::App* grid = app.add_subcommand("grid", "render a solution as selection grids");
    grid->add_option("--in", grid_args.in, "solution file")->required();
    grid->add_option("--out", grid_args.out, "basename; writes <out>.txt and <out>.csv");

    AuditArgs audit_args;
    CLI::App* audit = app.add_subcommand("audit", "variable/constraint count audit");
    audit->add_option("--in", audit_args.in, "instance file (overrides dimension flags)");
    audit->add_option("--w", audit_args.w, "number of subsystems")->capture_default_str();
    audit->add_option("--m", audit_args.m, "number of customer groups")->capture_default_str();
    audit->add_option("--l", audit_args.l, "discount levels")->capture_default_str();
    audit->add_flag("--json", audit_args.as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        if (rc != 0) emit_error("cli", e.what());
        return rc;
    }

    try {
        if (*gen) return cmd_generate(gen_args);
        if (*solve) {
            if (*seed_opt) solve_args.seed = seed_flag;
            return cmd_solve(solve_args);
        }
        if (*bench) return cmd_benchmark(bench_args);
        if (*exp) return cmd_export(export_args);
        if (*grid) return cmd_grid(grid_args);
        if (*audit) return cmd_audit(audit_args);
    } catch (const Error& e) {
        emit_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 0;
}

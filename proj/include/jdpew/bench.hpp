// Experiment harness: comparison metrics, replication plans, a resumable
// multi-method runner with CSV output, and solution grids.
//
// A plan (schema "jdpew-plan/1") names a list of scenarios, the methods to
// run on each, a replication count, and a base seed; replication r of every
// scenario runs on seed base_seed + r, so two methods on the same replication
// always see the same instance.  The runner executes every
// (scenario, method, replication) cell, skipping cells already present in the
// output directory's raw.csv (resume by scenario-content key), and emits
//   raw.csv         one row per cell, full-precision floats
//   aggregates.csv  per-(scenario, method) means plus per-scenario metrics
//   aggregates.txt  the same aggregates as an aligned table, 6 decimals
// Aggregates are a pure function of the raw rows, so recomputing them from
// raw.csv reproduces the emitted files byte for byte.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jdpew/gen.hpp"
#include "jdpew/instance.hpp"

namespace jdpew {

// Relative profit difference of a certified/joint method against the
// iterative solver, in percent: 100 * (a - b) / b.
// Throws Error{"zero-denominator"} when b == 0.
double metric_gap(double profit_ref, double profit_its);

// Absolute profit increase of the joint method over a benchmark: a - b.
double metric_increment(double profit_joint, double profit_bm);

// Relative profit increase of the joint method over a benchmark, in percent:
// 100 * (a - b) / b.  Throws Error{"zero-denominator"} when b == 0.
double metric_benefit(double profit_joint, double profit_bm);

// One named scenario of a plan.  The embedded spec's seed field is ignored;
// cell seeds derive from the plan's base seed.
struct PlanScenario {
    std::string name;
    ScenarioSpec spec;
};

struct ExperimentPlan {
    std::vector<PlanScenario> scenarios;
    std::vector<std::string> methods;  // exact | its | ga | bm1 | bm2 | bm3
    int reps = 1;
    uint64_t base_seed = 42;
    double budget_sec = 0.0;  // 0 = no budget (solvers run to completion)
    std::string out_dir = "results";

    // Optional per-method budget overrides, parallel arrays.
    std::vector<std::string> budget_methods;
    std::vector<double> budget_values;

    double budget_for(const std::string& method) const;
};

// Schema "jdpew-plan/1"; writer emits fields in fixed order,
// write(read(text)) == text for files produced by the writer.
std::string write_plan_text(const ExperimentPlan& plan);
ExperimentPlan read_plan_text(const std::string& text);
ExperimentPlan read_plan_file(const std::string& path);
void validate_plan(const ExperimentPlan& plan);

// Content key of a scenario (dims, parameters, ladder — everything that
// shapes the sampled instances except the seed), used for resume matching.
std::string scenario_key(const ScenarioSpec& spec);

struct ResultRow {
    std::string scenario;
    std::string scenario_key;
    std::string method;
    int replication = 0;
    uint64_t seed = 0;
    double profit = 0.0;  // NaN for failed cells
    double time_sec = 0.0;
    std::string certificate;  // proven-optimal | best-found | converged |
                              // iteration-cap | budget | heuristic | error:<kind>
    bool failed() const;
};

struct AggregateRow {
    std::string scenario;
    std::string method;
    int reps = 0;  // non-failed cells only
    double mean_profit = 0.0;
    double mean_time_sec = 0.0;
};

// Per-scenario derived metric; metric is one of gap, increment-<bm>,
// benefit-<bm>.  The joint side is the exact method's mean when present,
// otherwise the iterative solver's.
struct MetricRow {
    std::string scenario;
    std::string metric;
    double value = 0.0;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<AggregateRow> aggregates;
    std::vector<MetricRow> metrics;
};

// Raw CSV codec.  Header line plus one row per cell; fixed column order
// scenario,scenario_key,method,replication,seed,profit,time_sec,certificate;
// floats at full precision.
std::string write_raw_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_raw_csv(const std::string& text);

// Recomputes aggregates and metrics from table.rows (pure, deterministic:
// groups ordered by first appearance, means accumulated in row order, failed
// cells excluded, metrics with zero denominators skipped).
void aggregate_rows(ResultTable& table);

std::string write_aggregate_csv(const ResultTable& table);
std::string render_aggregate_table(const ResultTable& table);

// Runs the plan; reads JDPEW_WORKERS (default 1) for the cell worker count.
// Within one (scenario, method) group replications run in the pool and the
// group's rows are appended to raw.csv when the group completes, so the file
// layout is independent of thread timing.  Per-cell failures are recorded as
// error rows and the run continues.  A finished plan re-run leaves the
// directory untouched.
ResultTable run_experiment(const ExperimentPlan& plan);

// Runs one cell in-process (used by the runner's workers and by `solve`-like
// one-off callers).  Never throws: failures come back as error rows.
ResultRow run_cell(const PlanScenario& scenario, const std::string& method, int replication,
                   uint64_t seed, double budget_sec);

// --- Solution grids -------------------------------------------------------
//
// Three aligned grids: X (contracts x groups), y (contracts), Z (contracts x
// discount levels).  Selected cells print '*', unselected '.'; in Z the rows
// of non-advertised contracts carry canonical placeholder levels and are
// marked '~' (the contract is not priced), so the number of '*' cells in Z
// equals the number of advertised contracts.
std::string render_solution_grid(const Catalog& cat, const Decision& dec);

// CSV form: header grid,row,col,value with every cell of x, y, and z listed
// (zeros included).  parse(write(d)) == d.
std::string write_solution_grid_csv(const Decision& dec);
Decision parse_solution_grid_csv(const std::string& text);

}  // namespace jdpew

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jdpew/gen.hpp"
#include "jdpew/instance.hpp"

namespace jdpew {

// One ITS iteration as recorded in a solution file.
struct ItsIterRecord {
    int iteration = 0;
    double profit_after_design = 0.0;
    double profit_after_pricing = 0.0;
};

struct ItsTrace {
    std::string termination;  // converged | iteration-cap | budget
    std::vector<ItsIterRecord> iterations;
};

// On-disk solution: decision plus solver provenance.
struct SolutionFile {
    std::string method;  // exact | its | ga | bm1 | bm2 | bm3
    int w = 0;
    Decision decision;
    double objective = 0.0;
    std::string certificate;  // proven-optimal | best-found
    double elapsed_sec = 0.0;
    long long nodes = 0;
    long long z_explored = 0;
    long long z_skipped = 0;
    std::optional<ItsTrace> its_trace;
};

// Serializers produce the documented schemas (jdpew-instance/1,
// jdpew-scenario/1, jdpew-solution/1): field order fixed, numbers with 17
// significant digits, so write(read(text)) == text for our own files.
std::string write_instance_text(const Instance& inst);
Instance read_instance_text(const std::string& text);

std::string write_scenario_text(const ScenarioSpec& spec);
ScenarioSpec read_scenario_text(const std::string& text);

std::string write_solution_text(const SolutionFile& sol);
SolutionFile read_solution_text(const std::string& text);

// File helpers; throw Error{"io"} on failure.
std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

Instance read_instance_file(const std::string& path);
ScenarioSpec read_scenario_file(const std::string& path);
SolutionFile read_solution_file(const std::string& path);

}  // namespace jdpew

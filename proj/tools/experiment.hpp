#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planshield/benchgen.hpp"
#include "planshield/shield.hpp"

namespace planshield::cli {

// One shielding run: an instance under one plan-count variant ("10", "100",
// "all" or any positive integer).
struct ExperimentRow {
    std::string domain;
    std::string instance;
    std::string variant;
    bool solved = false;
    double time_total_s = 0.0;
    double time_enum_s = 0.0;
    double time_ilp_s = 0.0;
    double time_verify_s = 0.0;
    std::optional<std::size_t> num_mods;  // absent when unsolved
    std::optional<int> success;           // 0/1, absent when unsolved
    std::string error;                    // stage-tagged message when unsolved
};

struct ExperimentInstance {
    std::string domain;
    std::string instance;
    std::optional<std::string> task_path;     // JSON task file
    std::optional<BenchConfig> bench_config;  // or generated on the fly
};

struct ExperimentSuite {
    std::vector<ExperimentInstance> instances;
    std::vector<std::string> variants;  // "10", "100", "all", ...
    double time_limit_s = 1800.0;
    int jobs = 1;
};

ExperimentSuite load_suite(const std::string& path);

// Runs the full instance x variant grid; per-row failures are recorded, never
// fatal. Row order is the grid order regardless of scheduling.
std::vector<ExperimentRow> run_suite(const ExperimentSuite& suite);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

// Table-1-style aggregation: per (domain, variant) cell, #solved, mean/stddev
// of time and modification count, and the success total.
std::string summarize(const std::vector<ExperimentRow>& rows);

}  // namespace planshield::cli

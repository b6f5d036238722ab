#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "flap/abc.hpp"
#include "flap/analysis/report.hpp"
#include "flap/dataset.hpp"
#include "flap/problems.hpp"

namespace flap {

/// Everything needed to reproduce a batch of seeded runs.
struct ExperimentSpec {
    std::string problem = "onemax"; // onemax | sukp
    std::size_t dims = 0;           // 0: 1000 for onemax, 500 for sukp
    std::size_t iters = 0;          // 0: 150 for onemax, 500 for sukp
    std::filesystem::path instance; // sukp instance file; generated when empty
    std::size_t elements = 0;       // generated sukp elements; 0: same as dims
    double density = 0.1;
    double capacity_ratio = 0.5;
    std::uint64_t instance_seed = 1;
    std::size_t runs = 10;
    std::size_t colony = 20;
    std::size_t limit = 100;
    std::uint64_t seed = 1;
    std::string pool = "0,1,2,3";
    bool record_failures = false;
    std::string eap_variant = "literal"; // literal | sigma-divided
    std::size_t threads = 1;
    std::filesystem::path out;

    /// Copy with problem-dependent defaults filled in.
    ExperimentSpec resolved() const;
    /// Throws ValidationError.
    void validate() const;
    /// key=value lines accepted back by `flap run --config`.
    std::string to_config() const;
};

std::vector<OperatorId> parse_pool(const std::string& text);
EapVariant parse_eap_variant(const std::string& text);

std::shared_ptr<const Problem> make_problem(const ExperimentSpec& spec);

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<RunResult> runs;
    /// Merged in run_id order, emission order within a run.
    std::vector<CaseRecord> records;
};

/// Runs spec.runs colonies with seeds seed, seed+1, ... (run_id 0, 1, ...).
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Validates, checks that spec.out is writable, runs, and writes
/// cases.csv, success_table.csv and run.log.
ExperimentResult cmd_run(const ExperimentSpec& spec);

analysis::AnalysisReport cmd_analyze(const std::filesystem::path& dataset,
                                     const std::filesystem::path& out,
                                     const analysis::EvaluateParams& params = {},
                                     const std::string& problem = {});

void cmd_gen_sukp(const SukpGenerator& params, const std::filesystem::path& path);

/// Creates the directory and probes it with a temporary file.
void ensure_writable_directory(const std::filesystem::path& dir);

} // namespace flap

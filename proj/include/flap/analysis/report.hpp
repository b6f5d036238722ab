#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flap/analysis/data_matrix.hpp"
#include "flap/analysis/forest.hpp"
#include "flap/analysis/margin.hpp"
#include "flap/analysis/perceptron.hpp"
#include "flap/analysis/statistics.hpp"
#include "flap/dataset.hpp"

namespace flap::analysis {

struct EvaluateParams {
    std::uint64_t seed = 1;
    double test_fraction = 0.2;
    std::size_t chi2_bins = 10;
    ForestParams forest;
    MarginParams margin;
    PerceptronParams perceptron;
};

struct PhaseReport {
    int phase = 1;
    std::size_t rows = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::vector<std::size_t> class_counts;
    /// Classes with fewer than two rows, excluded before splitting.
    std::vector<int> dropped_classes;
    SquareMatrix pearson;
    ImportanceRanking chi2;
    ImportanceRanking forest_importance;
    ImportanceRanking margin_importance;
    double forest_accuracy = 0.0;
    double margin_accuracy = 0.0;
    double perceptron_accuracy = 0.0;
    double baseline = 0.0;
};

struct AnalysisReport {
    std::string problem;
    std::vector<std::string> features;
    std::vector<PhaseReport> phases;

    double mean_forest() const;
    double mean_margin() const;
    double mean_perceptron() const;
    double mean_baseline() const;
};

/// Split, standardise (margin and perceptron only), train all three models
/// and compute the correlation and ranking views for one phase.
PhaseReport evaluate_phase(int phase, const DataMatrix& data, const EvaluateParams& params);

/// Requires every phase to be present. Throws ValidationError naming the
/// first phase that is missing or has fewer than two usable classes.
AnalysisReport evaluate(const std::string& problem, const std::array<DataMatrix, 3>& phases,
                        const EvaluateParams& params = {});
AnalysisReport evaluate(const std::vector<CaseRecord>& records,
                        const EvaluateParams& params = {});

/// phase,forest,margin,perceptron rows for phases 1-3 and the mean.
std::string accuracy_csv(const AnalysisReport& report);
std::string format_accuracy_table(const AnalysisReport& report);

/// pearson_phaseK.csv, chi2_phaseK.csv, importance_{forest,margin}_phaseK.csv,
/// importance_long.csv, accuracy.csv and report.txt.
void write_report(const AnalysisReport& report, const std::filesystem::path& dir);

} // namespace flap::analysis

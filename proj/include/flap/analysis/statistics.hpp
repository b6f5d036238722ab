#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flap/analysis/data_matrix.hpp"

namespace flap::analysis {

struct SquareMatrix {
    std::size_t size = 0;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
};

/// Pearson correlation; 0 if either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Symmetric, unit diagonal. Constant columns correlate 0 with all others.
SquareMatrix pearson_matrix(const DataMatrix& data);

/// Per-feature scores with their method tag. `scores` are min-max
/// normalised raw values; `order` lists feature indices best first.
struct ImportanceRanking {
    std::string method;
    std::vector<std::string> names;
    std::vector<double> raw;
    std::vector<double> scores;
    std::vector<std::size_t> order;

    /// 1-based rank of a feature.
    std::size_t rank_of(std::size_t feature) const;
};

ImportanceRanking make_ranking(std::string method, std::vector<std::string> names,
                               std::vector<double> raw);

/// Equal-frequency bin of every value; at most `bins` bins, duplicate edges merged.
std::vector<std::size_t> equal_frequency_bins(std::span<const double> values, std::size_t bins);

/// Chi-square statistic of the bins x classes contingency table.
double chi2_statistic(std::span<const double> feature, std::span<const int> labels,
                      std::size_t bins);

/// Throws ValidationError when fewer than two classes are present.
ImportanceRanking chi2_rank(const DataMatrix& data, std::size_t bins = 10);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Per-class test share round(test_fraction * n_c), kept within [1, n_c - 1].
/// Throws ValidationError when a class has fewer than two rows.
Split stratified_split(std::span<const int> labels, double test_fraction, std::uint64_t seed);

/// Column means and population standard deviations from a training set.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const DataMatrix& train);
    /// Zero-variance columns map to 0.
    void apply(DataMatrix& data) const;
};

std::pair<DataMatrix, DataMatrix> zscore_fit_apply(DataMatrix train, DataMatrix test);

/// Fraction of rows with predicted == actual.
double accuracy(std::span<const int> predicted, std::span<const int> actual);

/// Test accuracy of always predicting the most frequent training label
/// (lowest label on ties).
double majority_baseline(std::span<const int> train_labels, std::span<const int> test_labels);

} // namespace flap::analysis

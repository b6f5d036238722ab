#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flap/analysis/data_matrix.hpp"
#include "flap/analysis/statistics.hpp"

namespace flap::analysis {

struct ForestParams {
    std::size_t trees = 200;
    /// Candidate features per split; 0 selects ceil(sqrt(columns)).
    std::size_t max_features = 0;
    std::size_t min_samples_split = 2;
    std::uint64_t seed = 1;
    /// Worker threads; the forest does not depend on this value.
    std::size_t threads = 1;
};

/// CART classification tree grown on Gini impurity.
class DecisionTree {
  public:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        int label = 0;
    };

    int predict(std::span<const double> row) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    /// Impurity decrease per feature, as a fraction of the root sample count.
    const std::vector<double>& importance() const noexcept { return importance_; }

  private:
    friend class TreeBuilder;
    std::vector<Node> nodes_;
    std::vector<double> importance_;
};

class RandomForest {
  public:
    /// Bootstrap-resampled trees. Tree t draws from Rng(derive(seed, t)), so
    /// serial and threaded training build identical forests.
    static RandomForest fit(const DataMatrix& train, const ForestParams& params = {});

    /// Majority vote, ties to the lowest label.
    int predict(std::span<const double> row) const;
    std::vector<int> predict(const DataMatrix& data) const;

    /// Mean impurity decrease per feature across trees, min-max normalised.
    ImportanceRanking importance() const;

    std::size_t size() const noexcept { return trees_.size(); }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

  private:
    std::vector<DecisionTree> trees_;
    std::vector<std::string> names_;
    std::size_t label_slots_ = 0;
};

/// Throws ValidationError on fewer than two classes.
RandomForest train_forest(const DataMatrix& train, const ForestParams& params = {});

} // namespace flap::analysis

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flap/analysis/data_matrix.hpp"
#include "flap/analysis/statistics.hpp"

namespace flap::analysis {

struct MarginParams {
    double lambda = 1e-4;
    std::size_t epochs = 100;
    std::uint64_t seed = 1;
};

/// One-vs-rest linear max-margin classifier.
///
/// Each class model minimises lambda/2 |w|^2 + mean hinge loss by stochastic
/// subgradient steps of size 1/(lambda t) with projection onto the ball of
/// radius 1/sqrt(lambda). The bias is an extra weight on a constant input.
/// Expects standardised features; raw features train but are ill-conditioned.
class MarginClassifier {
  public:
    static MarginClassifier fit(const DataMatrix& train, const MarginParams& params = {});

    /// Decision value of every label slot; absent classes score -infinity.
    std::vector<double> decision(std::span<const double> row) const;
    int predict(std::span<const double> row) const;
    std::vector<int> predict(const DataMatrix& data) const;

    /// weights()[k] holds the feature coefficients of class k followed by the bias.
    const std::vector<std::vector<double>>& weights() const noexcept { return weights_; }

    /// Mean |coefficient| across the trained class models, min-max normalised.
    ImportanceRanking coefficients() const;

  private:
    std::vector<std::vector<double>> weights_;
    std::vector<bool> trained_;
    std::vector<std::string> names_;
};

MarginClassifier train_margin(const DataMatrix& train, const MarginParams& params = {});

} // namespace flap::analysis

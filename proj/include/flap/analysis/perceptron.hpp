#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flap/analysis/data_matrix.hpp"

namespace flap::analysis {

struct PerceptronParams {
    std::size_t hidden = 32;
    std::size_t epochs = 200;
    std::size_t batch = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 1;
};

/// Feedforward network: inputs -> ReLU hidden layer -> softmax.
/// Trained on mean cross-entropy with Adam over shuffled mini-batches.
class Perceptron {
  public:
    /// He-uniform weights, zero biases.
    Perceptron(std::size_t inputs, std::size_t hidden, std::size_t classes, std::uint64_t seed);

    static Perceptron fit(const DataMatrix& train, std::size_t classes,
                          const PerceptronParams& params = {});

    /// Mean cross-entropy over the given rows (all rows if empty).
    double loss(const DataMatrix& data, std::span<const std::size_t> rows = {}) const;
    /// Gradient of loss() with respect to parameters(), same layout.
    std::vector<double> gradient(const DataMatrix& data,
                                 std::span<const std::size_t> rows = {}) const;

    std::vector<double> probabilities(std::span<const double> row) const;
    int predict(std::span<const double> row) const;
    std::vector<int> predict(const DataMatrix& data) const;

    /// Flat layout: W1 (hidden x inputs), b1, W2 (classes x hidden), b2.
    std::vector<double>& parameters() noexcept { return params_; }
    const std::vector<double>& parameters() const noexcept { return params_; }

    std::size_t inputs() const noexcept { return inputs_; }
    std::size_t hidden() const noexcept { return hidden_; }
    std::size_t classes() const noexcept { return classes_; }

  private:
    void forward(std::span<const double> x, std::vector<double>& hidden,
                 std::vector<double>& probs) const;
    double accumulate(const DataMatrix& data, std::span<const std::size_t> rows,
                      std::vector<double>* grad) const;

    std::size_t w1() const { return 0; }
    std::size_t b1() const { return hidden_ * inputs_; }
    std::size_t w2() const { return b1() + hidden_; }
    std::size_t b2() const { return w2() + classes_ * hidden_; }

    std::size_t inputs_;
    std::size_t hidden_;
    std::size_t classes_;
    std::vector<double> params_;
};

Perceptron train_perceptron(const DataMatrix& train, std::size_t classes,
                            const PerceptronParams& params = {});

} // namespace flap::analysis

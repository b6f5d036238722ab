#include "flap/analysis/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flap/error.hpp"
#include "flap/rng.hpp"

namespace flap::analysis {

MarginClassifier MarginClassifier::fit(const DataMatrix& train, const MarginParams& params) {
    train.validate();
    if (train.classes().size() < 2) {
        throw ValidationError("margin classifier: training set needs at least two classes");
    }
    if (!(params.lambda > 0.0) || params.epochs == 0) {
        throw ValidationError("margin classifier: lambda must be positive and epochs at least 1");
    }
    const std::size_t p = train.cols();
    const std::size_t slots = train.label_slots();

    MarginClassifier model;
    model.names_ = train.names;
    model.weights_.assign(slots, std::vector<double>(p + 1, 0.0));
    model.trained_.assign(slots, false);
    for (int y : train.labels) {
        model.trained_[static_cast<std::size_t>(y)] = true;
    }

    const double radius = 1.0 / std::sqrt(params.lambda);
    Rng rng(params.seed);
    std::vector<std::size_t> order(train.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        shuffle(order, rng);
        for (auto r : order) {
            ++t;
            const double eta = 1.0 / (params.lambda * double(t));
            const double shrink = 1.0 - eta * params.lambda;
            const auto x = train.row(r);
            for (std::size_t k = 0; k < slots; ++k) {
                if (!model.trained_[k]) {
                    continue;
                }
                auto& w = model.weights_[k];
                const double target = train.labels[r] == static_cast<int>(k) ? 1.0 : -1.0;
                double score = w[p];
                for (std::size_t c = 0; c < p; ++c) {
                    score += w[c] * x[c];
                }
                for (auto& wc : w) {
                    wc *= shrink;
                }
                if (target * score < 1.0) {
                    for (std::size_t c = 0; c < p; ++c) {
                        w[c] += eta * target * x[c];
                    }
                    w[p] += eta * target;
                }
                double norm = 0.0;
                for (double wc : w) {
                    norm += wc * wc;
                }
                norm = std::sqrt(norm);
                if (norm > radius) {
                    const double scale = radius / norm;
                    for (auto& wc : w) {
                        wc *= scale;
                    }
                }
            }
        }
    }
    return model;
}

std::vector<double> MarginClassifier::decision(std::span<const double> row) const {
    const std::size_t p = names_.size();
    if (row.size() != p) {
        throw ValidationError("margin classifier: row has wrong number of features");
    }
    std::vector<double> out(weights_.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (!trained_[k]) {
            continue;
        }
        double score = weights_[k][p];
        for (std::size_t c = 0; c < p; ++c) {
            score += weights_[k][c] * row[c];
        }
        out[k] = score;
    }
    return out;
}

int MarginClassifier::predict(std::span<const double> row) const {
    const auto d = decision(row);
    return static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
}

std::vector<int> MarginClassifier::predict(const DataMatrix& data) const {
    std::vector<int> out(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        out[r] = predict(data.row(r));
    }
    return out;
}

ImportanceRanking MarginClassifier::coefficients() const {
    const std::size_t p = names_.size();
    std::vector<double> mean(p, 0.0);
    std::size_t models = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (!trained_[k]) {
            continue;
        }
        ++models;
        for (std::size_t c = 0; c < p; ++c) {
            mean[c] += std::abs(weights_[k][c]);
        }
    }
    for (auto& m : mean) {
        m /= static_cast<double>(std::max<std::size_t>(models, 1));
    }
    return make_ranking("margin", names_, std::move(mean));
}

MarginClassifier train_margin(const DataMatrix& train, const MarginParams& params) {
    return MarginClassifier::fit(train, params);
}

} // namespace flap::analysis

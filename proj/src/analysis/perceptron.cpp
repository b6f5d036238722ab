#include "flap/analysis/perceptron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flap/error.hpp"
#include "flap/rng.hpp"

namespace flap::analysis {

Perceptron::Perceptron(std::size_t inputs, std::size_t hidden, std::size_t classes,
                       std::uint64_t seed)
    : inputs_(inputs), hidden_(hidden), classes_(classes) {
    if (inputs == 0 || hidden == 0 || classes < 2) {
        throw ValidationError("perceptron: need inputs, hidden units and at least two classes");
    }
    params_.assign(b2() + classes_, 0.0);
    Rng rng(seed);
    const double limit1 = std::sqrt(6.0 / double(inputs_));
    for (std::size_t i = 0; i < hidden_ * inputs_; ++i) {
        params_[w1() + i] = (2.0 * rng.uniform() - 1.0) * limit1;
    }
    const double limit2 = std::sqrt(6.0 / double(hidden_));
    for (std::size_t i = 0; i < classes_ * hidden_; ++i) {
        params_[w2() + i] = (2.0 * rng.uniform() - 1.0) * limit2;
    }
}

void Perceptron::forward(std::span<const double> x, std::vector<double>& h,
                         std::vector<double>& probs) const {
    h.resize(hidden_);
    probs.resize(classes_);
    for (std::size_t j = 0; j < hidden_; ++j) {
        const double* w = params_.data() + w1() + j * inputs_;
        double z = params_[b1() + j];
        for (std::size_t i = 0; i < inputs_; ++i) {
            z += w[i] * x[i];
        }
        h[j] = z > 0.0 ? z : 0.0;
    }
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < classes_; ++k) {
        const double* w = params_.data() + w2() + k * hidden_;
        double z = params_[b2() + k];
        for (std::size_t j = 0; j < hidden_; ++j) {
            z += w[j] * h[j];
        }
        probs[k] = z;
        top = std::max(top, z);
    }
    double total = 0.0;
    for (auto& p : probs) {
        p = std::exp(p - top);
        total += p;
    }
    for (auto& p : probs) {
        p /= total;
    }
}

double Perceptron::accumulate(const DataMatrix& data, std::span<const std::size_t> rows,
                              std::vector<double>* grad) const {
    if (data.cols() != inputs_) {
        throw ValidationError("perceptron: data has wrong number of features");
    }
    std::vector<std::size_t> all;
    if (rows.empty()) {
        all.resize(data.rows());
        std::iota(all.begin(), all.end(), std::size_t{0});
        rows = all;
    }
    if (rows.empty()) {
        throw ValidationError("perceptron: no rows");
    }
    if (grad) {
        grad->assign(params_.size(), 0.0);
    }
    std::vector<double> h;
    std::vector<double> probs;
    std::vector<double> dhidden(hidden_);
    const double scale = 1.0 / double(rows.size());
    double loss = 0.0;
    for (auto r : rows) {
        const auto x = data.row(r);
        const auto y = static_cast<std::size_t>(data.labels[r]);
        if (y >= classes_) {
            throw ValidationError("perceptron: label outside the class range");
        }
        forward(x, h, probs);
        loss -= std::log(std::max(probs[y], 1e-300));
        if (!grad) {
            continue;
        }
        auto& g = *grad;
        std::fill(dhidden.begin(), dhidden.end(), 0.0);
        for (std::size_t k = 0; k < classes_; ++k) {
            const double dz = (probs[k] - (k == y ? 1.0 : 0.0)) * scale;
            g[b2() + k] += dz;
            const double* w = params_.data() + w2() + k * hidden_;
            double* gw = g.data() + w2() + k * hidden_;
            for (std::size_t j = 0; j < hidden_; ++j) {
                gw[j] += dz * h[j];
                dhidden[j] += dz * w[j];
            }
        }
        for (std::size_t j = 0; j < hidden_; ++j) {
            if (h[j] <= 0.0) {
                continue;
            }
            const double dz = dhidden[j];
            g[b1() + j] += dz;
            double* gw = g.data() + w1() + j * inputs_;
            for (std::size_t i = 0; i < inputs_; ++i) {
                gw[i] += dz * x[i];
            }
        }
    }
    return loss * scale;
}

double Perceptron::loss(const DataMatrix& data, std::span<const std::size_t> rows) const {
    return accumulate(data, rows, nullptr);
}

std::vector<double> Perceptron::gradient(const DataMatrix& data,
                                         std::span<const std::size_t> rows) const {
    std::vector<double> g;
    accumulate(data, rows, &g);
    return g;
}

std::vector<double> Perceptron::probabilities(std::span<const double> row) const {
    if (row.size() != inputs_) {
        throw ValidationError("perceptron: row has wrong number of features");
    }
    std::vector<double> h;
    std::vector<double> probs;
    forward(row, h, probs);
    return probs;
}

int Perceptron::predict(std::span<const double> row) const {
    const auto p = probabilities(row);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<int> Perceptron::predict(const DataMatrix& data) const {
    std::vector<int> out(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        out[r] = predict(data.row(r));
    }
    return out;
}

Perceptron Perceptron::fit(const DataMatrix& train, std::size_t classes,
                           const PerceptronParams& params) {
    train.validate();
    if (params.batch == 0 || params.epochs == 0 || !(params.learning_rate > 0.0)) {
        throw ValidationError("perceptron: batch, epochs and learning rate must be positive");
    }
    Perceptron net(train.cols(), params.hidden, classes, params.seed);
    Rng rng(Rng::derive(params.seed, 1));
    std::vector<double> m(net.params_.size(), 0.0);
    std::vector<double> v(net.params_.size(), 0.0);
    std::vector<std::size_t> order(train.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    double beta1_power = 1.0;
    double beta2_power = 1.0;
    std::vector<double> g;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        shuffle(order, rng);
        for (std::size_t start = 0; start < order.size(); start += params.batch) {
            const std::size_t stop = std::min(start + params.batch, order.size());
            const std::span<const std::size_t> batch(order.data() + start, stop - start);
            net.accumulate(train, batch, &g);
            beta1_power *= params.beta1;
            beta2_power *= params.beta2;
            const double step =
                params.learning_rate * std::sqrt(1.0 - beta2_power) / (1.0 - beta1_power);
            for (std::size_t i = 0; i < g.size(); ++i) {
                m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * g[i];
                v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * g[i] * g[i];
                net.params_[i] -= step * m[i] / (std::sqrt(v[i]) + params.epsilon);
            }
        }
    }
    return net;
}

Perceptron train_perceptron(const DataMatrix& train, std::size_t classes,
                            const PerceptronParams& params) {
    return Perceptron::fit(train, classes, params);
}

} // namespace flap::analysis

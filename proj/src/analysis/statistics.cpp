#include "flap/analysis/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "flap/error.hpp"
#include "flap/rng.hpp"

namespace flap::analysis {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("pearson: length mismatch");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        return 0.0;
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SquareMatrix pearson_matrix(const DataMatrix& data) {
    const std::size_t p = data.cols();
    SquareMatrix m{p, std::vector<double>(p * p, 0.0)};
    std::vector<std::vector<double>> columns(p);
    for (std::size_t c = 0; c < p; ++c) {
        columns[c] = data.column(c);
    }
    for (std::size_t i = 0; i < p; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double r = pearson(columns[i], columns[j]);
            m(i, j) = r;
            m(j, i) = r;
        }
    }
    return m;
}

std::size_t ImportanceRanking::rank_of(std::size_t feature) const {
    const auto it = std::find(order.begin(), order.end(), feature);
    if (it == order.end()) {
        throw ValidationError("rank_of: feature index out of range");
    }
    return static_cast<std::size_t>(it - order.begin()) + 1;
}

ImportanceRanking make_ranking(std::string method, std::vector<std::string> names,
                               std::vector<double> raw) {
    if (names.size() != raw.size()) {
        throw ValidationError("make_ranking: name and score counts differ");
    }
    ImportanceRanking r;
    r.method = std::move(method);
    r.names = std::move(names);
    r.raw = std::move(raw);
    r.scores.assign(r.raw.size(), 0.0);
    if (!r.raw.empty()) {
        const auto [lo, hi] = std::minmax_element(r.raw.begin(), r.raw.end());
        const double span = *hi - *lo;
        if (span > 0.0) {
            for (std::size_t i = 0; i < r.raw.size(); ++i) {
                r.scores[i] = (r.raw[i] - *lo) / span;
            }
        }
    }
    r.order.resize(r.raw.size());
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&r](std::size_t a, std::size_t b) { return r.raw[a] > r.raw[b]; });
    return r;
}

std::vector<std::size_t> equal_frequency_bins(std::span<const double> values, std::size_t bins) {
    if (bins == 0) {
        throw ValidationError("equal_frequency_bins: need at least one bin");
    }
    const std::size_t n = values.size();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    for (std::size_t k = 1; k < bins && n > 0; ++k) {
        const double edge = sorted[k * n / bins];
        if (edge > sorted.front() && (edges.empty() || edge > edges.back())) {
            edges.push_back(edge);
        }
    }
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    }
    return out;
}

double chi2_statistic(std::span<const double> feature, std::span<const int> labels,
                      std::size_t bins) {
    if (feature.size() != labels.size()) {
        throw ValidationError("chi2: feature and label lengths differ");
    }
    const auto bin = equal_frequency_bins(feature, bins);
    std::map<int, std::size_t> class_index;
    for (int y : labels) {
        class_index.emplace(y, 0);
    }
    std::size_t k = 0;
    for (auto& [label, idx] : class_index) {
        idx = k++;
    }
    const std::size_t bin_count = bin.empty() ? 0 : *std::max_element(bin.begin(), bin.end()) + 1;
    std::vector<double> observed(bin_count * k, 0.0);
    std::vector<double> row_total(bin_count, 0.0);
    std::vector<double> col_total(k, 0.0);
    for (std::size_t i = 0; i < bin.size(); ++i) {
        const std::size_t c = class_index[labels[i]];
        observed[bin[i] * k + c] += 1.0;
        row_total[bin[i]] += 1.0;
        col_total[c] += 1.0;
    }
    const double n = static_cast<double>(bin.size());
    double chi2 = 0.0;
    for (std::size_t b = 0; b < bin_count; ++b) {
        for (std::size_t c = 0; c < k; ++c) {
            const double expected = row_total[b] * col_total[c] / n;
            if (expected > 0.0) {
                const double diff = observed[b * k + c] - expected;
                chi2 += diff * diff / expected;
            }
        }
    }
    return chi2;
}

ImportanceRanking chi2_rank(const DataMatrix& data, std::size_t bins) {
    data.validate();
    if (data.classes().size() < 2) {
        throw ValidationError("chi2_rank: at least two classes are required");
    }
    std::vector<double> raw(data.cols());
    for (std::size_t c = 0; c < data.cols(); ++c) {
        const auto column = data.column(c);
        raw[c] = chi2_statistic(column, data.labels, bins);
    }
    return make_ranking("chi2", data.names, std::move(raw));
}

Split stratified_split(std::span<const int> labels, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ValidationError("stratified_split: test fraction must lie in (0, 1)");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    Rng rng(seed);
    Split split;
    for (auto& [label, members] : by_class) {
        const std::size_t n = members.size();
        if (n < 2) {
            throw ValidationError("stratified_split: class " + std::to_string(label) +
                                  " has fewer than 2 rows");
        }
        shuffle(members, rng);
        auto n_test = static_cast<std::size_t>(std::llround(test_fraction * double(n)));
        n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
        split.test.insert(split.test.end(), members.begin(),
                          members.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train.insert(split.train.end(),
                           members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

Standardizer Standardizer::fit(const DataMatrix& train) {
    if (train.rows() == 0) {
        throw ValidationError("standardizer: empty training set");
    }
    const std::size_t p = train.cols();
    const double n = static_cast<double>(train.rows());
    Standardizer s;
    s.mean.assign(p, 0.0);
    s.scale.assign(p, 0.0);
    for (std::size_t r = 0; r < train.rows(); ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            s.mean[c] += train.at(r, c);
        }
    }
    for (auto& m : s.mean) {
        m /= n;
    }
    for (std::size_t r = 0; r < train.rows(); ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            const double d = train.at(r, c) - s.mean[c];
            s.scale[c] += d * d;
        }
    }
    for (auto& sd : s.scale) {
        sd = std::sqrt(sd / n);
    }
    return s;
}

void Standardizer::apply(DataMatrix& data) const {
    if (data.cols() != mean.size()) {
        throw ValidationError("standardizer: column count mismatch");
    }
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            double& v = data.at(r, c);
            v = scale[c] > 0.0 ? (v - mean[c]) / scale[c] : 0.0;
        }
    }
}

std::pair<DataMatrix, DataMatrix> zscore_fit_apply(DataMatrix train, DataMatrix test) {
    const auto s = Standardizer::fit(train);
    s.apply(train);
    s.apply(test);
    return {std::move(train), std::move(test)};
}

double accuracy(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size() || actual.empty()) {
        throw ValidationError("accuracy: prediction and label counts differ or are empty");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        hits += static_cast<std::size_t>(predicted[i] == actual[i]);
    }
    return static_cast<double>(hits) / static_cast<double>(actual.size());
}

double majority_baseline(std::span<const int> train_labels, std::span<const int> test_labels) {
    if (train_labels.empty() || test_labels.empty()) {
        throw ValidationError("majority_baseline: empty label set");
    }
    std::map<int, std::size_t> counts;
    for (int y : train_labels) {
        ++counts[y];
    }
    int majority = counts.begin()->first;
    std::size_t best = 0;
    for (const auto& [label, count] : counts) {
        if (count > best) {
            best = count;
            majority = label;
        }
    }
    const auto hits = std::count(test_labels.begin(), test_labels.end(), majority);
    return static_cast<double>(hits) / static_cast<double>(test_labels.size());
}

} // namespace flap::analysis

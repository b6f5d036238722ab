#include "flap/analysis/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "flap/error.hpp"
#include "flap/rng.hpp"

namespace flap::analysis {

namespace {

int majority(std::span<const std::size_t> counts) {
    // max_element returns the first maximum, i.e. the lowest label.
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

double sum_squares_over_n(std::span<const std::size_t> counts, std::size_t n) {
    double s = 0.0;
    for (auto c : counts) {
        s += double(c) * double(c);
    }
    return s / double(n);
}

} // namespace

class TreeBuilder {
  public:
    TreeBuilder(const DataMatrix& data, std::size_t slots, std::size_t max_features,
                std::size_t min_split, Rng& rng)
        : data_(data), slots_(slots), max_features_(max_features), min_split_(min_split),
          rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> samples) {
        tree_ = DecisionTree{};
        tree_.importance_.assign(data_.cols(), 0.0);
        root_size_ = double(samples.size());
        features_.resize(data_.cols());
        std::iota(features_.begin(), features_.end(), std::size_t{0});
        grow(samples);
        return std::move(tree_);
    }

  private:
    struct Candidate {
        bool valid = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double score = 0.0; // sum of c^2/n over both children; larger is purer
    };

    std::uint32_t grow(std::vector<std::size_t>& samples) {
        const auto id = static_cast<std::uint32_t>(tree_.nodes_.size());
        tree_.nodes_.emplace_back();

        std::vector<std::size_t> counts(slots_, 0);
        for (auto s : samples) {
            ++counts[static_cast<std::size_t>(data_.labels[s])];
        }
        const std::size_t n = samples.size();
        tree_.nodes_[id].label = majority(counts);
        const bool pure = std::count(counts.begin(), counts.end(), std::size_t{0}) + 1 ==
                          static_cast<std::ptrdiff_t>(slots_);
        if (pure || n < min_split_) {
            return id;
        }

        const auto best = find_split(samples);
        if (!best.valid) {
            return id;
        }

        const double node_term = sum_squares_over_n(counts, n);
        // n * gini(node) - sum over children of n_k * gini(child)
        const double decrease = best.score - node_term;
        tree_.importance_[best.feature] += decrease / root_size_;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto s : samples) {
            (data_.at(s, best.feature) <= best.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        tree_.nodes_[id].feature = static_cast<int>(best.feature);
        tree_.nodes_[id].threshold = best.threshold;
        const auto l = grow(left);
        const auto r = grow(right);
        tree_.nodes_[id].left = l;
        tree_.nodes_[id].right = r;
        return id;
    }

    Candidate find_split(const std::vector<std::size_t>& samples) {
        Candidate best;
        const std::size_t p = features_.size();
        for (std::size_t k = 0; k < p; ++k) {
            const std::size_t j = k + rng_.index(p - k);
            std::swap(features_[k], features_[j]);
            if (k >= max_features_ && best.valid) {
                break;
            }
            evaluate_feature(samples, features_[k], best);
        }
        return best;
    }

    void evaluate_feature(const std::vector<std::size_t>& samples, std::size_t feature,
                          Candidate& best) {
        const std::size_t n = samples.size();
        sorted_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            sorted_[i] = {data_.at(samples[i], feature), data_.labels[samples[i]]};
        }
        std::sort(sorted_.begin(), sorted_.end());
        if (sorted_.front().first == sorted_.back().first) {
            return;
        }
        std::vector<std::size_t> left(slots_, 0);
        std::vector<std::size_t> right(slots_, 0);
        for (const auto& [v, y] : sorted_) {
            ++right[static_cast<std::size_t>(y)];
        }
        double left_sq = 0.0;
        double right_sq = 0.0;
        for (auto c : right) {
            right_sq += double(c) * double(c);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto y = static_cast<std::size_t>(sorted_[i].second);
            left_sq += 2.0 * double(left[y]) + 1.0;
            right_sq -= 2.0 * double(right[y]) - 1.0;
            ++left[y];
            --right[y];
            if (sorted_[i].first == sorted_[i + 1].first) {
                continue;
            }
            const double nl = double(i + 1);
            const double nr = double(n - i - 1);
            const double score = left_sq / nl + right_sq / nr;
            if (!best.valid || score > best.score) {
                const double a = sorted_[i].first;
                const double b = sorted_[i + 1].first;
                double threshold = a + (b - a) / 2.0;
                if (!(threshold < b)) {
                    threshold = a;
                }
                best = {true, feature, threshold, score};
            }
        }
    }

    const DataMatrix& data_;
    std::size_t slots_;
    std::size_t max_features_;
    std::size_t min_split_;
    Rng& rng_;
    DecisionTree tree_;
    double root_size_ = 1.0;
    std::vector<std::size_t> features_;
    std::vector<std::pair<double, int>> sorted_;
};

int DecisionTree::predict(std::span<const double> row) const {
    std::uint32_t id = 0;
    while (nodes_[id].feature >= 0) {
        const auto& node = nodes_[id];
        id = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[id].label;
}

RandomForest RandomForest::fit(const DataMatrix& train, const ForestParams& params) {
    train.validate();
    if (train.classes().size() < 2) {
        throw ValidationError("random forest: training set needs at least two classes");
    }
    if (params.trees == 0) {
        throw ValidationError("random forest: need at least one tree");
    }
    const std::size_t p = train.cols();
    const std::size_t max_features =
        params.max_features > 0
            ? std::min(params.max_features, p)
            : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))));

    RandomForest forest;
    forest.names_ = train.names;
    forest.label_slots_ = train.label_slots();
    forest.trees_.resize(params.trees);

    auto build_tree = [&](std::size_t t) {
        Rng rng(Rng::derive(params.seed, t));
        std::vector<std::size_t> bootstrap(train.rows());
        for (auto& s : bootstrap) {
            s = rng.index(train.rows());
        }
        TreeBuilder builder(train, forest.label_slots_, max_features,
                            std::max<std::size_t>(params.min_samples_split, 2), rng);
        forest.trees_[t] = builder.build(std::move(bootstrap));
    };

    const std::size_t workers = std::clamp<std::size_t>(params.threads, 1, params.trees);
    if (workers == 1) {
        for (std::size_t t = 0; t < params.trees; ++t) {
            build_tree(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < params.trees; t = next++) {
                    build_tree(t);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return forest;
}

int RandomForest::predict(std::span<const double> row) const {
    std::vector<std::size_t> votes(label_slots_, 0);
    for (const auto& tree : trees_) {
        ++votes[static_cast<std::size_t>(tree.predict(row))];
    }
    return majority(votes);
}

std::vector<int> RandomForest::predict(const DataMatrix& data) const {
    std::vector<int> out(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        out[r] = predict(data.row(r));
    }
    return out;
}

ImportanceRanking RandomForest::importance() const {
    std::vector<double> mean(names_.size(), 0.0);
    for (const auto& tree : trees_) {
        for (std::size_t c = 0; c < mean.size(); ++c) {
            mean[c] += tree.importance()[c];
        }
    }
    for (auto& m : mean) {
        m /= static_cast<double>(trees_.size());
    }
    return make_ranking("forest", names_, std::move(mean));
}

RandomForest train_forest(const DataMatrix& train, const ForestParams& params) {
    return RandomForest::fit(train, params);
}

} // namespace flap::analysis

#include <cmath>

#include "doctest.h"
#include "flap/analysis/statistics.hpp"
#include "flap/error.hpp"
#include "flap/rng.hpp"

using namespace flap;
using namespace flap::analysis;

namespace {

DataMatrix matrix(std::vector<std::vector<double>> columns, std::vector<int> labels) {
    DataMatrix m;
    m.labels = std::move(labels);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        m.names.push_back("f" + std::to_string(c));
    }
    m.values.resize(m.labels.size() * columns.size());
    for (std::size_t r = 0; r < m.labels.size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            m.at(r, c) = columns[c][r];
        }
    }
    return m;
}

} // namespace

TEST_CASE("pearson hand cases") {
    const std::vector<double> a{1, 2, 3}, b{3, 2, 1};
    CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pearson(a, b) + 1.0) < 1e-12);
    // Covariance 3.5 over sqrt(5 * 4.75).
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 5, 4};
    CHECK(std::abs(pearson(x, y) - 3.5 / std::sqrt(23.75)) < 1e-12);
    CHECK(pearson(x, std::vector<double>{5, 5, 5, 5}) == 0);
    CHECK_THROWS_AS(pearson(a, x), ValidationError);
}

TEST_CASE("pearson matrix is symmetric with unit diagonal") {
    Rng rng(1);
    std::vector<std::vector<double>> cols(6, std::vector<double>(50));
    for (auto& c : cols) {
        for (auto& v : c) {
            v = rng.uniform();
        }
    }
    cols[5].assign(50, 2.0);
    const auto m = pearson_matrix(matrix(cols, std::vector<int>(50, 0)));
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(m(i, i) == 1.0);
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(std::abs(m(i, j) - m(j, i)) <= 1e-12);
            if (i != j && (i == 5 || j == 5)) {
                CHECK(m(i, j) == 0);
            }
        }
    }
}

TEST_CASE("chi-square statistic") {
    const std::vector<double> f{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const std::vector<int> y{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    CHECK(chi2_statistic(f, y, 2) == 10.0);

    const std::vector<double> g{0, 1, 0, 1, 0, 1, 0, 1};
    const std::vector<int> z{0, 0, 1, 1, 0, 0, 1, 1};
    CHECK(chi2_statistic(g, z, 2) == 0.0);

    const std::vector<double> constant(10, 4.0);
    CHECK(chi2_statistic(constant, y, 10) == 0.0);
}

TEST_CASE("chi-square ranking") {
    Rng rng(2);
    std::vector<int> labels(200);
    std::vector<double> signal(200), noise(200), constant(200, 1.0);
    for (std::size_t i = 0; i < 200; ++i) {
        labels[i] = int(i % 4);
        signal[i] = labels[i] + 0.1 * rng.uniform();
        noise[i] = rng.uniform();
    }
    const auto r = chi2_rank(matrix({noise, signal, constant}, labels));
    CHECK(r.method == "chi2");
    CHECK(r.order[0] == 1);
    CHECK(r.scores[1] == 1.0);
    CHECK(r.scores[2] == 0.0);
    CHECK(r.rank_of(2) == 3);
    for (double s : r.raw) {
        CHECK(s >= 0);
    }
    CHECK_THROWS_AS(chi2_rank(matrix({signal}, std::vector<int>(200, 1))), ValidationError);
}

TEST_CASE("chi-square is invariant under strictly monotone transforms") {
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> f(120), g(120);
        std::vector<int> y(120);
        for (std::size_t i = 0; i < 120; ++i) {
            y[i] = int(rng.index(3));
            f[i] = double(rng.index(15)) + y[i] * rng.uniform();
            g[i] = std::exp(0.3 * f[i]) - 7.0;
        }
        CHECK(chi2_statistic(f, y, 10) == doctest::Approx(chi2_statistic(g, y, 10)));
    }
}

TEST_CASE("equal-frequency bins merge duplicate edges") {
    const std::vector<double> v{1, 1, 1, 1, 1, 1, 2, 3, 4, 5};
    const auto b = equal_frequency_bins(v, 5);
    CHECK(*std::max_element(b.begin(), b.end()) < 5);
    CHECK(b[0] == b[5]);
    CHECK(b[9] > b[6]);
}

TEST_CASE("stratified split") {
    std::vector<int> labels(100);
    for (int i = 0; i < 100; ++i) {
        labels[i] = i % 4;
    }
    const auto s = stratified_split(labels, 0.2, 7);
    CHECK(s.test.size() == 20);
    CHECK(s.train.size() == 80);
    std::array<int, 4> per{};
    for (auto i : s.test) {
        ++per[labels[i]];
    }
    CHECK(per == std::array<int, 4>{5, 5, 5, 5});
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(all[i] == i);
    }

    const auto again = stratified_split(labels, 0.2, 7);
    CHECK(again.test == s.test);
    CHECK(again.train == s.train);

    const std::vector<int> tiny{0, 0, 1, 1};
    const auto half = stratified_split(tiny, 0.5, 1);
    CHECK(half.test.size() == 2);
    CHECK(half.train.size() == 2);

    CHECK_THROWS_AS(stratified_split(std::vector<int>{0, 0, 1}, 0.2, 1), ValidationError);
    CHECK_THROWS_AS(stratified_split(tiny, 1.0, 1), ValidationError);
}

TEST_CASE("z-score uses training statistics only") {
    const auto train = matrix({{2, 4}, {3, 3}}, {0, 1});
    const auto test = matrix({{6}, {5}}, {0});
    const auto [a, b] = zscore_fit_apply(train, test);
    CHECK(a.at(0, 0) == -1);
    CHECK(a.at(1, 0) == 1);
    CHECK(a.at(0, 1) == 0);
    CHECK(a.at(1, 1) == 0);
    CHECK(b.at(0, 0) == 3);
    CHECK(b.at(0, 1) == 0);
}

TEST_CASE("accuracy and majority baseline") {
    CHECK(accuracy(std::vector<int>{1, 2, 3, 3}, std::vector<int>{1, 2, 0, 3}) == 0.75);
    CHECK(majority_baseline(std::vector<int>{2, 2, 1}, std::vector<int>{2, 1, 1, 2}) == 0.5);
    CHECK(majority_baseline(std::vector<int>{3, 1}, std::vector<int>{1, 1, 3}) ==
          doctest::Approx(2.0 / 3));
    CHECK_THROWS_AS(accuracy(std::vector<int>{1}, std::vector<int>{}), ValidationError);
}

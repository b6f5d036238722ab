#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flap/dataset.hpp"

namespace flap::analysis {

/// Row-major feature matrix with integer class labels.
struct DataMatrix {
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<int> labels;

    std::size_t rows() const noexcept { return labels.size(); }
    std::size_t cols() const noexcept { return names.size(); }

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols(), cols()};
    }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }

    std::vector<double> column(std::size_t c) const;
    void add_column(std::string name, std::span<const double> column);
    DataMatrix subset(std::span<const std::size_t> rows) const;

    /// Sorted distinct labels.
    std::vector<int> classes() const;
    /// Number of label slots needed, i.e. max label + 1.
    std::size_t label_slots() const;

    /// Non-empty, consistent sizes, finite values, non-negative labels.
    void validate() const;
};

/// The 19 features of every record (in a given phase, if set), labelled by operator.
DataMatrix from_records(const std::vector<CaseRecord>& records, std::optional<int> phase = {});

} // namespace flap::analysis

#include "flap/analysis/data_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "flap/error.hpp"

namespace flap::analysis {

std::vector<double> DataMatrix::column(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        out[r] = at(r, c);
    }
    return out;
}

void DataMatrix::add_column(std::string name, std::span<const double> column) {
    if (column.size() != rows()) {
        throw ValidationError("add_column: column length does not match row count");
    }
    const std::size_t old_cols = cols();
    std::vector<double> widened;
    widened.reserve(rows() * (old_cols + 1));
    for (std::size_t r = 0; r < rows(); ++r) {
        const auto src = row(r);
        widened.insert(widened.end(), src.begin(), src.end());
        widened.push_back(column[r]);
    }
    values = std::move(widened);
    names.push_back(std::move(name));
}

DataMatrix DataMatrix::subset(std::span<const std::size_t> selected) const {
    DataMatrix out;
    out.names = names;
    out.values.reserve(selected.size() * cols());
    out.labels.reserve(selected.size());
    for (auto r : selected) {
        const auto src = row(r);
        out.values.insert(out.values.end(), src.begin(), src.end());
        out.labels.push_back(labels[r]);
    }
    return out;
}

std::vector<int> DataMatrix::classes() const {
    std::vector<int> out(labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t DataMatrix::label_slots() const {
    if (labels.empty()) {
        return 0;
    }
    return static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

void DataMatrix::validate() const {
    if (rows() == 0 || cols() == 0) {
        throw ValidationError("data matrix: needs at least one row and one column");
    }
    if (values.size() != rows() * cols()) {
        throw ValidationError("data matrix: value count does not match rows x cols");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError("data matrix: non-finite entry");
        }
    }
    for (int y : labels) {
        if (y < 0) {
            throw ValidationError("data matrix: labels must be non-negative");
        }
    }
}

DataMatrix from_records(const std::vector<CaseRecord>& records, std::optional<int> phase) {
    DataMatrix m;
    m.names.assign(kFeatureNames.begin(), kFeatureNames.end());
    for (const auto& r : records) {
        if (phase && r.phase != *phase) {
            continue;
        }
        m.values.insert(m.values.end(), r.features.begin(), r.features.end());
        m.labels.push_back(static_cast<int>(index_of(r.op)));
    }
    return m;
}

} // namespace flap::analysis

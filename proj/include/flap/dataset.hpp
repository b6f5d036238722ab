#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "flap/features.hpp"
#include "flap/operators.hpp"

namespace flap {

inline constexpr std::size_t kPhaseCount = 3;

/// Search phase in {1, 2, 3}: the iteration budget split into equal thirds.
int phase_of(std::size_t iteration, std::size_t max_iter);

/// One recorded move: features at the time of the move plus its label.
struct CaseRecord {
    std::string problem;
    std::uint32_t run_id = 0;
    std::uint32_t iteration = 0;
    int phase = 1;
    OperatorId op = OperatorId::Flip;
    FeatureVector features{};
    double parent_fitness = 0.0;
    double child_fitness = 0.0;
    bool success = true;

    bool operator==(const CaseRecord&) const = default;
};

/// Header of the case table; failure-inclusive exports append ",success".
std::string csv_header(bool with_success = false);

/// Writes records in the given order with 17 significant digits.
void write_csv(const std::vector<CaseRecord>& records, std::ostream& out,
               bool with_success = false);
std::vector<CaseRecord> read_csv(std::istream& in);

/// Sorts by (run_id, iteration) keeping emission order, then writes.
/// Throws ValidationError on an empty set and IoError on write failure.
void export_csv(std::vector<CaseRecord> records, const std::filesystem::path& path,
                bool with_success = false);
std::vector<CaseRecord> import_csv(const std::filesystem::path& path);

/// Successful-move counts per operator and phase, keyed by problem tag.
struct SuccessTable {
    using Counts = std::array<std::array<std::size_t, kPhaseCount>, kOperatorCount>;
    std::map<std::string, Counts> counts;

    std::size_t total() const;
    static double mean(const std::array<std::size_t, kPhaseCount>& row);
};

SuccessTable success_table(const std::vector<CaseRecord>& records);

/// problem,op,phase_1,phase_2,phase_3,mean
void write_success_table(const SuccessTable& table, std::ostream& out);
/// Fixed-width text rendering of the same table.
std::string format_success_table(const SuccessTable& table);

} // namespace flap

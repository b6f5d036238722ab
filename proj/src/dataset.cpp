#include "flap/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "flap/error.hpp"

namespace flap {

int phase_of(std::size_t iteration, std::size_t max_iter) {
    if (max_iter < kPhaseCount) {
        throw ValidationError("phase_of: max_iter must be at least 3");
    }
    if (iteration >= max_iter) {
        throw ValidationError("phase_of: iteration " + std::to_string(iteration) +
                              " out of range for max_iter " + std::to_string(max_iter));
    }
    const std::size_t phase = kPhaseCount * iteration / max_iter + 1;
    return static_cast<int>(std::min(phase, kPhaseCount));
}

namespace {

constexpr std::array<std::string_view, 4> kLeadingColumns = {"problem", "run_id", "iteration",
                                                             "phase"};
constexpr std::array<std::string_view, 3> kTrailingColumns = {"parent_fitness", "child_fitness",
                                                              "op"};

std::vector<std::string> header_columns(bool with_success) {
    std::vector<std::string> cols(kLeadingColumns.begin(), kLeadingColumns.end());
    cols.insert(cols.end(), kFeatureNames.begin(), kFeatureNames.end());
    cols.insert(cols.end(), kTrailingColumns.begin(), kTrailingColumns.end());
    if (with_success) {
        cols.emplace_back("success");
    }
    return cols;
}

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_field(const std::string& text, std::size_t line, const std::string& column) {
    T value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ParseError(line, "column '" + column + "': invalid value '" + text + "'");
    }
    return value;
}

} // namespace

std::string csv_header(bool with_success) {
    std::string out;
    for (const auto& c : header_columns(with_success)) {
        if (!out.empty()) {
            out += ',';
        }
        out += c;
    }
    return out;
}

void write_csv(const std::vector<CaseRecord>& records, std::ostream& out, bool with_success) {
    out << csv_header(with_success) << '\n';
    std::string line;
    for (const auto& r : records) {
        line.clear();
        line += r.problem;
        line += ',';
        line += std::to_string(r.run_id);
        line += ',';
        line += std::to_string(r.iteration);
        line += ',';
        line += std::to_string(r.phase);
        for (double v : r.features) {
            line += ',';
            append_double(line, v);
        }
        line += ',';
        append_double(line, r.parent_fitness);
        line += ',';
        append_double(line, r.child_fitness);
        line += ',';
        line += std::to_string(index_of(r.op));
        if (with_success) {
            line += r.success ? ",1" : ",0";
        }
        line += '\n';
        out << line;
    }
}

std::vector<CaseRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(1, "missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto got = split_csv(line);
    const bool with_success = got.size() == header_columns(true).size();
    const auto want = header_columns(with_success);
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (i >= got.size() || got[i] != want[i]) {
            throw ParseError(1, "schema mismatch at column " + std::to_string(i + 1) +
                                    ": expected '" + want[i] + "', found '" +
                                    (i < got.size() ? got[i] : std::string("<missing>")) + "'");
        }
    }
    if (got.size() != want.size()) {
        throw ParseError(1, "schema mismatch: unexpected column '" + got[want.size()] + "'");
    }

    std::vector<CaseRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != want.size()) {
            throw ParseError(lineno, "expected " + std::to_string(want.size()) + " fields, found " +
                                         std::to_string(fields.size()));
        }
        CaseRecord r;
        std::size_t c = 0;
        r.problem = fields[c++];
        r.run_id = parse_field<std::uint32_t>(fields[c], lineno, want[c]);
        ++c;
        r.iteration = parse_field<std::uint32_t>(fields[c], lineno, want[c]);
        ++c;
        r.phase = parse_field<int>(fields[c], lineno, want[c]);
        if (r.phase < 1 || r.phase > static_cast<int>(kPhaseCount)) {
            throw ParseError(lineno, "column 'phase': must be 1, 2 or 3");
        }
        ++c;
        for (auto& v : r.features) {
            v = parse_field<double>(fields[c], lineno, want[c]);
            if (!std::isfinite(v)) {
                throw ParseError(lineno, "column '" + want[c] + "': non-finite value");
            }
            ++c;
        }
        r.parent_fitness = parse_field<double>(fields[c], lineno, want[c]);
        ++c;
        r.child_fitness = parse_field<double>(fields[c], lineno, want[c]);
        ++c;
        const auto op = parse_field<int>(fields[c], lineno, want[c]);
        if (op < 0 || op >= static_cast<int>(kOperatorCount)) {
            throw ParseError(lineno, "column 'op': label must be in 0..3");
        }
        r.op = static_cast<OperatorId>(op);
        ++c;
        if (with_success) {
            r.success = parse_field<int>(fields[c], lineno, want[c]) != 0;
        }
        records.push_back(std::move(r));
    }
    return records;
}

void export_csv(std::vector<CaseRecord> records, const std::filesystem::path& path,
                bool with_success) {
    if (records.empty()) {
        throw ValidationError("export_csv: no records to export");
    }
    std::stable_sort(records.begin(), records.end(), [](const CaseRecord& a, const CaseRecord& b) {
        return std::tie(a.run_id, a.iteration) < std::tie(b.run_id, b.iteration);
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_csv(records, out, with_success);
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::vector<CaseRecord> import_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_csv(in);
}

std::size_t SuccessTable::total() const {
    std::size_t sum = 0;
    for (const auto& [problem, table] : counts) {
        for (const auto& row : table) {
            for (auto c : row) {
                sum += c;
            }
        }
    }
    return sum;
}

double SuccessTable::mean(const std::array<std::size_t, kPhaseCount>& row) {
    double sum = 0.0;
    for (auto c : row) {
        sum += static_cast<double>(c);
    }
    return sum / static_cast<double>(kPhaseCount);
}

SuccessTable success_table(const std::vector<CaseRecord>& records) {
    SuccessTable table;
    for (const auto& r : records) {
        if (!r.success) {
            continue;
        }
        auto& counts = table.counts[r.problem];
        ++counts[index_of(r.op)][static_cast<std::size_t>(r.phase - 1)];
    }
    return table;
}

void write_success_table(const SuccessTable& table, std::ostream& out) {
    out << "problem,op,phase_1,phase_2,phase_3,mean\n";
    char mean[32];
    for (const auto& [problem, counts] : table.counts) {
        for (std::size_t op = 0; op < kOperatorCount; ++op) {
            const auto& row = counts[op];
            std::snprintf(mean, sizeof(mean), "%.2f", SuccessTable::mean(row));
            out << problem << ',' << op << ',' << row[0] << ',' << row[1] << ',' << row[2] << ','
                << mean << '\n';
        }
    }
}

std::string format_success_table(const SuccessTable& table) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-8s %-6s %9s %9s %9s %10s\n", "Problem", "Op", "Phase 1",
                  "Phase 2", "Phase 3", "Mean");
    out << buf;
    for (const auto& [problem, counts] : table.counts) {
        for (std::size_t op = 0; op < kOperatorCount; ++op) {
            const auto& row = counts[op];
            std::snprintf(buf, sizeof(buf), "%-8s OP %-3zu %9zu %9zu %9zu %10.2f\n",
                          op == 0 ? problem.c_str() : "", op, row[0], row[1], row[2],
                          SuccessTable::mean(row));
            out << buf;
        }
    }
    return out.str();
}

} // namespace flap

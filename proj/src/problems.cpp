#include "flap/problems.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "flap/error.hpp"

namespace flap {

BitString Problem::repair(BitString x, Rng& /*rng*/) const { return x; }

bool Problem::feasible(const BitString& /*x*/) const { return true; }

double onemax_fitness(const BitString& x) { return static_cast<double>(x.count()); }

OneMaxProblem::OneMaxProblem(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) {
        throw ValidationError("onemax: dimension must be positive");
    }
}

double OneMaxProblem::evaluate(const BitString& x) const {
    if (x.size() != dimension_) {
        throw ValidationError("onemax: solution length does not match dimension");
    }
    return onemax_fitness(x);
}

void SukpInstance::validate() const {
    if (items == 0 || elements == 0) {
        throw ValidationError("sukp: item and element counts must be positive");
    }
    if (!(capacity > 0.0) || !std::isfinite(capacity)) {
        throw ValidationError("sukp: capacity must be positive and finite");
    }
    if (profits.size() != items || weights.size() != elements || incidence.size() != items) {
        throw ValidationError("sukp: array sizes do not match item/element counts");
    }
    for (double p : profits) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ValidationError("sukp: profits must be positive and finite");
        }
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ValidationError("sukp: weights must be positive and finite");
        }
    }
    for (std::size_t i = 0; i < items; ++i) {
        const auto& row = incidence[i];
        if (row.size() != elements) {
            throw ValidationError("sukp: incidence row " + std::to_string(i) + " has wrong length");
        }
        std::size_t covered = 0;
        for (auto v : row) {
            if (v > 1) {
                throw ValidationError("sukp: incidence entries must be 0 or 1");
            }
            covered += v;
        }
        if (covered == 0) {
            throw ValidationError("sukp: item " + std::to_string(i) + " covers no element");
        }
    }
}

SukpProblem::SukpProblem(SukpInstance instance) : instance_(std::move(instance)) {
    instance_.validate();
    covers_.resize(instance_.items);
    for (std::size_t i = 0; i < instance_.items; ++i) {
        for (std::size_t j = 0; j < instance_.elements; ++j) {
            if (instance_.incidence[i][j]) {
                covers_[i].push_back(static_cast<std::uint32_t>(j));
            }
        }
    }
}

void SukpProblem::check_length(const BitString& x) const {
    if (x.size() != instance_.items) {
        throw ValidationError("sukp: solution length " + std::to_string(x.size()) +
                              " does not match item count " + std::to_string(instance_.items));
    }
}

// Summed in element order so the result is independent of how the
// selection was reached.
double SukpProblem::weight_of_covered(const std::vector<std::uint32_t>& cover_count) const {
    double total = 0.0;
    for (std::size_t j = 0; j < cover_count.size(); ++j) {
        if (cover_count[j] > 0) {
            total += instance_.weights[j];
        }
    }
    return total;
}

double SukpProblem::union_weight(const BitString& x) const {
    check_length(x);
    std::vector<std::uint32_t> count(instance_.elements, 0);
    for (std::size_t i = 0; i < instance_.items; ++i) {
        if (x[i]) {
            for (auto e : covers_[i]) {
                ++count[e];
            }
        }
    }
    return weight_of_covered(count);
}

bool SukpProblem::feasible(const BitString& x) const {
    return union_weight(x) <= instance_.capacity;
}

double SukpProblem::evaluate(const BitString& x) const {
    if (!feasible(x)) {
        throw ValidationError("sukp: evaluating an infeasible selection; repair it first");
    }
    double profit = 0.0;
    for (std::size_t i = 0; i < instance_.items; ++i) {
        if (x[i]) {
            profit += instance_.profits[i];
        }
    }
    return profit;
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Picks uniformly among the indices tied on the best key.
class TieBreaker {
  public:
    explicit TieBreaker(bool prefer_low) : prefer_low_(prefer_low) {}

    void offer(std::size_t index, double key) {
        if (ties_.empty() || better(key, key_)) {
            ties_.assign(1, index);
            key_ = key;
        } else if (key == key_) {
            ties_.push_back(index);
        }
    }

    bool empty() const { return ties_.empty(); }

    std::size_t pick(Rng& rng) const {
        return ties_.size() == 1 ? ties_.front() : ties_[rng.index(ties_.size())];
    }

  private:
    bool better(double a, double b) const { return prefer_low_ ? a < b : a > b; }

    bool prefer_low_;
    double key_ = 0.0;
    std::vector<std::size_t> ties_;
};

} // namespace

BitString SukpProblem::repair(BitString x, Rng& rng) const {
    check_length(x);
    const auto& inst = instance_;
    std::vector<std::uint32_t> count(inst.elements, 0);
    for (std::size_t i = 0; i < inst.items; ++i) {
        if (x[i]) {
            for (auto e : covers_[i]) {
                ++count[e];
            }
        }
    }

    auto drop_until_feasible = [&] {
        while (weight_of_covered(count) > inst.capacity) {
            TieBreaker lowest(true);
            for (std::size_t i = 0; i < inst.items; ++i) {
                if (!x[i]) {
                    continue;
                }
                double marginal = 0.0;
                for (auto e : covers_[i]) {
                    if (count[e] == 1) {
                        marginal += inst.weights[e];
                    }
                }
                lowest.offer(i, marginal > 0.0 ? inst.profits[i] / marginal : kInfinity);
            }
            const std::size_t victim = lowest.pick(rng);
            x.set(victim, false);
            for (auto e : covers_[victim]) {
                --count[e];
            }
        }
    };

    drop_until_feasible();

    for (;;) {
        const double current = weight_of_covered(count);
        TieBreaker highest(false);
        for (std::size_t i = 0; i < inst.items; ++i) {
            if (x[i]) {
                continue;
            }
            double marginal = 0.0;
            for (auto e : covers_[i]) {
                if (count[e] == 0) {
                    marginal += inst.weights[e];
                }
            }
            if (current + marginal <= inst.capacity) {
                highest.offer(i, marginal > 0.0 ? inst.profits[i] / marginal : kInfinity);
            }
        }
        if (highest.empty()) {
            break;
        }
        const std::size_t chosen = highest.pick(rng);
        x.set(chosen, true);
        for (auto e : covers_[chosen]) {
            ++count[e];
        }
    }

    // Incremental sums and the ordered recount can disagree in the last ulp
    // for fractional weights.
    drop_until_feasible();
    return x;
}

double sukp_union_weight(const BitString& x, const SukpInstance& instance) {
    return SukpProblem(instance).union_weight(x);
}

double sukp_fitness(const BitString& x, const SukpInstance& instance) {
    return SukpProblem(instance).evaluate(x);
}

BitString sukp_repair(const BitString& x, const SukpInstance& instance, Rng& rng) {
    return SukpProblem(instance).repair(x, rng);
}

SukpInstance generate_sukp(const SukpGenerator& params) {
    if (params.items == 0 || params.elements == 0) {
        throw ValidationError("generate_sukp: item and element counts must be at least 1");
    }
    if (!(params.density > 0.0 && params.density <= 1.0)) {
        throw ValidationError("generate_sukp: density must lie in (0, 1]");
    }
    if (!(params.capacity_ratio > 0.0 && params.capacity_ratio < 1.0)) {
        throw ValidationError("generate_sukp: capacity ratio must lie in (0, 1)");
    }
    Rng rng(params.seed);
    SukpInstance inst;
    inst.items = params.items;
    inst.elements = params.elements;
    inst.incidence.assign(inst.items, std::vector<std::uint8_t>(inst.elements, 0));
    for (auto& row : inst.incidence) {
        bool any = false;
        for (auto& cell : row) {
            cell = rng.bernoulli(params.density) ? 1 : 0;
            any = any || cell;
        }
        if (!any) {
            row[rng.index(inst.elements)] = 1;
        }
    }
    inst.profits.resize(inst.items);
    for (auto& p : inst.profits) {
        p = static_cast<double>(rng.between(1, 100));
    }
    inst.weights.resize(inst.elements);
    for (auto& w : inst.weights) {
        w = static_cast<double>(rng.between(1, 100));
    }
    inst.capacity =
        params.capacity_ratio * std::accumulate(inst.weights.begin(), inst.weights.end(), 0.0);
    inst.validate();
    return inst;
}

namespace {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <typename T>
T parse_token(std::string_view token, std::size_t line, const char* what) {
    T value{};
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

class LineReader {
  public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::vector<std::string> next(const char* expected) {
        std::string line;
        if (!std::getline(in_, line)) {
            throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + expected);
        }
        ++line_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return split_line(line);
    }

    std::size_t line() const { return line_; }

  private:
    std::istream& in_;
    std::size_t line_ = 0;
};

} // namespace

void write_sukp(const SukpInstance& instance, std::ostream& out) {
    instance.validate();
    out << instance.items << ' ' << instance.elements << ' ' << format_number(instance.capacity)
        << '\n';
    auto write_row = [&out](const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << (i ? " " : "") << format_number(values[i]);
        }
        out << '\n';
    };
    write_row(instance.profits);
    write_row(instance.weights);
    for (const auto& row : instance.incidence) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? " " : "") << static_cast<int>(row[j]);
        }
        out << '\n';
    }
}

SukpInstance read_sukp(std::istream& in) {
    LineReader reader(in);
    SukpInstance inst;

    auto header = reader.next("header 'm n capacity'");
    if (header.size() != 3) {
        throw ParseError(reader.line(), "header must have 3 fields 'm n capacity'");
    }
    inst.items = parse_token<std::size_t>(header[0], reader.line(), "item count");
    inst.elements = parse_token<std::size_t>(header[1], reader.line(), "element count");
    inst.capacity = parse_token<double>(header[2], reader.line(), "capacity");
    if (inst.items == 0 || inst.elements == 0) {
        throw ValidationError("sukp: item and element counts must be positive");
    }

    auto read_values = [&reader](std::size_t expected, const char* what) {
        auto tokens = reader.next(what);
        if (tokens.size() != expected) {
            throw ParseError(reader.line(), std::string("expected ") + std::to_string(expected) +
                                                " " + what + ", found " +
                                                std::to_string(tokens.size()));
        }
        std::vector<double> values;
        values.reserve(expected);
        for (const auto& t : tokens) {
            values.push_back(parse_token<double>(t, reader.line(), what));
        }
        return values;
    };
    inst.profits = read_values(inst.items, "profits");
    inst.weights = read_values(inst.elements, "weights");

    inst.incidence.reserve(inst.items);
    for (std::size_t i = 0; i < inst.items; ++i) {
        auto tokens = reader.next("incidence row");
        if (tokens.size() != inst.elements) {
            throw ParseError(reader.line(), "incidence row must have " +
                                                std::to_string(inst.elements) + " entries, found " +
                                                std::to_string(tokens.size()));
        }
        std::vector<std::uint8_t> row(inst.elements);
        for (std::size_t j = 0; j < tokens.size(); ++j) {
            if (tokens[j] != "0" && tokens[j] != "1") {
                throw ParseError(reader.line(), "incidence entries must be 0 or 1");
            }
            row[j] = tokens[j] == "1" ? 1 : 0;
        }
        inst.incidence.push_back(std::move(row));
    }
    inst.validate();
    return inst;
}

void save_sukp(const SukpInstance& instance, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_sukp(instance, out);
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

SukpInstance load_sukp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_sukp(in);
}

} // namespace flap

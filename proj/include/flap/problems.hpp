#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flap/bitstring.hpp"
#include "flap/rng.hpp"

namespace flap {

/// Benchmark problem over bit strings (maximisation, non-negative fitness).
class Problem {
  public:
    virtual ~Problem() = default;

    /// Short identifier written into datasets, e.g. "onemax".
    virtual std::string tag() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual double evaluate(const BitString& x) const = 0;

    /// Maps an arbitrary bit string onto a feasible one. Identity by default.
    virtual BitString repair(BitString x, Rng& rng) const;
    virtual bool feasible(const BitString& x) const;
};

double onemax_fitness(const BitString& x);

class OneMaxProblem final : public Problem {
  public:
    explicit OneMaxProblem(std::size_t dimension);

    std::string tag() const override { return "onemax"; }
    std::size_t dimension() const override { return dimension_; }
    double evaluate(const BitString& x) const override;

  private:
    std::size_t dimension_;
};

/// Set-Union Knapsack data: items are subsets of weighted elements and the
/// capacity constrains the total weight of the union of selected items.
struct SukpInstance {
    std::size_t items = 0;
    std::size_t elements = 0;
    double capacity = 0.0;
    std::vector<double> profits;                     // one per item
    std::vector<double> weights;                     // one per element
    std::vector<std::vector<std::uint8_t>> incidence; // items x elements

    /// Throws ValidationError if a structural or value invariant is broken.
    void validate() const;

    bool operator==(const SukpInstance&) const = default;
};

double sukp_union_weight(const BitString& x, const SukpInstance& instance);

/// Profit of a feasible selection. Infeasible input is a contract violation
/// and throws ValidationError; run sukp_repair first.
double sukp_fitness(const BitString& x, const SukpInstance& instance);

/// Drops the selected item with the lowest profit / marginal-union-weight
/// ratio until feasible, then greedily adds the unselected item with the
/// highest ratio among those that still fit. Exact ratio ties are broken
/// uniformly at random with `rng`; items with zero marginal weight have an
/// infinite ratio.
BitString sukp_repair(const BitString& x, const SukpInstance& instance, Rng& rng);

struct SukpGenerator {
    std::size_t items = 500;
    std::size_t elements = 500;
    double density = 0.1;
    double capacity_ratio = 0.5;
    std::uint64_t seed = 1;
};

SukpInstance generate_sukp(const SukpGenerator& params);

void write_sukp(const SukpInstance& instance, std::ostream& out);
SukpInstance read_sukp(std::istream& in);
void save_sukp(const SukpInstance& instance, const std::filesystem::path& path);
SukpInstance load_sukp(const std::filesystem::path& path);

/// SUKP problem with cached per-item element lists for fast repair.
class SukpProblem final : public Problem {
  public:
    explicit SukpProblem(SukpInstance instance);

    std::string tag() const override { return "sukp"; }
    std::size_t dimension() const override { return instance_.items; }
    double evaluate(const BitString& x) const override;
    BitString repair(BitString x, Rng& rng) const override;
    bool feasible(const BitString& x) const override;

    const SukpInstance& instance() const noexcept { return instance_; }
    double union_weight(const BitString& x) const;

  private:
    void check_length(const BitString& x) const;
    double weight_of_covered(const std::vector<std::uint32_t>& cover_count) const;

    SukpInstance instance_;
    std::vector<std::vector<std::uint32_t>> covers_;
};

} // namespace flap

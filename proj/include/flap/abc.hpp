#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "flap/bitstring.hpp"
#include "flap/dataset.hpp"
#include "flap/features.hpp"
#include "flap/operators.hpp"
#include "flap/problems.hpp"
#include "flap/rng.hpp"

namespace flap {

struct RunConfig {
    std::shared_ptr<const Problem> problem;
    std::size_t colony_size = 20;
    std::size_t max_iter = 150;
    std::size_t limit = 100;
    std::uint64_t seed = 1;
    std::uint32_t run_id = 0;
    std::vector<OperatorId> pool{kAllOperators.begin(), kAllOperators.end()};
    bool record_failures = false;
    EapVariant eap_variant = EapVariant::Literal;

    /// Throws ValidationError; called by the engine before any work.
    void validate() const;
};

using Recorder = std::function<void(const CaseRecord&)>;

/// Food sources and bookkeeping of one colony.
struct Colony {
    std::vector<BitString> foods;
    std::vector<double> fitness;
    std::vector<std::size_t> trials;
    BitString gbest;
    double gbest_fitness = 0.0;
    std::size_t iteration = 0;
    std::array<std::size_t, kOperatorCount> op_success{};
    std::array<std::size_t, kOperatorCount> op_usage{};
};

struct RunResult {
    BitString gbest;
    double gbest_fitness = 0.0;
    /// gbest fitness after initialisation, then after every iteration.
    std::vector<double> trace;
    /// successes[op][phase - 1]
    std::array<std::array<std::size_t, kPhaseCount>, kOperatorCount> successes{};
    std::array<std::size_t, kOperatorCount> usage{};
    std::size_t replacements = 0;
    std::size_t evaluations = 0;
    std::size_t scouts = 0;

    bool operator==(const RunResult&) const = default;
};

/// Outcome of one candidate generation.
struct CandidateOutcome {
    OperatorId op = OperatorId::Flip;
    BitString parent;
    BitString child;
    double parent_fitness = 0.0;
    double child_fitness = 0.0;
    bool replaced = false;
    IndividualFeatures individual{};
};

/// Roulette index with probability f_i / sum(f); uniform when the sum is 0.
std::size_t onlooker_select(std::span<const double> fitnesses, Rng& rng);

/// Binary artificial bee colony with uniform operator selection.
///
/// Each iteration runs the employed phase (one candidate per source), the
/// onlooker phase (N roulette-selected candidates) and the scout phase
/// (sources whose trial counter reached the limit restart at random). Trial
/// counters saturate at the limit. Population features are computed once
/// per iteration from the employed-phase parent/child pairs and shared by
/// every case of that iteration; individual features are measured against
/// the gbest, pbest and pworst of the colony at the start of the iteration.
class AbcEngine {
  public:
    explicit AbcEngine(RunConfig config);

    /// Executes max_iter iterations from a fresh colony.
    RunResult run(const Recorder& recorder = {});

    void initialize();
    /// Captures the iteration-level references used by individual features.
    void begin_iteration(std::size_t iteration);
    /// Generates, evaluates and greedily accepts one candidate for `source`.
    CandidateOutcome generate_candidate(std::size_t source);
    void iterate(const Recorder& recorder);

    const Colony& colony() const noexcept { return colony_; }
    const RunConfig& config() const noexcept { return config_; }
    const RunResult& result() const noexcept { return result_; }

  private:
    void evaluate_initial(std::size_t i);
    void update_gbest(std::size_t i);
    CaseRecord make_record(const CandidateOutcome& outcome,
                           const PopulationFeatures& population) const;
    void emit(const CandidateOutcome& outcome, const PopulationFeatures& population,
              const Recorder& recorder);

    RunConfig config_;
    Rng rng_;
    Colony colony_;
    RunResult result_;
    PopulationSnapshot snapshot_;
    int phase_ = 1;
};

/// Convenience wrapper: AbcEngine(config).run(recorder).
RunResult run(const RunConfig& config, const Recorder& recorder = {});

} // namespace flap

#include "flap/abc.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "flap/error.hpp"

namespace flap {

void RunConfig::validate() const {
    if (!problem) {
        throw ValidationError("run config: no problem set");
    }
    if (problem->dimension() == 0) {
        throw ValidationError("run config: problem dimension must be positive");
    }
    if (colony_size < 2) {
        throw ValidationError("run config: colony size must be at least 2");
    }
    if (max_iter < kPhaseCount) {
        throw ValidationError("run config: max_iter must be at least 3 so every phase is non-empty");
    }
    if (limit < 1) {
        throw ValidationError("run config: limit must be at least 1");
    }
    if (pool.empty()) {
        throw ValidationError("run config: operator pool is empty");
    }
    for (auto id : pool) {
        operator_from_index(static_cast<long long>(id));
    }
}

std::size_t onlooker_select(std::span<const double> fitnesses, Rng& rng) {
    if (fitnesses.empty()) {
        throw ValidationError("onlooker_select: empty fitness array");
    }
    const double total = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0);
    if (!(total > 0.0)) {
        return rng.index(fitnesses.size());
    }
    const double target = rng.uniform() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        cumulative += fitnesses[i];
        if (target < cumulative) {
            return i;
        }
    }
    // Rounding left target at the very top: take the last positive entry.
    for (std::size_t i = fitnesses.size(); i-- > 0;) {
        if (fitnesses[i] > 0.0) {
            return i;
        }
    }
    return fitnesses.size() - 1;
}

AbcEngine::AbcEngine(RunConfig config) : config_(std::move(config)) {
    config_.validate();
    rng_ = Rng(config_.seed);
}

void AbcEngine::evaluate_initial(std::size_t i) {
    const auto& problem = *config_.problem;
    colony_.foods[i] = problem.repair(BitString::random(problem.dimension(), rng_), rng_);
    colony_.fitness[i] = problem.evaluate(colony_.foods[i]);
    colony_.trials[i] = 0;
    ++result_.evaluations;
}

void AbcEngine::update_gbest(std::size_t i) {
    if (colony_.gbest.empty() || colony_.fitness[i] > colony_.gbest_fitness) {
        colony_.gbest = colony_.foods[i];
        colony_.gbest_fitness = colony_.fitness[i];
    }
}

void AbcEngine::initialize() {
    const std::size_t n = config_.colony_size;
    colony_ = Colony{};
    result_ = RunResult{};
    colony_.foods.resize(n);
    colony_.fitness.assign(n, 0.0);
    colony_.trials.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        evaluate_initial(i);
        update_gbest(i);
    }
    result_.trace.push_back(colony_.gbest_fitness);
}

void AbcEngine::begin_iteration(std::size_t iteration) {
    if (colony_.foods.empty()) {
        throw ValidationError("engine: initialize() must run before any iteration");
    }
    colony_.iteration = iteration;
    phase_ = phase_of(iteration, config_.max_iter);
    snapshot_ = PopulationSnapshot::build(colony_.foods, colony_.foods, colony_.fitness,
                                          colony_.fitness, colony_.gbest, colony_.gbest_fitness,
                                          colony_.trials, config_.limit);
}

CandidateOutcome AbcEngine::generate_candidate(std::size_t source) {
    const std::size_t n = colony_.foods.size();
    if (source >= n) {
        throw ValidationError("generate_candidate: source index out of range");
    }
    if (snapshot_.gbest.empty()) {
        throw ValidationError("generate_candidate: begin_iteration() has not been called");
    }
    const auto& problem = *config_.problem;

    CandidateOutcome out;
    out.op = config_.pool[rng_.index(config_.pool.size())];
    std::size_t neighbor = rng_.index(n - 1);
    if (neighbor >= source) {
        ++neighbor;
    }
    out.parent = colony_.foods[source];
    out.parent_fitness = colony_.fitness[source];
    OperatorContext ctx{out.parent, colony_.foods[neighbor], colony_.gbest, rng_};
    out.child = apply_operator(out.op, ctx, problem);
    out.child_fitness = problem.evaluate(out.child);
    ++result_.evaluations;

    const std::size_t op = index_of(out.op);
    const MoveRecord move{out.parent,         out.child,
                          out.parent_fitness, out.child_fitness,
                          colony_.trials[source], colony_.op_success[op],
                          colony_.op_usage[op]};
    out.individual = individual_features(move, snapshot_);

    ++colony_.op_usage[op];
    ++result_.usage[op];
    if (out.child_fitness > out.parent_fitness) {
        out.replaced = true;
        colony_.foods[source] = out.child;
        colony_.fitness[source] = out.child_fitness;
        colony_.trials[source] = 0;
        ++colony_.op_success[op];
        ++result_.successes[op][static_cast<std::size_t>(phase_ - 1)];
        ++result_.replacements;
        update_gbest(source);
    } else {
        colony_.trials[source] = std::min(colony_.trials[source] + 1, config_.limit);
    }
    return out;
}

CaseRecord AbcEngine::make_record(const CandidateOutcome& outcome,
                                  const PopulationFeatures& population) const {
    CaseRecord r;
    r.problem = config_.problem->tag();
    r.run_id = config_.run_id;
    r.iteration = static_cast<std::uint32_t>(colony_.iteration);
    r.phase = phase_;
    r.op = outcome.op;
    r.features = feature_vector(population, outcome.individual);
    r.parent_fitness = outcome.parent_fitness;
    r.child_fitness = outcome.child_fitness;
    r.success = outcome.replaced;
    return r;
}

void AbcEngine::emit(const CandidateOutcome& outcome, const PopulationFeatures& population,
                     const Recorder& recorder) {
    if (recorder && (outcome.replaced || config_.record_failures)) {
        recorder(make_record(outcome, population));
    }
}

void AbcEngine::iterate(const Recorder& recorder) {
    const std::size_t n = colony_.foods.size();
    begin_iteration(colony_.iteration);

    // Employed bees. Cases wait until the population features are known.
    std::vector<CandidateOutcome> employed;
    employed.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto out = generate_candidate(i);
        snapshot_.children[i] = out.child;
        snapshot_.child_fitness[i] = out.child_fitness;
        employed.push_back(std::move(out));
    }
    const auto population = population_features(snapshot_, config_.eap_variant);
    for (const auto& out : employed) {
        emit(out, population, recorder);
    }

    // Onlooker bees.
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t source = onlooker_select(colony_.fitness, rng_);
        emit(generate_candidate(source), population, recorder);
    }

    // Scouts.
    for (std::size_t i = 0; i < n; ++i) {
        if (colony_.trials[i] >= config_.limit) {
            evaluate_initial(i);
            update_gbest(i);
            ++result_.scouts;
        }
    }

    result_.trace.push_back(colony_.gbest_fitness);
    ++colony_.iteration;
}

RunResult AbcEngine::run(const Recorder& recorder) {
    initialize();
    for (std::size_t t = 0; t < config_.max_iter; ++t) {
        iterate(recorder);
    }
    result_.gbest = colony_.gbest;
    result_.gbest_fitness = colony_.gbest_fitness;
    return result_;
}

RunResult run(const RunConfig& config, const Recorder& recorder) {
    return AbcEngine(config).run(recorder);
}

} // namespace flap

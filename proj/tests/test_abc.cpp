#include <numeric>

#include "doctest.h"
#include "flap/abc.hpp"
#include "flap/error.hpp"

using namespace flap;

namespace {

RunConfig onemax_config(std::size_t dims, std::size_t iters, std::uint64_t seed) {
    RunConfig c;
    c.problem = std::make_shared<OneMaxProblem>(dims);
    c.max_iter = iters;
    c.seed = seed;
    return c;
}

class ConstantProblem final : public Problem {
  public:
    explicit ConstantProblem(std::size_t d) : d_(d) {}
    std::string tag() const override { return "constant"; }
    std::size_t dimension() const override { return d_; }
    double evaluate(const BitString&) const override { return 1.0; }

  private:
    std::size_t d_;
};

} // namespace

TEST_CASE("onlooker roulette") {
    Rng rng(1);
    const std::vector<double> zero{0, 0, 0};
    std::array<int, 3> freq{};
    for (int i = 0; i < 30000; ++i) {
        ++freq[onlooker_select(zero, rng)];
    }
    for (int f : freq) {
        CHECK(std::abs(f / 30000.0 - 1.0 / 3) < 0.02);
    }

    const std::vector<double> one{1, 0};
    for (int i = 0; i < 1000; ++i) {
        CHECK(onlooker_select(one, rng) == 0);
    }

    const std::vector<double> w{1, 3};
    int hits = 0;
    for (int i = 0; i < 100000; ++i) {
        hits += int(onlooker_select(w, rng) == 1);
    }
    CHECK(std::abs(hits / 100000.0 - 0.75) <= 0.01);
    CHECK_THROWS_AS(onlooker_select(std::vector<double>{}, rng), ValidationError);
}

TEST_CASE("config validation happens before any work") {
    auto c = onemax_config(10, 10, 1);
    c.colony_size = 1;
    CHECK_THROWS_AS(AbcEngine{c}, ValidationError);
    c = onemax_config(10, 2, 1);
    CHECK_THROWS_AS(AbcEngine{c}, ValidationError);
    c = onemax_config(10, 10, 1);
    c.limit = 0;
    CHECK_THROWS_AS(AbcEngine{c}, ValidationError);
    c = onemax_config(10, 10, 1);
    c.pool.clear();
    CHECK_THROWS_AS(AbcEngine{c}, ValidationError);
    c = onemax_config(10, 10, 1);
    c.problem.reset();
    CHECK_THROWS_AS(AbcEngine{c}, ValidationError);
}

TEST_CASE("one-max at full scale completes with a monotone trace") {
    const auto result = run(onemax_config(1000, 150, 7));
    REQUIRE(result.trace.size() == 151);
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        CHECK(result.trace[i] >= result.trace[i - 1]);
    }
    CHECK(result.gbest_fitness >= result.trace.front());
    CHECK(result.gbest_fitness == onemax_fitness(result.gbest));
}

TEST_CASE("degenerate colony finds the one-bit optimum") {
    auto c = onemax_config(1, 3, 5);
    c.colony_size = 2;
    CHECK(run(c).gbest_fitness == 1);
}

TEST_CASE("runs are deterministic") {
    auto c = onemax_config(50, 30, 13);
    std::vector<CaseRecord> a, b;
    const auto ra = run(c, [&a](const CaseRecord& r) { a.push_back(r); });
    const auto rb = run(c, [&b](const CaseRecord& r) { b.push_back(r); });
    CHECK(ra == rb);
    CHECK(a == b);
    c.seed = 14;
    CHECK_FALSE(run(c) == ra);
}

TEST_CASE("equal fitness never replaces and never records") {
    RunConfig c;
    c.problem = std::make_shared<ConstantProblem>(8);
    c.max_iter = 9;
    c.limit = 1000;
    c.colony_size = 4;
    std::size_t records = 0;
    AbcEngine engine(c);
    const auto result = engine.run([&records](const CaseRecord&) { ++records; });
    CHECK(records == 0);
    CHECK(result.replacements == 0);
    // Every source gets one employed visit per iteration plus any onlookers.
    std::size_t total_trials = 0;
    for (auto t : engine.colony().trials) {
        CHECK(t >= 9);
        total_trials += t;
    }
    CHECK(total_trials == 9 * 2 * 4);
}

TEST_CASE("single-operator pool labels every case with that operator") {
    auto c = onemax_config(40, 20, 3);
    c.pool = {OperatorId::BestGuided};
    std::size_t n = 0;
    run(c, [&n](const CaseRecord& r) {
        CHECK(r.op == OperatorId::BestGuided);
        ++n;
    });
    CHECK(n > 0);
}

TEST_CASE("bookkeeping invariants") {
    auto c = onemax_config(60, 45, 21);
    c.limit = 5;
    std::vector<CaseRecord> records;
    AbcEngine engine(c);
    const auto result = engine.run([&records](const CaseRecord& r) { records.push_back(r); });

    CHECK(records.size() == result.replacements);
    std::size_t successes = 0;
    for (const auto& row : result.successes) {
        successes += std::accumulate(row.begin(), row.end(), std::size_t{0});
    }
    CHECK(successes == records.size());
    const auto usage = std::accumulate(result.usage.begin(), result.usage.end(), std::size_t{0});
    CHECK(usage == 2 * c.colony_size * c.max_iter);
    CHECK(result.evaluations == c.colony_size + usage + result.scouts);
    CHECK(result.scouts > 0);
    for (auto t : engine.colony().trials) {
        CHECK(t <= c.limit);
    }
    for (const auto& r : records) {
        CHECK(r.phase == phase_of(r.iteration, c.max_iter));
        CHECK(r.child_fitness > r.parent_fitness);
        CHECK(r.run_id == c.run_id);
        CHECK(r.problem == "onemax");
        for (double v : r.features) {
            CHECK(std::isfinite(v));
        }
    }
    CHECK(engine.colony().gbest_fitness >=
          *std::max_element(engine.colony().fitness.begin(), engine.colony().fitness.end()));
}

TEST_CASE("cases of one iteration share the population features") {
    auto c = onemax_config(30, 12, 2);
    std::vector<CaseRecord> records;
    run(c, [&records](const CaseRecord& r) { records.push_back(r); });
    bool compared = false;
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].iteration != records[i - 1].iteration) {
            continue;
        }
        for (std::size_t k = 0; k < kPopulationFeatureCount; ++k) {
            CHECK(records[i].features[k] == records[i - 1].features[k]);
        }
        compared = true;
    }
    CHECK(compared);
}

TEST_CASE("recording failures adds unsuccessful cases") {
    auto c = onemax_config(30, 12, 2);
    c.record_failures = true;
    std::size_t ok = 0, failed = 0;
    const auto result = run(c, [&](const CaseRecord& r) { (r.success ? ok : failed) += 1; });
    CHECK(ok == result.replacements);
    CHECK(ok + failed == 2 * c.colony_size * c.max_iter);
}

TEST_CASE("knapsack runs only evaluate feasible solutions") {
    RunConfig c;
    c.problem = std::make_shared<SukpProblem>(generate_sukp({80, 80, 0.1, 0.5, 4}));
    c.max_iter = 30;
    // SukpProblem::evaluate throws on infeasible input.
    const auto result = run(c);
    CHECK(result.gbest_fitness > 0);
    CHECK(c.problem->feasible(result.gbest));
}

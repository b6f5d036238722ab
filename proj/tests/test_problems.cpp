#include <sstream>

#include "doctest.h"
#include "flap/error.hpp"
#include "flap/problems.hpp"

using namespace flap;

namespace {

// Two items over three elements: item0 = {e0, e1} profit 7, item1 = {e1, e2} profit 9.
SukpInstance instance_e() {
    SukpInstance e;
    e.items = 2;
    e.elements = 3;
    e.capacity = 9;
    e.profits = {7, 9};
    e.weights = {2, 3, 6};
    e.incidence = {{1, 1, 0}, {0, 1, 1}};
    return e;
}

BitString bits(const char* s) { return BitString::from_string(s); }

} // namespace

TEST_CASE("onemax fitness counts ones") {
    CHECK(onemax_fitness(BitString(8, false)) == 0);
    CHECK(onemax_fitness(BitString(1000, true)) == 1000);
    CHECK(onemax_fitness(bits("1101")) == 3);
}

TEST_CASE("onemax fitness of x and its complement sums to D") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto x = BitString::random(1 + rng.index(64), rng);
        CHECK(onemax_fitness(x) + onemax_fitness(x.complement()) == double(x.size()));
    }
}

TEST_CASE("onemax problem rejects wrong lengths") {
    OneMaxProblem p(4);
    CHECK(p.evaluate(bits("1010")) == 2);
    CHECK_THROWS_AS(p.evaluate(bits("101")), ValidationError);
    CHECK_THROWS_AS(OneMaxProblem(0), ValidationError);
}

TEST_CASE("union weight counts shared elements once") {
    const auto e = instance_e();
    CHECK(sukp_union_weight(bits("00"), e) == 0);
    CHECK(sukp_union_weight(bits("11"), e) == 11);
    CHECK(sukp_union_weight(bits("01"), e) == 9);
    CHECK(sukp_union_weight(bits("10"), e) == 5);
    CHECK_THROWS_AS(sukp_union_weight(bits("1"), e), ValidationError);
}

TEST_CASE("sukp fitness of feasible selections and contract violation") {
    const auto e = instance_e();
    CHECK(sukp_fitness(bits("10"), e) == 7);
    CHECK(sukp_fitness(bits("01"), e) == 9);
    CHECK(sukp_fitness(bits("00"), e) == 0);
    CHECK_THROWS_AS(sukp_fitness(bits("11"), e), ValidationError);
}

TEST_CASE("sukp repair follows the ratio rule on the two-item instance") {
    const auto e = instance_e();
    Rng rng(1);
    // 11: weight 11 > 9. Marginal weights: item0 owns e0 (2), item1 owns e2 (6).
    // Ratios 7/2 = 3.5 and 9/6 = 1.5, so item1 is dropped. Re-adding item1
    // would give weight 11, so the result is 10.
    CHECK(sukp_repair(bits("11"), e, rng) == bits("10"));
    CHECK(sukp_repair(bits("10"), e, rng) == bits("10"));
    CHECK(sukp_repair(bits("01"), e, rng) == bits("01"));
    // 00: add ratios 7/5 = 1.4 and 9/9 = 1; item0 is added first, then
    // item1 no longer fits.
    CHECK(sukp_repair(bits("00"), e, rng) == bits("10"));
}

TEST_CASE("sukp repair output is always feasible") {
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        SukpGenerator g;
        g.items = 5 + rng.index(40);
        g.elements = 5 + rng.index(40);
        g.density = 0.05 + 0.5 * rng.uniform();
        g.capacity_ratio = 0.05 + 0.9 * rng.uniform();
        g.seed = k;
        const auto inst = generate_sukp(g);
        for (int t = 0; t < 20; ++t) {
            const auto x = BitString::random(inst.items, rng);
            const auto y = sukp_repair(x, inst, rng);
            CHECK(sukp_union_weight(y, inst) <= inst.capacity);
        }
    }
}

TEST_CASE("sukp repair is deterministic given the rng state") {
    const auto inst = generate_sukp({40, 30, 0.2, 0.3, 5});
    Rng source(2);
    const auto x = BitString::random(inst.items, source);
    Rng a(99), b(99);
    CHECK(sukp_repair(x, inst, a) == sukp_repair(x, inst, b));
}

TEST_CASE("union weight is monotone under adding items") {
    const auto inst = generate_sukp({30, 25, 0.2, 0.5, 8});
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        auto x = BitString::random(inst.items, rng);
        const double before = sukp_union_weight(x, inst);
        x.set(rng.index(inst.items), true);
        CHECK(sukp_union_weight(x, inst) >= before);
    }
}

TEST_CASE("generated instances") {
    const auto big = generate_sukp({500, 500, 0.1, 0.5, 1});
    CHECK(big.items == 500);
    CHECK(big.elements == 500);
    CHECK_NOTHROW(big.validate());
    double total = 0;
    for (double w : big.weights) {
        total += w;
        CHECK(w >= 1);
        CHECK(w <= 100);
        CHECK(w == std::floor(w));
    }
    CHECK(big.capacity == doctest::Approx(0.5 * total));
    for (const auto& row : big.incidence) {
        CHECK(std::count(row.begin(), row.end(), 1) >= 1);
    }

    const auto tiny = generate_sukp({1, 1, 1.0, 0.99, 42});
    CHECK(tiny.incidence == std::vector<std::vector<std::uint8_t>>{{1}});

    CHECK(generate_sukp({50, 40, 0.1, 0.5, 9}) == generate_sukp({50, 40, 0.1, 0.5, 9}));
    CHECK_FALSE(generate_sukp({50, 40, 0.1, 0.5, 9}) == generate_sukp({50, 40, 0.1, 0.5, 10}));
}

TEST_CASE("generator rejects invalid parameters") {
    CHECK_THROWS_AS(generate_sukp({10, 10, 0.0, 0.5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_sukp({10, 10, 1.5, 0.5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_sukp({10, 10, 0.1, 1.0, 1}), ValidationError);
    CHECK_THROWS_AS(generate_sukp({10, 10, 0.1, 0.0, 1}), ValidationError);
    CHECK_THROWS_AS(generate_sukp({0, 10, 0.1, 0.5, 1}), ValidationError);
}

TEST_CASE("instance text round trip") {
    const auto e = instance_e();
    std::stringstream ss;
    write_sukp(e, ss);
    CHECK(ss.str() == "2 3 9\n7 9\n2 3 6\n1 1 0\n0 1 1\n");
    CHECK(read_sukp(ss) == e);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = generate_sukp({1 + seed % 17, 1 + seed % 13, 0.3, 0.37, seed});
        std::stringstream buf;
        write_sukp(inst, buf);
        CHECK(read_sukp(buf) == inst);
    }
}

TEST_CASE("instance parse errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_sukp(in);
    };
    CHECK_THROWS_AS(parse("2 3 9\n7 9\n2 3 6\n1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("2 3 9\n7 9\n2 x 6\n1 1 0\n0 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse("0 3 9\n\n2 3 6\n"), ValidationError);
    try {
        parse("2 3 9\n7 9\n2 3 6\n1 1 0\n0 1 2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
}

#include <doctest.h>

#include "sdiff/exact.hpp"
#include "sdiff/generators.hpp"
#include "sdiff/heuristics.hpp"

using namespace sdiff;

TEST_CASE("greedy on G(2)") {
    // a1, a2 cost 2 each; then a3 and b1 both have p = 1/2 and the smaller id
    // wins; b1 then has p = 3/4 and a4 is certain.
    const SolveResult r = greedy_sequence(make_gk(2));
    CHECK(r.sequence == ActivationSequence{0, 1, 2, 3, 5, 4});
    CHECK(r.total_time == doctest::Approx(2.0 + 2.0 + 2.0 + 4.0 / 3.0 + 1.0).epsilon(1e-12));
}

TEST_CASE("majority on G(2)") {
    const SolveResult r = majority_sequence(make_gk(2));
    CHECK(r.sequence == ActivationSequence{0, 1, 2, 5, 3, 4});
    CHECK(r.total_time == 8.0);
}

TEST_CASE("path and star") {
    DiffusionInstance path;
    path.network = InfluenceNetwork(3, {{0, 1}, {1, 2}});
    path.z = 3;
    CHECK(greedy_sequence(path).sequence == ActivationSequence{0, 1, 2});
    CHECK(greedy_sequence(path).total_time == 3.0);
    CHECK(majority_sequence(path).total_time == 3.0);

    DiffusionInstance star;
    star.network = InfluenceNetwork(4, {{0, 1}, {0, 2}, {0, 3}});
    star.z = 4;
    CHECK(majority_sequence(star).total_time == 3.0);
    CHECK(greedy_sequence(star).total_time == 3.0);
}

TEST_CASE("heuristics stop when nothing can be activated") {
    DiffusionInstance inst;
    inst.network = InfluenceNetwork(3, {{0, 1}, {1, 2, 0.0, 1.0}});
    inst.z = 3;
    CHECK_FALSE(greedy_sequence(inst).feasible());
    CHECK_FALSE(majority_sequence(inst).feasible());
    inst.z = 2;
    CHECK(greedy_sequence(inst).total_time == 2.0);
}

TEST_CASE("strategy A") {
    CHECK(strategy_a_gk(1).total_time == 1.0);
    CHECK(strategy_a_gk(2).total_time == 8.0);
    CHECK(strategy_a_gk(3).total_time == 21.0);
    CHECK(strategy_a_gk(5).total_time == 65.0);
    for (int k = 1; k <= 10; ++k) CHECK(strategy_a_gk(k).total_time == 3.0 * k * k - 2.0 * k);
    const SolveResult r = strategy_a_gk(3);
    CHECK(r.sequence == ActivationSequence{0, 1, 2, 3, 10, 11, 4, 5, 6, 7, 8, 9});

    DiffusionInstance not_gk;
    not_gk.network = InfluenceNetwork(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    not_gk.z = 6;
    CHECK_THROWS_AS(strategy_a(not_gk), ValidationError);
    not_gk.network = InfluenceNetwork(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    not_gk.z = 5;
    CHECK_THROWS_AS(strategy_a(not_gk), ValidationError);
}

TEST_CASE("lower bounds on G(k) under every tie-break tried") {
    for (int k = 2; k <= 6; ++k) {
        const DiffusionInstance g = make_gk(k);
        const double kk = static_cast<double>(k) * k;
        const double greedy_floor = kk * harmonic(k);
        const double majority_floor = kk * (harmonic(k) - 1.0);
        CHECK(greedy_sequence(g).total_time >= greedy_floor - 1e-9);
        CHECK(majority_sequence(g).total_time >= majority_floor - 1e-9);
        for (std::uint64_t s = 0; s < 5; ++s) {
            CHECK(greedy_sequence(g, TieBreak::random(s)).total_time >= greedy_floor - 1e-9);
            CHECK(majority_sequence(g, TieBreak::random(s)).total_time >= majority_floor - 1e-9);
        }
    }
}

TEST_CASE("random tie-breaks are reproducible") {
    const DiffusionInstance g = make_gk(4);
    for (std::uint64_t s = 0; s < 5; ++s) {
        CHECK(greedy_sequence(g, TieBreak::random(s)).sequence == greedy_sequence(g, TieBreak::random(s)).sequence);
        CHECK(majority_sequence(g, TieBreak::random(s)).sequence ==
              majority_sequence(g, TieBreak::random(s)).sequence);
    }
}

TEST_CASE("heuristic sequences are priced like any other sequence") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        DiffusionInstance inst;
        inst.network = random_connected(8, 0.3, {0.5, 2.0, false}, seed);
        inst.z = 1 + seed % 8;
        inst.alpha = 0.5;
        for (const SolveResult& r : {greedy_sequence(inst), majority_sequence(inst)}) {
            CHECK(r.sequence.size() == inst.z);
            CHECK(r.total_time == sequence_time(inst, r.sequence).total_time);
            CHECK(r.total_time >= dp_optimal(inst).total_time - 1e-9);
        }
    }
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0));
}
